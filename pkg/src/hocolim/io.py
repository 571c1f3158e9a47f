"""JSON input for posets, fans and T-diagrams, and deterministic report output.

Schemas::

    poset     {"elements": [...], "covers": [[lower, upper], ...]}
    fan       {"rays": [[...], ...], "cones": [[], [0], ..., [0, 1], ...]}
    tdiagram  {"poset": <poset>, "k": 2, "rank": {elem: r},
               "arrows": [[lower, upper, matrix], ...],
               "augmentation": {elem: matrix}}

Matrices are lists of rows. An optional "kind" key overrides detection.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import SchemaError
from .poset import FinitePoset
from .toric import Fan, LatticeHom, TDiagram, TorusDiagram, fan_to_diagram

KINDS = ("poset", "fan", "tdiagram")


def data_dir() -> Path:
    return Path(str(resources.files("hocolim") / "data"))


def corpus() -> list[str]:
    return sorted(p.name for p in data_dir().glob("*.json"))


def resolve(path: str | Path) -> Path:
    """The file itself if it exists, else the bundled corpus file of that basename."""
    p = Path(path)
    if p.exists():
        return p
    q = data_dir() / p.name
    if q.exists():
        return q
    raise SchemaError(f"{path}: no such file (and no bundled corpus file {p.name!r})")


def load_json(path: str | Path) -> tuple[str, Any]:
    p = resolve(path)
    text = p.read_text()
    try:
        return p.name, json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{p.name}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def detect_kind(obj: Any) -> str:
    if not isinstance(obj, dict):
        raise SchemaError("top level must be a JSON object")
    kind = obj.get("kind")
    if kind is not None:
        if kind not in KINDS:
            raise SchemaError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        return kind
    if "rays" in obj:
        return "fan"
    if "poset" in obj:
        return "tdiagram"
    if "elements" in obj:
        return "poset"
    raise SchemaError("cannot tell the input kind: expected 'rays', 'poset' or 'elements'")


def _require(obj: dict, key: str, typ, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, typ):
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return val


def _label(x) -> str:
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return str(x)
    raise SchemaError(f"element names must be strings or integers, got {x!r}")


def _int_matrix(m, where: str) -> list[list[int]]:
    if not isinstance(m, list) or any(not isinstance(r, list) for r in m):
        raise SchemaError(f"{where}: matrix must be a list of rows")
    for r in m:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise SchemaError(f"{where}: matrix entries must be integers")
    if m and len({len(r) for r in m}) != 1:
        raise SchemaError(f"{where}: ragged matrix")
    return [list(r) for r in m]


def poset_from_json(obj: dict) -> FinitePoset:
    els = _require(obj, "elements", list, "poset")
    covers = _require(obj, "covers", list, "poset")
    names = [_label(e) for e in els]
    if len(set(names)) != len(names):
        raise SchemaError("poset: duplicate element names")
    known = set(names)
    pairs = []
    for i, c in enumerate(covers):
        if not isinstance(c, list) or len(c) != 2:
            raise SchemaError(f"poset: cover #{i} must be a pair")
        lo, up = _label(c[0]), _label(c[1])
        for e in (lo, up):
            if e not in known:
                raise SchemaError(f"poset: cover #{i} names unknown element {e!r}")
        pairs.append((lo, up))
    return FinitePoset(names, pairs)


def fan_from_json(obj: dict) -> Fan:
    rays = _int_matrix(_require(obj, "rays", list, "fan"), "fan rays")
    cones = _require(obj, "cones", list, "fan")
    for i, c in enumerate(cones):
        if not isinstance(c, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in c):
            raise SchemaError(f"fan: cone #{i} must be a list of ray indices")
    return Fan.from_data(rays, cones)


def tdiagram_from_json(obj: dict) -> TDiagram:
    P = poset_from_json(_require(obj, "poset", dict, "tdiagram"))
    k = _require(obj, "k", int, "tdiagram")
    rank_raw = _require(obj, "rank", dict, "tdiagram")
    rank = {}
    for e in P.elements:
        if e not in rank_raw or not isinstance(rank_raw[e], int):
            raise SchemaError(f"tdiagram: missing or invalid rank for element {e!r}")
        rank[e] = rank_raw[e]
    arrows = {}
    for i, a in enumerate(_require(obj, "arrows", list, "tdiagram")):
        if not isinstance(a, list) or len(a) != 3:
            raise SchemaError(f"tdiagram: arrow #{i} must be [lower, upper, matrix]")
        lo, up = _label(a[0]), _label(a[1])
        if (lo, up) not in set(P.covers):
            raise SchemaError(f"tdiagram: arrow #{i} ({lo!r}, {up!r}) is not a cover")
        M = _int_matrix(a[2], f"arrow ({lo}, {up})")
        if len(M) != rank[up] or (M and len(M[0]) != rank[lo]):
            raise SchemaError(f"tdiagram: arrow ({lo}, {up}) should be {rank[up]}x{rank[lo]}")
        arrows[(lo, up)] = LatticeHom.of(M, rank[lo])
    for c in P.covers:
        if c not in arrows:
            raise SchemaError(f"tdiagram: no arrow for cover {c!r}")
    aug_raw = _require(obj, "augmentation", dict, "tdiagram")
    aug = {}
    for e in P.elements:
        if e not in aug_raw:
            raise SchemaError(f"tdiagram: missing augmentation for element {e!r}")
        M = _int_matrix(aug_raw[e], f"augmentation at {e}")
        if len(M) != rank[e] or (M and len(M[0]) != k):
            raise SchemaError(f"tdiagram: augmentation at {e} should be {rank[e]}x{k}")
        aug[e] = LatticeHom.of(M, k)
    return TDiagram(TorusDiagram(P, rank, arrows), k, aug)


def load(path: str | Path) -> tuple[str, str, Any]:
    """(file name, kind, object) where object is a FinitePoset, Fan or TDiagram."""
    name, obj = load_json(path)
    kind = detect_kind(obj)
    if kind == "poset":
        return name, kind, poset_from_json(obj)
    if kind == "fan":
        return name, kind, fan_from_json(obj)
    return name, kind, tdiagram_from_json(obj)


def load_diagram(path: str | Path) -> tuple[str, TDiagram]:
    name, kind, obj = load(path)
    if kind == "fan":
        return name, fan_to_diagram(obj)
    if kind == "tdiagram":
        return name, obj
    raise SchemaError(f"{name}: expected a fan or a T-diagram, got a {kind}")


def load_poset(path: str | Path) -> tuple[str, FinitePoset]:
    name, kind, obj = load(path)
    if kind == "poset":
        return name, obj
    return name, (fan_to_diagram(obj) if kind == "fan" else obj).base


def tdiagram_to_json(TD: TDiagram) -> dict:
    P = TD.base
    return {
        "kind": "tdiagram",
        "poset": {"elements": list(P.elements), "covers": [list(c) for c in P.covers]},
        "k": TD.k,
        "rank": {e: TD.diagram.rank[e] for e in P.elements},
        "arrows": [[lo, up, TD.diagram.arrow[(lo, up)].rows()] for lo, up in P.covers],
        "augmentation": {e: TD.aug[e].rows() for e in P.elements},
    }


def _plain(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items() if not str(k).startswith("_")}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


def dumps(report: dict) -> str:
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def to_markdown(report: dict, title: str) -> str:
    lines = [f"# {title}", ""]

    def walk(prefix: str, x):
        if isinstance(x, dict):
            for k in sorted(x, key=str):
                walk(f"{prefix}.{k}" if prefix else str(k), x[k])
        else:
            lines.append(f"| `{prefix}` | `{json.dumps(x, sort_keys=True)}` |")

    lines += ["| key | value |", "|---|---|"]
    walk("", _plain(report))
    return "\n".join(lines) + "\n"
