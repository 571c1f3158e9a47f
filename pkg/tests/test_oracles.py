"""The brute-force oracles reproduce the frozen reference values."""

import pytest

import frozen
import oracles
from conftest import fan_data


def _triples(table):
    return sorted((a, b, v) for (a, b), v in table.items() if v)


@pytest.mark.parametrize("name", frozen.FANS)
def test_fan_lim(name):
    d = fan_data(name)
    assert _triples(oracles.fan_lim_table(d["rays"], d["cones"])) == frozen.LIM[name]


@pytest.mark.parametrize("name", frozen.FANS)
def test_face_ring_hilbert(name):
    d = fan_data(name)
    assert oracles.stanley_reisner_hilbert(len(d["rays"]), d["cones"], 6) == frozen.SR_HILBERT[name]


@pytest.mark.parametrize("name", ["cp1", "cp2", "p1xp1"])
def test_face_ring_tor(name):
    d = fan_data(name)
    assert _triples(oracles.stanley_reisner_tor(d["rays"], d["cones"], 4)) == [
        x for x in frozen.SR_TOR[name] if x[1] <= 4
    ]


def _cp_skeleton_oracle(m, q):
    n = m - 1
    rays = [[int(i == a) for i in range(n)] for a in range(n)] + [[-1] * n]
    from itertools import combinations

    cones = [c for r in range(min(q, n) + 1) for c in combinations(range(m), r)]
    return oracles.fan_lim_table(rays, cones)


@pytest.mark.parametrize("key", sorted(frozen.CP_SKELETON))
def test_cp_skeleton(key):
    m, q = map(int, key.split(","))
    assert _triples(_cp_skeleton_oracle(m, q)) == frozen.CP_SKELETON[key]


def test_tripod_apex():
    els = ["0", "a", "b", "c"]
    leq = lambda x, y: x == y or x == "0"  # noqa: E731
    rank_of = lambda x: 0 if x == "0" else 1  # noqa: E731
    assert oracles.local_cohomology(els, leq, rank_of, "0") == frozen.TRIPOD_APEX_STALK
