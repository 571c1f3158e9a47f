"""Command-line front end.

Every command writes one JSON (or markdown) report with sorted keys. Exit
status: 0 success, 1 an identity that should hold failed, 2 bad input.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import io
from .errors import ExactnessFailure, HocolimError, NotAComplex
from .poset import (
    f_h_vectors,
    incidence_assignment,
    is_homology_manifold,
    is_simplicial_poset,
    order_complex,
)
from .skeleton import cp_verify, skeleton_bigraded, skeleton_cohomology, taylor_resolution
from .spectra import (
    betti_from_tor,
    betti_numbers,
    bigraded_betti,
    cm_check,
    comparison_check,
    default_t_max,
    ef_check,
    equivariant_betti,
    euler_h_check,
    lim_table,
    orbit_ss_page2,
)
from .toric import is_strongly_reduced, is_t_characteristic, orbit_shift


class VerificationFailed(Exception):
    pass


def _workers(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    try:
        return max(1, int(os.environ.get("HOCOLIM_WORKERS", "1")))
    except ValueError:
        raise click.BadParameter("HOCOLIM_WORKERS must be an integer") from None


def _hypotheses(TD) -> dict:
    C = TD.base
    return {
        "homology_manifold": bool(is_homology_manifold(C)),
        "strongly_reduced": is_strongly_reduced(TD),
        "orbit_shift": orbit_shift(TD),
        "t_characteristic": is_t_characteristic(TD),
    }


def _emit(ctx: click.Context, report: dict, ok: bool = True):
    opts = ctx.obj
    title = f"{ctx.info_name} {report.get('input', '')}".strip()
    text = io.to_markdown(report, title) if opts["format"] == "markdown" else io.dumps(report)
    if opts["output"]:
        Path(opts["output"]).write_text(text)
    else:
        click.echo(text, nl=False)
    if not ok:
        raise VerificationFailed()


def _base(ctx: click.Context, name: str, TD) -> dict:
    return {"command": ctx.info_name, "input": name, "k": TD.k, "dim": TD.base.dim,
            "hypotheses": _hypotheses(TD)}


input_arg = click.argument("input_path", metavar="INPUT")
t_max_opt = click.option("--t-max", type=click.IntRange(min=0), default=None,
                         help="Truncation: H^*(BS) is computed through degree 2*t_max.")


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default="json", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write the report here.")
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Worker processes for independent cells (default: $HOCOLIM_WORKERS or 1).")
@click.pass_context
def cli(ctx: click.Context, fmt: str, output: str | None, workers: int | None):
    """Homotopy colimits of toric diagrams: Betti numbers and identity checks."""
    ctx.obj = {"format": fmt, "output": output, "workers": _workers(workers)}


@cli.command()
@input_arg
@click.option("--method", type=click.Choice(["auto", "refinement", "resolution"]), default="auto", show_default=True)
@click.pass_context
def betti(ctx, input_path, method):
    """Betti numbers as sums of derived limits of H^*(D)."""
    name, TD = io.load_diagram(input_path)
    bt = betti_numbers(TD, method)
    rep = _base(ctx, name, TD)
    rep.update(bt.as_dict())
    rep["lim"] = {f"{i},{j}": v for (i, j), v in sorted(lim_table(TD, method).items())}
    _emit(ctx, rep)


@cli.command()
@input_arg
@t_max_opt
@click.pass_context
def equivariant(ctx, input_path, t_max):
    """Dimensions of lim^i H^{2t}(BS); lim^0 is equivariant cohomology."""
    name, TD = io.load_diagram(input_path)
    eq = equivariant_betti(TD, t_max)
    rep = _base(ctx, name, TD)
    rep.update(eq.as_dict())
    _emit(ctx, rep)


@cli.command()
@input_arg
@t_max_opt
@click.pass_context
def bigraded(ctx, input_path, t_max):
    """Bigraded Betti numbers via the Koszul complex over H^*(BT)."""
    name, TD = io.load_diagram(input_path)
    t_max = default_t_max(TD) if t_max is None else t_max
    eq = equivariant_betti(TD, t_max)
    beta = bigraded_betti(TD, t_max, module=eq.module)
    rep = _base(ctx, name, TD)
    rep.update(beta.as_dict())
    rep["acyclic_through_degree"] = 2 * t_max if all(not any(v[1:]) for v in eq.lims.values()) else None
    rep["betti_from_tor"] = betti_from_tor(beta)
    _emit(ctx, rep)


@cli.command("orbit-ss")
@input_arg
@click.pass_context
def orbit_ss(ctx, input_path):
    """Second page of the orbit spectral sequence and its antidiagonal sums."""
    name, TD = io.load_diagram(input_path)
    page = orbit_ss_page2(TD)
    rep = _base(ctx, name, TD)
    rep.update(page.as_dict())
    _emit(ctx, rep, page.matches_betti is not False)


@cli.command()
@input_arg
@t_max_opt
@click.pass_context
def compare(ctx, input_path, t_max):
    """Bigraded Betti numbers against derived limits of H^*(D)."""
    name, TD = io.load_diagram(input_path)
    res = comparison_check(TD, t_max)
    rep = _base(ctx, name, TD)
    rep.update(res)
    _emit(ctx, rep, res["passed"] is not False)


@cli.command("cm-check")
@input_arg
@t_max_opt
@click.pass_context
def cm_check_cmd(ctx, input_path, t_max):
    """Cohen-Macaulay criterion: acyclicity against cellular vanishing."""
    name, TD = io.load_diagram(input_path)
    res = cm_check(TD, t_max)
    rep = _base(ctx, name, TD)
    rep.update(res)
    _emit(ctx, rep, res.get("passed", True) is not False)


@cli.command("ef-check")
@input_arg
@click.pass_context
def ef_check_cmd(ctx, input_path):
    """Equivariant formality: vanishing of odd Betti numbers."""
    name, TD = io.load_diagram(input_path)
    bt = betti_numbers(TD)
    rep = _base(ctx, name, TD)
    rep.update({"b": list(bt.b), "equivariantly_formal": ef_check(TD, bt)})
    _emit(ctx, rep)


@cli.command()
@input_arg
@click.pass_context
def hvector(ctx, input_path):
    """f- and h-vectors; for diagrams also the even Betti number identity."""
    name, kind, obj = io.load(input_path)
    if kind == "poset":
        fh = f_h_vectors(obj)
        _emit(ctx, {"command": "hvector", "input": name, "f": list(fh.f), "h": [str(x) for x in fh.h]})
        return
    _, TD = io.load_diagram(input_path)
    res = euler_h_check(TD)
    rep = _base(ctx, name, TD)
    fh = f_h_vectors(TD.base)
    rep.update({"f": list(fh.f), "h": [str(x) for x in fh.h], "betti_identity": res})
    _emit(ctx, rep, res.get("passed", True) is not False)


def _skeleton_job(args):
    path, q, with_bigraded, t_max = args
    _, TD = io.load_diagram(path)
    out = skeleton_cohomology(TD, q)
    out.pop("_table", None)
    if with_bigraded:
        out["bigraded"] = skeleton_bigraded(TD, q, t_max)
    return out


@cli.command()
@input_arg
@click.option("--q", "q", type=click.IntRange(min=0), default=None, help="Skeleton rank (default: all).")
@click.option("--bigraded/--no-bigraded", default=False, help="Also check the bigraded skeleton formulas.")
@t_max_opt
@click.pass_context
def skeleton(ctx, input_path, q, bigraded, t_max):
    """Cohomology of rank skeleta, the Taylor resolution and the skeleton identities."""
    name, TD = io.load_diagram(input_path)
    path = str(io.resolve(input_path))
    qs = list(range(TD.base.dim + 1)) if q is None else [q]
    jobs = [(path, x, bigraded, t_max) for x in qs]
    workers = ctx.obj["workers"]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_skeleton_job, jobs))
    else:
        results = [_skeleton_job(j) for j in jobs]
    R = taylor_resolution(TD)
    from .sheaf import sheaf_cohomology

    direct = sheaf_cohomology(R.j_star)
    via = R.lim_cohomology()
    taylor = {
        "lim_terms": {str(j): v for j, v in R.lim_dims.items()},
        "lim_complex_cohomology": {str(j): v for j, v in via.items()},
        "lim_J": {str(j): v for j, v in direct.items()},
        "agree": all(_trim(via[j]) == _trim(direct.get(j, [])) for j in via),
    }
    rep = _base(ctx, name, TD)
    rep.update({"skeleta": results, "taylor": taylor})
    ok = taylor["agree"] and all(r["passed"] and r.get("bigraded", {"passed": True})["passed"] for r in results)
    _emit(ctx, rep, ok)


def _trim(xs):
    xs = list(xs)
    while xs and xs[-1] == 0:
        xs.pop()
    return xs


@cli.command("cp-verify")
@click.option("--m", "m", type=click.IntRange(min=2), required=True)
@click.option("--qmax", type=click.IntRange(min=0), default=None)
@click.option("--jmax", type=click.IntRange(min=0), default=None)
@click.option("--domain", type=click.Choice(["all", "closed-form"]), default="all", show_default=True,
              help="'closed-form' only requires agreement for j >= q+1, where the sums are claimed.")
@click.pass_context
def cp_verify_cmd(ctx, m, qmax, jmax, domain):
    """Closed forms for skeleta of CP^{m-1} against the direct computation."""
    res = cp_verify(m, qmax, jmax, workers=ctx.obj["workers"])
    res["command"] = "cp-verify"
    res["domain"] = domain
    ok = res["all_equal"] if domain == "all" else res["all_equal_above_diagonal"]
    _emit(ctx, res, ok)


@cli.command("certify-poset")
@input_arg
@click.pass_context
def certify_poset(ctx, input_path):
    """Homology-manifold, simplicial and incidence certification of a base poset."""
    name, P = io.load_poset(input_path)
    man = is_homology_manifold(P)
    rep = {"command": "certify-poset", "input": name, "dim": P.dim,
           "homology_manifold": bool(man),
           "failures": [{"element": e, "q": q, "dim": v} for e, q, v in man.failures],
           "simplicial": is_simplicial_poset(P),
           "order_complex_f": list(order_complex(P).f_vector())}
    try:
        incidence_assignment(P)
        rep["incidence_signs"] = True
    except HocolimError as exc:
        rep["incidence_signs"] = False
        rep["incidence_error"] = str(exc)
    fh = f_h_vectors(P)
    rep["f"] = list(fh.f)
    rep["h"] = [str(x) for x in fh.h]
    _emit(ctx, rep)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="hocolim", standalone_mode=False)
    except VerificationFailed:
        return 1
    except (ExactnessFailure, NotAComplex) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except HocolimError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 2
    except click.exceptions.Abort:
        return 2
    except click.ClickException as exc:
        exc.show()
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
