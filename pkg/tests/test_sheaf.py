import pytest
from hypothesis import given

import oracles
from strategies import cosheaf_from_spans, graded_posets, nested_cosheaves, nested_spans, polygon_poset
from hocolim.errors import NotFunctorial
from hocolim.homalg import RationalMatrix
from hocolim.poset import FinitePoset, incidence_assignment, order_complex
from hocolim.sheaf import (
    Cosheaf,
    GradedCosheaf,
    cellular_homology,
    derived_limits,
    projective_resolution,
    refinement,
    sheaf_cohomology,
    zmss_duality_check,
)
from hocolim.spectra import lim_table
from hocolim.toric import cohomology_cosheaf, classifying_cosheaf

POINT = FinitePoset(["x"], [])
CP1 = FinitePoset(["0", "r+", "r-"], [("0", "r+"), ("0", "r-")])
CP2 = polygon_poset(3)
SQUARE = FinitePoset(
    [f"v{i}" for i in range(4)] + [f"e{i}" for i in range(4)],
    [(f"v{i}", f"e{i}") for i in range(4)] + [(f"v{(i + 1) % 4}", f"e{i}") for i in range(4)],
)


def _trim(xs):
    xs = list(xs)
    while xs and xs[-1] == 0:
        xs.pop()
    return xs


# -- cellular homology ------------------------------------------------------------

def test_cellular_point():
    assert cellular_homology(POINT, incidence_assignment(POINT), GradedCosheaf.constant(POINT)) == {0: [1]}


def test_cellular_constant_cp1():
    # the cells are one 0-cell (the cone point) and two 1-cells glued to it
    cw = cellular_homology(CP1, incidence_assignment(CP1), GradedCosheaf.constant(CP1))
    assert cw == {0: [0, 1]}


def test_cellular_constant_cp2():
    cw = cellular_homology(CP2, incidence_assignment(CP2), GradedCosheaf.constant(CP2))
    assert cw == {0: [0, 0, 1]}


# -- refinement ---------------------------------------------------------------------

def test_refinement_constant():
    R = refinement(GradedCosheaf.constant(CP2))
    assert len(R.base) == order_complex(CP2).count()
    assert set(R.pieces[0].dims.values()) == {1}
    assert all(m == RationalMatrix.identity(1) for m in R.pieces[0].maps.values())


def test_refinement_point():
    A = GradedCosheaf.constant(POINT, {0: 2, 1: 3})
    R = refinement(A)
    assert len(R.base) == 1 and R.stalk_dims(("x",)) == {0: 2, 1: 3}


# -- derived limits ---------------------------------------------------------------------

@pytest.mark.parametrize("method", ["refinement", "resolution"])
def test_constant_on_cone(method):
    assert _trim(derived_limits(GradedCosheaf.constant(CP2).pieces[0], method)) == [1]


@pytest.mark.parametrize("method", ["refinement", "resolution"])
def test_constant_on_circle(method):
    assert derived_limits(GradedCosheaf.constant(SQUARE).pieces[0], method) == [1, 1]


def test_cp1_cohomology_cosheaf(diagrams):
    TD = diagrams["cp1"]
    assert lim_table(TD) == {(0, 0): 1, (1, 1): 1}
    H = cohomology_cosheaf(TD)
    assert H.stalk_dims("{}") == {0: 1, 1: 1}
    assert H.stalk_dims("{0}") == H.stalk_dims("{1}") == {0: 1}
    assert all(m == RationalMatrix.identity(1) for m in H.pieces[0].maps.values())


def test_functoriality_checked():
    P = FinitePoset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    one = RationalMatrix.identity(1)
    maps = {c: one for c in P.covers}
    maps[("a", "b")] = one.scale(2)
    with pytest.raises(NotFunctorial):
        Cosheaf(P, {e: 1 for e in "abcd"}, maps)


@given(nested_cosheaves())
def test_routes_agree(F):
    assert _trim(derived_limits(F, "refinement")) == _trim(derived_limits(F, "resolution"))


@given(nested_spans(graded_posets(max_rank=2)))
def test_limits_against_nerve_oracle(data):
    P, spans = data
    F = cosheaf_from_spans(P, spans)
    ref = oracles.nerve_lim(list(P.elements), P.leq, lambda c: spans[c] or [[0, 0, 0]], 3)
    assert _trim(derived_limits(F, "refinement")) == _trim(ref)


@given(graded_posets())
def test_resolution_is_exact_for_constants(P):
    # lim of the constant functor is the cohomology of the order complex
    from hocolim.poset import reduced_euler_characteristic

    R = projective_resolution(P)
    dims = derived_limits(GradedCosheaf.constant(P).pieces[0], "resolution")
    assert sum((-1) ** i * v for i, v in enumerate(dims)) == reduced_euler_characteristic(P) + 1
    assert R.length >= 0


@pytest.mark.parametrize("name", ["cp1", "cp2", "cp3", "p1xp1", "hirzebruch1", "tripod"])
def test_routes_agree_on_corpus(diagrams, name):
    TD = diagrams[name]
    assert lim_table(TD, "refinement") == lim_table(TD, "resolution")
    CS = classifying_cosheaf(TD.stabilizers, 3)
    for deg, F in CS.cosheaf.pieces.items():
        assert _trim(derived_limits(F, "refinement")) == _trim(derived_limits(F, "resolution"))


# -- duality --------------------------------------------------------------------------

def test_duality_constant_cp1():
    rep = zmss_duality_check(CP1, GradedCosheaf.constant(CP1))
    assert rep.passed and not rep.skipped
    row = dict(rep.rows[0])
    # true values: lim = (1, 0) and H^cw_{1-i} = (1, 0)
    assert row["lim"] == (1, 0) and row["cellular"] == (1, 0)


def test_duality_cp2_cohomology(diagrams):
    TD = diagrams["cp2"]
    rep = zmss_duality_check(TD.base, cohomology_cosheaf(TD))
    assert rep.passed and len(rep.rows) == 3


def test_duality_point():
    A = GradedCosheaf.constant(POINT, {0: 1, 2: 4})
    rep = zmss_duality_check(POINT, A)
    assert rep.passed
    assert [dict(r)["lim"] for r in rep.rows] == [(1,), (4,)]


def test_duality_skipped_on_tripod(diagrams):
    TD = diagrams["tripod"]
    assert zmss_duality_check(TD.base, cohomology_cosheaf(TD)).skipped


def test_sheaf_cohomology_keys(diagrams):
    H = cohomology_cosheaf(diagrams["cp2"])
    assert set(sheaf_cohomology(H)) == {0, 1, 2}
