from math import comb

import pytest

import frozen
from hocolim.errors import NotCharacteristic, OutOfRange
from hocolim.poset import FinitePoset, coskeleton
from hocolim.sheaf import sheaf_cohomology
from hocolim.skeleton import (
    cp_closed_forms,
    cp_diagram,
    cp_direct,
    cp_verify,
    gbin,
    j_cosheaf,
    j_sequence_check,
    restrict_diagram,
    skeleton_bigraded,
    skeleton_cohomology,
    taylor_resolution,
)
from hocolim.spectra import bigraded_betti, lim_table
from hocolim.toric import diagram_from_stabilizers


def _trim(xs):
    xs = list(xs)
    while xs and xs[-1] == 0:
        xs.pop()
    return xs


def _triples(table):
    return sorted((a, b, v) for (a, b), v in table.items() if v)


# -- restriction ---------------------------------------------------------------

def test_restrict_full(diagrams):
    TD = diagrams["cp2"]
    assert lim_table(restrict_diagram(TD, 2)) == lim_table(TD)


def test_restrict_examples(diagrams):
    TD = diagrams["cp2"]
    assert len(restrict_diagram(TD, 1).base) == 4
    R0 = restrict_diagram(TD, 0)
    assert R0.base.elements == ("{}",) and R0.diagram.rank["{}"] == 2


@pytest.mark.parametrize("key", sorted(frozen.CP_SKELETON))
def test_cp_skeleton_tables(key):
    m, q = map(int, key.split(","))
    assert _triples(lim_table(restrict_diagram(cp_diagram(m), q))) == frozen.CP_SKELETON[key]


# -- J* and the Taylor resolution ----------------------------------------------------

def test_j_trivial_stabilizer(diagrams):
    assert j_cosheaf(diagrams["cp1"]).stalk_dims("{}") == {}


def test_j_cp1_ray(diagrams):
    assert j_cosheaf(diagrams["cp1"]).stalk_dims("{0}") == {1: 1}


def test_one_atom():
    TD = diagram_from_stabilizers(FinitePoset(["0", "a"], [("0", "a")]), 1, {"0": [[]], "a": [[1]]})
    R = taylor_resolution(TD)
    assert R.length == 1
    assert R.lim_dims == {0: [0], 1: [1]}


@pytest.mark.parametrize("name", ["cp1", "cp2", "cp3", "p1xp1", "hirzebruch1", "tripod"])
def test_taylor_cohomology_form(diagrams, name):
    # the limits of the acyclic terms form a complex computing lim^i J*
    R = taylor_resolution(diagrams[name])
    direct = sheaf_cohomology(R.j_star)
    via = R.lim_cohomology()
    for j in via:
        assert _trim(via[j]) == _trim(direct.get(j, []))


def test_taylor_termwise_differs_on_cp2(diagrams):
    R = taylor_resolution(diagrams["cp2"])
    termwise = [sum(R.lim_dims[j][i] for j in R.lim_dims) for i in range(2)]
    cohom = [sum((sheaf_cohomology(R.j_star)[j] + [0, 0])[i] for j in (1, 2)) for i in range(2)]
    assert termwise == [6, 3] and cohom == [4, 1]


@pytest.mark.parametrize("name", ["cp1", "cp2", "cp3", "p1xp1", "hirzebruch1"])
def test_j_sequence(diagrams, name):
    assert j_sequence_check(diagrams[name])["passed"]


def test_not_characteristic():
    B2 = FinitePoset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    TD = diagram_from_stabilizers(B2, 2, {"0": [[], []], "a": [[1], [0]], "b": [[1], [2]], "1": [[1, 0], [0, 1]]})
    with pytest.raises(NotCharacteristic):
        taylor_resolution(TD)


# -- skeleton theorem -------------------------------------------------------------

def test_skeleton_full(diagrams):
    TD = diagrams["cp2"]
    res = skeleton_cohomology(TD, 2)
    assert res["_table"] == lim_table(TD) and res["passed"]


@pytest.mark.parametrize("name,q", [("cp2", 1), ("cp3", 2), ("cp3", 1), ("p1xp1", 1), ("hirzebruch1", 0)])
def test_skeleton_identities(diagrams, name, q):
    res = skeleton_cohomology(diagrams[name], q)
    assert res["stability"] and res["vanishing"] and res["boundary_identity"]


@pytest.mark.parametrize("name,q", [("cp2", 1), ("cp3", 1), ("cp3", 2), ("p1xp1", 1), ("cp2", 2)])
def test_skeleton_bigraded(diagrams, name, q):
    assert skeleton_bigraded(diagrams[name], q)["passed"]


def test_skeleton_bigraded_full_is_unrestricted(diagrams):
    TD = diagrams["cp2"]
    res = skeleton_bigraded(TD, 2)
    koszul = {(c["i"], c["t"]): c["koszul"] for c in res["cells"] if c["koszul"]}
    assert koszul == bigraded_betti(TD, 4).nonzero()


def test_cp1_zero_skeleton_vs_coskeleton(diagrams):
    TD = diagrams["cp1"]
    sk = bigraded_betti(restrict_diagram(TD, 0), 2).nonzero()
    assert sk == {(0, 0): 1, (1, 1): 1}
    cos = bigraded_betti(TD.restrict(coskeleton(TD.base, 1)), 2).nonzero()
    assert cos == {(0, 0): 2}


# -- closed forms for CP^{m-1} -------------------------------------------------------

def test_gbin():
    assert gbin(5, 2) == 10 and gbin(-1, 0) == 1 and gbin(-1, 3) == -1 and gbin(3, -1) == 0
    assert all(gbin(n, r) == comb(n, r) for n in range(7) for r in range(7))


def test_closed_forms_vanish_for_large_j():
    for m in range(3, 7):
        for q in range(m - 1):
            assert cp_closed_forms(m, q, m + 3) == (0, 0)


def test_closed_forms_m3_q0():
    vals = [cp_closed_forms(3, 0, j) for j in range(4)]
    assert all(a == b for a, b in vals)


def test_zero_convention_breaks_agreement():
    assert cp_closed_forms(3, 1, 2) == (1, 1)
    assert cp_closed_forms(3, 1, 2, convention="zero")[1] != 1


def test_cp_verify_m6():
    res = cp_verify(6)
    assert res["sums_agree"] and res["all_equal_above_diagonal"]
    # below the diagonal the sums are +-1 where the limit vanishes
    low = [c for c in res["cells"] if c["j"] <= c["q"]]
    assert all(c["direct"] == 0 and abs(c["first"]) == 1 for c in low)


def test_cp_direct_matches_restriction():
    assert cp_direct(4, 1) == lim_table(restrict_diagram(cp_diagram(4), 2))


def test_out_of_range():
    with pytest.raises(OutOfRange):
        cp_closed_forms(3, 2, 0)
    with pytest.raises(OutOfRange):
        cp_diagram(1)
