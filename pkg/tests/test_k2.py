import pytest

from yoneda.k2 import EssentialSpace, k2_check
from yoneda.resolve import minimal_resolution, preset

import oracles


@pytest.mark.parametrize("name", ["A1", "A2", "B0", "koszulmono2"])
def test_essential_dims_match_brute_force(name):
    alg = preset(name).alg
    ess = EssentialSpace(alg, 6)
    rels = [dict(r.terms) for r in alg.pres.relations]
    for m in range(2, 6):
        full = oracles.rank(oracles.ideal_rows(alg.ngens, rels, m))
        prime = oracles.rank(oracles.prime_rows(alg.ngens, rels, m))
        assert ess.dim(m) == full - prime, (name, m)


def test_every_relation_of_a1_is_essential():
    alg = preset("A1").alg
    ess = EssentialSpace(alg, 6)
    assert all(ess.is_essential(r) for r in alg.pres.relations)


def test_k2_verdicts_small():
    for name, D, want in [("A1", 4, True), ("A2", 4, False), ("koszulmono2", 5, True)]:
        alg = preset(name).alg
        rep = k2_check(alg, minimal_resolution(alg, D, 12), D)
        assert rep.verdict is want, name
        assert rep.certified


def test_a2_witness():
    alg = preset("A2").alg
    rep = k2_check(alg, minimal_resolution(alg, 4, 10), 4)
    w = rep.witness()
    assert w.d == 3 and w.rows == 1 and w.rank == 0
    assert w.L == [{}] and w.E == [{}]


def test_short_resolution_is_refused():
    alg = preset("B1").alg
    res = minimal_resolution(alg, 3, 8)
    with pytest.raises(ValueError):
        k2_check(alg, res, 6)


def test_uncertified_verdict_for_commutative_koszul():
    alg = preset("koszul2").alg
    rep = k2_check(alg, minimal_resolution(alg, 4, 8), 4)
    assert rep.verdict and not rep.certified
