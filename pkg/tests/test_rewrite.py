import pytest
from hypothesis import given, strategies as st

from yoneda.freealg import Poly, make_presentation
from yoneda.rewrite import Algebra, NotConfluentError, build_rewrite_system, ideal_span
from yoneda.resolve import b_presentation, preset

import oracles

PRESETS = ["B0", "B1", "A1", "A2", "koszul2", "koszulmono2"]


def _rels(pres):
    return [dict(r.terms) for r in pres.relations]


@pytest.mark.parametrize("name", PRESETS)
def test_basis_dims_match_brute_force(name):
    alg = preset(name).alg
    for m in range(0, 5):
        want = oracles.quotient_dim(alg.ngens, _rels(alg.pres), m) if m else 1
        assert alg.dim(m) == want, (name, m)


@pytest.mark.parametrize("name", PRESETS)
def test_hilbert_counts_normal_words(name):
    alg = preset(name).alg
    assert alg.hilbert(6) == [len(alg.basis(m)) for m in range(7)]


def test_ideal_span_dimension():
    alg = preset("B1").alg
    for m in range(2, 5):
        assert ideal_span(alg.pres, m).rank == alg.ngens ** m - alg.dim(m)


def test_b1_rule_count():
    sys_ = build_rewrite_system(b_presentation(1))
    assert len(sys_.rules) == 6
    assert sys_.complete


def test_non_confluent_system_is_rejected():
    gens = ("x", "y")
    x, y = Poly.word((0,), gens), Poly.word((1,), gens)
    pres = make_presentation(gens, [y * x, x * y - x * x])
    with pytest.raises(NotConfluentError) as exc:
        build_rewrite_system(pres)
    assert [a[0] for a in exc.value.ambiguities] == [(0, 1, 0)]


def test_commutative_polynomials_are_confluent():
    alg = preset("koszul2").alg
    assert alg.hilbert(5) == [1, 2, 3, 4, 5, 6]


@st.composite
def b1_elements(draw):
    alg = preset("B1").alg
    terms = draw(st.dictionaries(
        st.lists(st.integers(0, alg.ngens - 1), min_size=1, max_size=3).map(tuple),
        st.integers(-2, 2), max_size=3))
    return Poly(terms, alg.gens)


@given(b1_elements())
def test_normal_form_is_idempotent_and_congruent(p):
    alg = preset("B1").alg
    q = alg.normal_form(p)
    assert alg.normal_form(q) == q
    assert all(alg.is_normal(w) for w in q.terms)
    diff = p - q
    for m in diff.degrees():
        part = {w: c for w, c in diff.terms.items() if len(w) == m}
        assert oracles.in_ideal(alg.ngens, _rels(alg.pres), part)


@given(b1_elements(), b1_elements(), b1_elements())
def test_multiplication_is_associative(a, b, c):
    alg = preset("B1").alg
    a, b, c = (alg.normal_form(t) for t in (a, b, c))
    assert alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c))


def test_monomial_basis_avoids_leads():
    alg = preset("A1").alg
    leads = [r.lead for r in alg.system.rules]
    for w in alg.basis(5):
        assert not any(w[i:i + len(l)] == l for l in leads for i in range(len(w)))
