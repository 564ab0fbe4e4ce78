"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import contextlib
import os
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from yoneda.ainfty import Merkulov, basis_class, build_sdr, m_table, stasheff_check
from yoneda.gradedmod import verify_complex
from yoneda.k2 import k2_check
from yoneda.resolve import (betti_multisets, euler_characteristic, left_annihilator,
                            minimal_resolution, preset)
from yoneda.rewrite import build_rewrite_system

import oracles

REPORT = []


@contextlib.contextmanager
def criterion(num, title, limit):
    t0 = time.perf_counter()
    ok, detail = False, ""
    try:
        yield
        ok = True
    except AssertionError as e:
        detail = str(e).splitlines()[0] if str(e) else "assertion failed"
        raise
    finally:
        dt = time.perf_counter() - t0
        if ok and dt >= limit:
            ok, detail = False, "runtime %.1fs exceeds %ds" % (dt, limit)
        line = "[%s] criterion %2d  %-44s %7.2fs (limit %ds)%s" % (
            "PASS" if ok else "FAIL", num, title, dt, limit, "  " + detail if detail else "")
        REPORT.append(line)
        print(line)
    assert dt < limit, "criterion %d took %.1fs (limit %ds)" % (num, dt, limit)


def _rels(alg):
    return [dict(r.terms) for r in alg.pres.relations]


def test_c01_rewriting_basis():
    with criterion(1, "rewriting basis for B(0..2)", 30):
        for n in range(3):
            alg = preset("B%d" % n).alg
            system = build_rewrite_system(alg.pres, confluence_bound=8)
            assert system.certified(8) and not system.unresolved, n
            for m in range(1, 5):
                want = oracles.quotient_dim(alg.ngens, _rels(alg), m)
                assert alg.dim(m) == want, "B(%d) degree %d: %d != %d" % (n, m, alg.dim(m), want)


def _words(alg, polys):
    out = set()
    for p in polys:
        assert len(p.terms) == 1, "non-monomial generator %s" % alg.str(p)
        out.add(alg.str(alg.element({w: 1 for w in p.terms})))
    return out


def test_c02_annihilators():
    with criterion(2, "left annihilators in B(2)", 30):
        alg = preset("B2").alg
        w = alg.word
        g = {nm: (i,) for i, nm in enumerate(alg.gens)}
        expected = [
            (("b0",), set()), (("b1",), set()), (("b2",), set()),
            (("b1", "c1"), {"c1*a1"}),
            (("a1",), {"b1*c1", "b2"}),
            (("c1", "a1"), {"b1", "c0"}),
            (("b2", "c2"), {"a2"}),
            (("c2",), {"a2*b2", "c1"}),
            (("a0",), {"b1", "c0"}),
            (("a0", "b0"), {"b1", "c0"}),
        ]
        for word, want in expected:
            x = w(sum((g[s] for s in word), ()))
            got = _words(alg, left_annihilator(alg, x, 8))
            assert got == want, "l.ann(%s) = %s, expected %s" % ("".join(word), got, want)


def test_c03_resolution_oracle():
    with criterion(3, "generic vs explicit resolutions of B(0..2)", 300):
        for n in range(3):
            b = preset("B%d" % n, D=8)
            res = minimal_resolution(b.alg, 8, 14)
            assert all(res.stage_certified), n
            assert betti_multisets(res.complex) == betti_multisets(b.explicit), n
            for p in range(b.explicit.length):
                rep = verify_complex(b.explicit, p, 14)
                assert rep.is_complex and rep.is_minimal and rep.is_exact_at, (n, p, rep.details)


ALL_PRESETS = ["B0", "B1", "B2", "A1", "A2", "koszul2", "koszulmono2"]


def test_c04_euler_characteristic():
    with criterion(4, "Euler characteristic of Betti data", 60):
        for name in ALL_PRESETS:
            res = minimal_resolution(preset(name).alg, 8, 12)
            chi, top = euler_characteristic(res)
            assert top >= 8, (name, top)
            assert chi == [1] + [0] * top, name


def test_c05_k2_verdicts():
    with criterion(5, "K2 verdicts", 120):
        for name, D, want in [("B0", 8, True), ("B1", 8, True), ("A1", 4, True),
                              ("A2", 4, False), ("koszulmono2", 6, True)]:
            alg = preset(name).alg
            rep = k2_check(alg, minimal_resolution(alg, D, 14), D)
            assert rep.verdict is want, name
            assert rep.certified, name
            if not want:
                wit = rep.witness()
                assert wit.d == 3 and wit.dependent_rows == [0], name
                assert wit.L == [{}] and wit.E == [{}], "witness row is not zero"


def test_c06_equal_betti_tables():
    with criterion(6, "A1 and A2 share their Betti table", 30):
        want = [[0], [-1] * 4, [-3, -3, -4], [-5]]
        tables = []
        for name in ("A1", "A2"):
            res = minimal_resolution(preset(name).alg, 6, 12)
            assert res.finished, name
            tables.append([sorted(s, reverse=True) for s in res.betti() if s])
        assert tables[0] == tables[1] == want, tables


def test_c07_sdr_integrity():
    with criterion(7, "homotopy retract data", 300):
        for name, J in [("A1", 4), ("A2", 4), ("B0", 6), ("B1", 5)]:
            res = minimal_resolution(preset(name).alg, J, 2 * J + 2)
            sdr, rep = build_sdr(res, J)
            assert rep.pi_identity, name
            for c in rep.degrees:
                assert c.ok, (name, c.n, c.w, c.failures)
                assert c.dim_Z == c.dim_B + c.dim_H, (name, c)
                assert c.dim_U == c.dim_L + c.dim_Z, (name, c)


def _pattern(name, J):
    b = preset(name)
    res = minimal_resolution(b.alg, J, 2 * J + 2)
    sdr, _ = build_sdr(res, J, verify=False)
    labels = b.label_resolution(res, top=J)
    tab = m_table(Merkulov(sdr), 4, J - 1)
    return {"".join(labels[x] for x in xs) for xs in tab.nonzero()}


def test_c08_higher_product_patterns():
    with criterion(8, "nonzero m_k on E(A1) and E(A2)", 120):
        got1 = _pattern("A1", 5)
        got2 = _pattern("A2", 5)
        assert got1 == {"YYZX", "ZXX", "YYW", "YYR1_2", "R1_3X"}, got1
        assert got2 == {"YYWW", "ZXX", "YYZ", "YYR2_2", "R2_1XX"}, got2


def _long_products(n):
    alg = preset("B%d" % n).alg
    T = 3 * n + 3
    J = T + 1
    res = minimal_resolution(alg, J, 2 * J + 4)
    sdr, _ = build_sdr(res, J, verify=False)
    mk = Merkulov(sdr)

    def a(i):
        return basis_class(1, 3 * i)

    def b(i):
        return basis_class(1, 3 * i + 1)

    def c(i):
        return basis_class(1, 3 * i + 2)

    gamma = c(0)
    for i in range(1, n + 1):
        gamma = mk.m_linear([gamma, c(i)])
    assert not gamma.is_zero(), "gamma product vanishes for n=%d" % n
    out = []
    for j in range(n + 1):
        args = [a(j)] + [mk.m_linear([b(i), a(i - 1)]) for i in range(j, 0, -1)] + [b(0), gamma]
        assert all(not x.is_zero() for x in args)
        out.append(mk.m_linear(args))
    return out


def test_c09_long_products_nonzero():
    with criterion(9, "m_{j+3} on B(0), B(1) nonzero", 600):
        for n in (0, 1):
            vals = _long_products(n)
            for j, v in enumerate(vals):
                assert not v.is_zero(), "m_%d vanishes for n=%d" % (j + 3, n)


def test_c09b_long_products_stretch():
    with criterion(9, "stretch: same for B(2)", 600):
        assert all(not v.is_zero() for v in _long_products(2))


def test_c10_koszul_vanishing():
    with criterion(10, "higher m_k vanish on Koszul presets", 120):
        for name in ("koszul2", "koszulmono2"):
            J = 7
            res = minimal_resolution(preset(name).alg, J, 2 * J + 2)
            sdr, _ = build_sdr(res, J, verify=False)
            # without pruning every tensor is actually computed
            tab = m_table(Merkulov(sdr, prune=False), 6, 6, k_min=3)
            assert len(tab.entries) > 0
            bad = tab.nonzero()
            assert not bad, (name, sorted(bad)[:3])


def test_c11_stasheff():
    with criterion(11, "Stasheff identities SI(n), n <= 5", 600):
        for name, J, T in [("A1", 4, 5), ("A2", 4, 5), ("B0", 6, 5), ("B1", 6, 5)]:
            res = minimal_resolution(preset(name).alg, J, 2 * J + 2)
            sdr, _ = build_sdr(res, J, verify=False)
            rep = stasheff_check(Merkulov(sdr), 5, T)
            assert rep.checked > 0
            assert rep.ok, (name, rep.residuals[:2])


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
