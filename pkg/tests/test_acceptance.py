"""Acceptance criteria, one test each.

Criteria 2 and 6 check the identities exactly as printed; both are known to
fail and the failure message carries the measured residuals together with
the result for the corrected statement.
"""

import time
from fractions import Fraction

from sympow_padic.iwasawa import AlgebraConfig
from sympow_padic.lfactory import enumerate_signs
from sympow_padic.special import det_identity_check, growth_check, pollack_log
from sympow_padic.suites import (
    suite_decomposition,
    suite_efactor,
    suite_kl,
    suite_logpm,
    suite_matrix,
    suite_polygons,
)
from sympow_padic.sympower import build_context
from sympow_padic.zeros import brute_force_zeros, locate_trivial_zeros, residue_model, vanishing_order


def _summary(res, limit=6):
    return "; ".join(c["name"] for c in res.failures[:limit])


def test_criterion_01_kubota_leopoldt_interpolation():
    t0 = time.time()
    results = [suite_kl(p=p, etas=("triv", "-3", "-4"), N=8, M=24, level=6, min_prec=4) for p in (3, 5)]
    elapsed = time.time() - t0
    for res in results:
        assert res.passed, _summary(res)
        wild = [c for c in res.checks if c.get("c") == 2 and c["passed"]]
        assert wild, "no conductor-p^2 point was checked"
    assert elapsed < 60, f"{elapsed:.1f} s"


def test_criterion_02_determinant_identity():
    rows, bad = [], []
    for p in (3, 5):
        for k in (2, 3, 4):
            t0 = time.time()
            r = det_identity_check(k, AlgebraConfig(p, 30, 30))
            dt = time.time() - t0
            target = r.N - r.slack
            rows.append(f"p={p} k={k}: literal v={r.literal_valuation}, Tw_1 v={r.corrected_valuation}, "
                        f"target {target}, {dt:.1f} s")
            if r.literal_valuation < target or dt >= 30:
                bad.append(rows[-1])
    assert not bad, "printed identity fails: " + " | ".join(bad)


def test_criterion_03_log_zero_locus():
    res = suite_logpm(p=3, b_max=3, c_max=4, N=16, M=400)
    locus = [c for c in res.checks if "conductor" in c["name"]]
    assert any(c["listed"] for c in locus) and any(not c["listed"] for c in locus)
    bad = [c["name"] for c in locus if not c["passed"]]
    assert not bad, bad


def test_criterion_04_sign_matrix():
    t0 = time.time()
    res = suite_matrix(rtilde=8, brute_max=8)
    elapsed = time.time() - t0
    assert res.passed, _summary(res)
    assert elapsed < 10, f"{elapsed:.1f} s"


def test_criterion_05_pollack_round_trip_and_decomposition():
    res = suite_decomposition(p=5, seeds=range(20), N=40, M=100, compare_M=20)
    assert len(res.checks) == 8 * 20
    assert res.passed, _summary(res)


def test_criterion_06_efactor_closed_form():
    notes = []
    ok = True
    for p in (3, 5):
        printed = suite_efactor(p=p, m_max=6, k_max=4, n_max=3, form="printed")
        corrected = suite_efactor(p=p, m_max=6, k_max=4, n_max=3, form="corrected")
        bad_n = sorted({n for c in printed.failures for n in c["disagreements_by_conductor"]})
        notes.append(f"p={p}: printed form fails in {len(printed.failures)}/{len(printed.checks)} "
                     f"sign cases at conductor exponents {bad_n}; with the p^(nJ_i) prefactor "
                     f"{len(corrected.failures)} fail")
        ok = ok and printed.passed
    assert ok, " | ".join(notes)


def test_criterion_07_structural_invariants():
    t0 = time.time()
    res = suite_polygons(m_max=20, k_max=12, growth_m=1)
    elapsed = time.time() - t0
    assert len(res.checks) == 19 * 11
    assert res.passed, _summary(res)
    assert elapsed < 5, f"{elapsed:.1f} s"


def test_criterion_08_trivial_zero_agreement():
    seen = set()
    mismatches = []
    for p in (3, 5):
        for m in range(2, 7):
            for k in range(2, 6):
                variants = [(-1, None)] if m % 2 == 0 else [(-1, "+"), (-1, "-"), (1, "root")]
                for eps, alpha in variants:
                    ctx = build_context(p, k, m, eps, alpha)
                    seen.add((ctx.r % 2, alpha))
                    for s in enumerate_signs(ctx.rt):
                        a = sorted((r.component, r.sign, r.j) for r in locate_trivial_zeros(ctx, s))
                        b = sorted((r.component, r.sign, r.j) for r in brute_force_zeros(ctx, s))
                        if a != b:
                            mismatches.append((p, m, k, alpha, str(s)))
    assert {r for r, _ in seen} == {0, 1} and {"+", "-"} <= {a for _, a in seen}
    assert not mismatches, mismatches[:5]


def test_criterion_09_growth_accounting():
    res = suite_polygons(m_max=1, growth_m=12, growth_k=8)
    assert len(res.checks) == 11 * 7
    assert res.passed, _summary(res)
    cfg = AlgebraConfig(3, 16, 400)
    for b in (1, 2, 3):
        for sign in "+-":
            g = growth_check(pollack_log(sign, b, cfg), b)
            assert g["ok"], (sign, b, g)


def test_criterion_10_pole_case():
    slack = 2  # division by log_p(u)(u - 1) u costs at most this many digits
    cfg = AlgebraConfig(5, 8, 24)
    r = residue_model(cfg)
    assert r.residue == 1 - Fraction(1, 5)
    assert r.measured.prec >= cfg.N - slack
    assert r.residual_valuation >= cfg.N - slack
    for m in (4, 8, 12):
        ctx = build_context(5, 2, m)
        for s in enumerate_signs(ctx.rt):
            hi = vanishing_order(ctx, s, 1, 1)
            lo = vanishing_order(ctx, s, 0, 0)
            assert hi.value == s.plus - 1 and lo.value == s.minus - 1, (m, str(s), hi, lo)
