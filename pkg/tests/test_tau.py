import random

import pytest

from dstau.algebra import ExponentLabel, zmat_from_loop
from dstau.rational import QQ
from dstau.series import GradedSeries, LoopMatrix, lm_fourier, q_var, t_var
from dstau.stringeq import levels_for_cap, solve_reduced_string_equation
from dstau.tables import load_bundled, verify_expansion
from dstau.tau import (
    UnderResolvedError,
    build_g,
    build_symbol,
    choose_N,
    deriv_at_zero,
    hankel_product,
    homogeneity_report,
    log_tau,
    log_tau_from_symbol,
    mat_trace,
    q_families,
    reduction_check,
    series_log_unit,
    t_to_q_factor,
    toeplitz_identity_check,
    toeplitz_minor_det,
)

from tests.conftest import algebra, expansion, gamma_solution


def Q(*pairs):
    ps = sorted((q_var(a, k), e) for (a, k), e in pairs)
    return tuple(x for c, e in ps for x in (c, e))


def T(*pairs):
    ps = sorted((t_var(j, primed), e) for (j, primed), e in pairs)
    return tuple(x for c, e in ps for x in (c, e))


def test_build_g_a1_cap2():
    alg = algebra("A1")
    g_plus, _ = build_g(alg, 2)
    # Id + (lambda/eps) t1 Lambda + (lambda^2/2eps^2) t1^2 z Id
    assert g_plus.entry(0, 0, 0).terms == {(0, 0, ()): QQ(1)}
    assert g_plus.entry(1, 0, 1).terms == {(-1, 1, (t_var(1), 1)): QQ(1)}
    assert g_plus.entry(0, 1, 0).terms == {(-1, 1, (t_var(1), 1)): QQ(1)}
    assert g_plus.entry(1, 0, 0).terms == {(-2, 2, (t_var(1), 2)): QQ(1, 2)}
    assert g_plus.entry(1, 1, 1).terms == {(-2, 2, (t_var(1), 2)): QQ(1, 2)}


def test_build_g_t0_is_identity():
    alg = algebra("A2")
    g_plus, g_minus = build_g(alg, 5)
    for g in (g_plus, g_minus):
        t_free = {
            (z, r, c): e.terms
            for z, blk in g.blocks.items()
            for r, row in enumerate(blk)
            for c, e in enumerate(row)
            if e is not None and any(not k[2] for k in e.terms)
        }
        assert set(t_free) == {(0, r, r) for r in range(3)}


def test_build_g_d4_has_primed_time():
    alg = algebra("D4")
    g_plus, _ = build_g(alg, 3)
    codes = set()
    for blk in g_plus.blocks.values():
        for row in blk:
            for e in row:
                if e is None:
                    continue
                for (_e, _l, v) in e.terms:
                    for i in range(0, len(v), 2):
                        codes.add(v[i])
    assert t_var(3) in codes and t_var(3, True) in codes
    # the primed generator carries sqrt(2l-2) = sqrt6: check an entry is
    # sqrt6 * rational by squaring
    found = None
    for blk in g_plus.blocks.values():
        for row in blk:
            for e in row:
                if e is None:
                    continue
                for key, coeff in e.terms.items():
                    if key[2] == (t_var(3, True), 1):
                        found = coeff
    assert found is not None
    sq = (found * found).project_rational()
    assert QQ(sq) * 16 == QQ(6) or sq * QQ(16, 6).denominator  # 6 * rational^2
    assert (found * found).project_rational() in (QQ(6, 1), QQ(6, 4), QQ(6, 16), QQ(3, 2))


def test_build_symbol_t0_and_underresolved():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    sym = build_symbol(alg, gs, 12)
    # t = 0 slice of J equals gamma
    for z, blk in sym.J.blocks.items():
        for r, row in enumerate(blk):
            for c, e in enumerate(row):
                if e is None:
                    continue
                t_free = {k: v for k, v in e.terms.items() if not k[2]}
                gamma_e = gs.gamma.entry(z, r, c)
                want = {k: v for k, v in gamma_e.terms.items() if k[1] <= 12}
                assert t_free == want
    with pytest.raises(UnderResolvedError):
        build_symbol(alg, gs, 30)


def test_symbol_small_cap_is_identity_at_t0():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    sym = build_symbol(alg, gs, 2)  # cap < h+1
    t_free = {
        (z, r, c)
        for z, blk in sym.J.blocks.items()
        for r, row in enumerate(blk)
        for c, e in enumerate(row)
        if e is not None and any(not k[2] for k in e.terms)
    }
    assert t_free == {(0, 0, 0), (0, 1, 1)}


def test_j_minus_one_contains_gamma_coefficient():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    sym = build_symbol(alg, gs, 6)
    e = sym.J.entry(-1, 0, 1)
    assert e.terms.get((1, 3, ())) == QQ(7, 48)


def test_hankel_degree_bounds():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    sym = build_symbol(alg, gs, 6)
    r1 = hankel_product(sym, 1)
    tr = mat_trace(r1, alg.field, 6)
    assert tr.min_lambda() >= alg.h + 2
    # last block row of R_{N+1} has lambda degree > (N+1) h, for N = 2
    r3 = hankel_product(sym, 3)
    n = alg.n
    for row in r3[2 * n:]:
        for e in row:
            if e is not None and e.terms:
                assert e.min_lambda() > 3 * alg.h


def test_choose_n():
    assert choose_N(2, 6) == 2
    assert choose_N(2, 24) == 11
    assert choose_N(6, 56) == 9


def test_log_tau_a1_cap6():
    exp = expansion("A1", 6)
    assert exp.log_tau_t.terms == {
        (-2, 6, T(((1, False), 3))): QQ(1, 12),
        (0, 6, T(((3, False), 1))): QQ(1, 16),
    }


def test_rescaled_a1_values():
    exp = expansion("A1", 30)
    f = exp.genus_parts
    assert f[0].coeff(0, 1, Q(((1, 0), 3))) == QQ(1, 6)
    assert f[1].coeff(0, 1, Q(((1, 1), 1))) == QQ(1, 24)
    assert f[2].coeff(0, 3, Q(((1, 4), 1))) == QQ(1, 1152)
    assert f[3].terms == {(0, 5, Q(((1, 7), 1))): QQ(1, 82944)}


def test_rescaled_a2_first_order():
    exp = expansion("A2", 8)
    assert exp.genus_parts[0].coeff(0, 1, Q(((1, 0), 2), ((2, 0), 1))) == QQ(1, 2)
    assert exp.genus_parts[1].coeff(0, 1, Q(((1, 1), 1))) == QQ(1, 12)


def test_t_to_q_factor_values():
    a1 = algebra("A1")
    assert t_to_q_factor(a1, 1, 0) == 1  # t1 = q0
    assert t_to_q_factor(a1, 1, 1) == QQ(2, 3)  # t3 = (2/3) q1


def test_q_families_order():
    d4 = algebra("D4")
    assert [(lab.j, lab.primed) for lab in q_families(d4)] == [
        (1, False), (3, False), (5, False), (3, True)
    ]


def test_trace_degree_guarantee_a1():
    alg = algebra("A1")
    cap = 11
    gs = gamma_solution("A1", levels_for_cap(alg, cap))
    sym = build_symbol(alg, gs, cap)
    prev = None
    for n_force in (1, 2, 3, 4):
        exp = log_tau_from_symbol(alg, sym, cap, force_N=n_force)
        if prev is not None:
            diff = exp.log_tau_t - prev.log_tau_t
            if not diff.is_zero():
                assert diff.min_lambda() >= n_force * alg.h + 1
        prev = exp


def test_toeplitz_minor_det_trivial():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    sym = build_symbol(alg, gs, 2)  # J = Id at this cap, t = 0 modes only
    # replace J by the identity symbol: det must be exactly 1
    from dstau.tau import Symbol

    ident = LoopMatrix.identity(alg.field, alg.n, alg.h, 4)
    sym_id = Symbol(alg, 4, ident, ident)
    det = toeplitz_minor_det(sym_id, 2)
    assert det.terms == {(0, 0, ()): QQ(1)}
    # upper-triangular block Toeplitz with unit diagonal: put a mode at z=-1
    upper = LoopMatrix.from_entries(
        alg.field, 2, 2, [(0, 0, 0, QQ(1)), (0, 1, 1, QQ(1))], 4
    )
    blk = upper.blocks.setdefault(-1, [[None] * 2 for _ in range(2)])
    blk[0][1] = GradedSeries.monomial(alg.field, QQ(5), 0, 3, (), cap=4)
    sym_up = Symbol(alg, 4, upper, upper)
    assert toeplitz_minor_det(sym_up, 2).terms == {(0, 0, ()): QQ(1)}


def test_toeplitz_det_matches_trace_route():
    alg = algebra("A1")
    cap = 4
    gs = gamma_solution("A1", levels_for_cap(alg, cap))
    sym = build_symbol(alg, gs, cap)
    exp = expansion("A1", 30)
    for n_minor in (1, 2):
        det = toeplitz_minor_det(sym, n_minor)
        log_det = series_log_unit(det, cap)
        diff = log_det - exp.log_tau_t.truncate(cap)  # kappa = 1
        if not diff.is_zero():
            assert diff.min_lambda() >= n_minor * alg.h


def _random_symbol(rng, alg, cap, modes):
    n = alg.n
    blocks = {}
    for k in range(modes[0], modes[1] + 1):
        low = max(0, (abs(k) - 1) * alg.h)
        blk = [[None] * n for _ in range(n)]
        used = False
        for r in range(n):
            for c in range(n):
                if rng.random() < 0.5:
                    continue
                lam = rng.randint(low, cap)
                coeff = QQ(rng.randint(-4, 4), rng.randint(1, 3))
                if coeff:
                    blk[r][c] = GradedSeries.monomial(
                        alg.field, coeff, rng.randint(-1, 1), lam, (), cap=cap
                    )
                    used = True
        if used:
            blocks[k] = blk
    m = LoopMatrix(alg.field, n, alg.h, cap, blocks)
    m.validate_admissible()
    return m


def test_toeplitz_identity_trivial_and_random():
    alg = algebra("A2")
    ident = LoopMatrix.identity(alg.field, alg.n, alg.h, 6)
    assert toeplitz_identity_check(ident, ident, 3)
    rng = random.Random(99)
    for _ in range(10):
        phi1 = _random_symbol(rng, alg, 6, (-1, 1))
        phi2 = _random_symbol(rng, alg, 6, (-1, 1))
        assert toeplitz_identity_check(phi1, phi2, 3)
    # lower-triangular T(phi2): phi2 with only nonnegative modes
    phi2 = _random_symbol(rng, alg, 6, (0, 1))
    phi1 = _random_symbol(rng, alg, 6, (-1, 1))
    assert toeplitz_identity_check(phi1, phi2, 3)


def test_taut03_a1():
    alg = algebra("A1")
    exp = expansion("A1", 30)
    # third derivative d^3/dt_{h-1} dt_1^2 = (h-1)/h at eps^-2 lam^{2(h+1)}
    got = deriv_at_zero(exp.log_tau_t, {t_var(1): 3})
    assert got.terms == {(-2, 6, ()): QQ(1, 2)}


def test_reduction_check_and_corruption():
    a3 = expansion("A3", 20)
    c2 = expansion("C2", 20)
    rep = reduction_check(a3, c2, var_map={1: 1, 2: 3}, zero_set={2})
    assert rep.ok
    # a corrupted child must be detected with the offending monomial named
    bad_terms = dict(c2.log_tau_q.terms)
    key = next(iter(bad_terms))
    bad_terms[key] = bad_terms[key] + 1
    bad = type(c2)(
        c2.alg, c2.cap, c2.N, c2.log_tau_t,
        GradedSeries(c2.log_tau_q.field, c2.log_tau_q.cap, bad_terms),
        c2.genus_parts, c2.q_order,
    )
    rep_bad = reduction_check(a3, bad, var_map={1: 1, 2: 3}, zero_set={2})
    assert not rep_bad.ok
    assert rep_bad.first_diff is not None


def test_homogeneity_diagnostic():
    assert homogeneity_report(expansion("A1", 30)) == []
    assert homogeneity_report(expansion("A2", 8)) == []


def test_verify_detects_corruption(tmp_path):
    import json

    from dstau.tables import bundled_table_path, load_table

    src = bundled_table_path("A1", "t")
    payload = json.load(open(src))
    payload["entries"][0]["coeff"] = "999/7"
    blob = json.dumps(payload["entries"], sort_keys=True).encode()
    import hashlib

    payload["sha256"] = hashlib.sha256(blob).hexdigest()
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(payload))
    table = load_table(str(bad_path))
    exp = expansion("A1", 30)
    rep = verify_expansion(exp, table)
    assert not rep.ok
    assert len(rep.wrong) == 1
    corrupted_key = rep.wrong[0][0]
    assert rep.wrong[0][2] == QQ(999, 7)
    assert corrupted_key in table.entries
