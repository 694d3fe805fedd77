import pytest

from dstau.algebra import (
    ExponentLabel,
    heisenberg_zmat,
    principal_degree,
    weight_basis,
    zmat_commutator,
    zmat_is_zero,
    zmat_scale,
    zmat_sub,
    zmat_to_loop,
)
from dstau.rational import QQ
from dstau.series import lm_fourier, lm_mul
from dstau.stringeq import (
    GammaSolution,
    _truncate_lm,
    a1_closed_form_check,
    ad_lambda1_solve,
    assemble_gamma,
    load_gamma,
    save_gamma,
    solve_reduced_string_equation,
    string_residual,
)

from tests.conftest import algebra, gamma_solution


def test_ad_solve_a1_rho_over_2z(alg_a1=None):
    alg = algebra("A1")
    wb = weight_basis(alg)
    rhs = {(-1, 0, 0): QQ(-1, 4), (-1, 1, 1): QQ(1, 4)}  # rho/(2z)
    y, heis_dim, dirs = ad_lambda1_solve(
        alg, wb, zmat_to_loop(alg.field, 2, 2, rhs), -3
    )
    assert heis_dim == 1
    # zero-Heisenberg particular solution
    from dstau.algebra import zmat_from_loop

    y_zm = zmat_from_loop(y)
    assert y_zm == {(-1, 0, 1): QQ(-1, 8), (-2, 1, 0): QQ(1, 8)}
    # the affine solution set contains the published component: their
    # difference is a multiple of Lambda_{-3}
    published = {(-1, 0, 1): QQ(-7, 48), (-2, 1, 0): QQ(5, 48)}
    diff = zmat_sub(published, y_zm)
    lam_m3 = heisenberg_zmat(alg, ExponentLabel(-3))
    scale = diff[(-1, 0, 1)] / lam_m3[(-1, 0, 1)]
    assert zmat_is_zero(zmat_sub(diff, zmat_scale(lam_m3, scale)))
    # and the published value solves the same equation
    lam1 = heisenberg_zmat(alg, ExponentLabel(1))
    assert zmat_is_zero(zmat_sub(zmat_commutator(published, lam1), rhs))


def test_ad_solve_trivial_cases():
    alg = algebra("A1")
    wb = weight_basis(alg)
    zero = zmat_to_loop(alg.field, 2, 2, {})
    y, heis_dim, dirs = ad_lambda1_solve(alg, wb, zero, -6)
    assert y.is_zero() and heis_dim == 0 and dirs == []


def test_solve_level_one_exact():
    gs = gamma_solution("A1", 4)
    y3 = gs.component_zmats()[0]
    assert y3 == {(-1, 0, 1): QQ(-7, 48), (-2, 1, 0): QQ(5, 48)}


def test_gamma_blocks_match_published_display():
    gs = gamma_solution("A1", 4)
    want = {
        -1: {(0, 1): (1, 3, QQ(7, 48))},
        -2: {(1, 0): (1, 3, QQ(-5, 48))},
        -3: {(0, 0): (2, 6, QQ(385, 4608)), (1, 1): (2, 6, QQ(-455, 4608))},
        -4: {(0, 1): (3, 9, QQ(95095, 663552))},
        -5: {(1, 0): (3, 9, QQ(-85085, 663552))},
        -6: {
            (0, 0): (4, 12, QQ(37182145, 127401984)),
            (1, 1): (4, 12, QQ(-40415375, 127401984)),
        },
    }
    for z, entries in want.items():
        blk = gs.gamma.blocks[z]
        got = {}
        for r in range(2):
            for c in range(2):
                e = blk[r][c]
                if e is not None and e.terms:
                    ((eps, lam, _), coeff), = e.terms.items()
                    got[(r, c)] = (eps, lam, coeff)
        assert got == entries, z


def test_a1_closed_form():
    gs = gamma_solution("A1", 10)
    report = a1_closed_form_check(gs)
    assert report["ok"], report["mismatches"]
    assert report["blocks_checked"] >= 8


def test_uniqueness_under_pivot_perturbation():
    alg = algebra("A2")
    first = solve_reduced_string_equation(alg, 3, pivot_order="first")
    last = solve_reduced_string_equation(alg, 3, pivot_order="last")
    for a, b in zip(first.component_zmats(), last.component_zmats()):
        assert a == b


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B3", "C2", "D4", "G2"])
def test_components_homogeneous(name):
    alg = algebra(name)
    gs = gamma_solution(name, 2)
    for i, y in enumerate(gs.components[:2], start=1):
        assert principal_degree(alg, y) == -i * (alg.h + 1)


def test_string_residual_examples():
    alg = algebra("A1")
    gs = gamma_solution("A1", 4)
    assert string_residual(alg, gs, 12).is_zero()
    a2 = algebra("A2")
    gs2 = gamma_solution("A2", 2)
    assert string_residual(a2, gs2, 8).is_zero()
    # gamma = Id: residual is the weighted rho/(hz) term, nonzero
    g_id, g_inv = assemble_gamma(a2, [], 8)
    res0 = string_residual(a2, GammaSolution(a2, 0, [], g_id, g_inv, 8), 8)
    assert not res0.is_zero()
    blk = res0.blocks[-1]
    assert blk[0][0].terms == {(1, 4, ()): QQ(1, 3)}


def test_conjugated_lambda_projects_to_itself():
    alg = algebra("A2")
    gs = gamma_solution("A2", 2)
    cap = 8
    lam1 = zmat_to_loop(
        alg.field, alg.n, alg.h, heisenberg_zmat(alg, ExponentLabel(1)), cap
    )
    conj = lm_mul(
        _truncate_lm(gs.gamma_inv, cap), lm_mul(lam1, _truncate_lm(gs.gamma, cap))
    ).z_project_nonneg()
    assert conj == lam1


def test_grading_pattern():
    gs = gamma_solution("A1", 4)
    for z, blk in gs.gamma.blocks.items():
        if z == 0:
            continue
        for row in blk:
            for e in row:
                if e is None:
                    continue
                for (eps, lam, _v) in e.terms:
                    assert lam == eps * 3  # level i carries eps^i lambda^(3i)


def test_cache_roundtrip(tmp_path):
    alg = algebra("B3")
    gs = gamma_solution("B3", 2)
    path = save_gamma(gs, str(tmp_path))
    loaded = load_gamma(alg, 2, str(tmp_path))
    assert loaded is not None
    assert loaded.levels == 2
    for a, b in zip(gs.component_zmats(), loaded.component_zmats()):
        assert a == b
    assert loaded.gamma == _truncate_lm(gs.gamma, loaded.gamma.cap)
    # wrong levels -> miss
    assert load_gamma(alg, 3, str(tmp_path)) is None
