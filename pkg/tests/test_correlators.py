import pytest

from dstau.algebra import ExponentLabel
from dstau.correlators import (
    _diagonalize_generator,
    _two_point_subtraction,
    barF1,
    barFm,
    build_diagonalization,
    crosscheck_correlators,
)
from dstau.rational import QQ
from dstau.stringeq import GammaSolution, assemble_gamma

from tests.conftest import algebra, expansion, gamma_solution

ALL = ["A1", "A2", "A3", "B3", "C2", "D4", "G2"]

_diags = {}


def diag_for(name):
    if name not in _diags:
        _diags[name] = build_diagonalization(algebra(name))
    return _diags[name]


@pytest.mark.parametrize("name", ALL)
def test_phat_inverse_exact(name):
    d = diag_for(name)
    n = d.alg.n
    for r in range(n):
        for c in range(n):
            acc = d.field.zero
            for k in range(n):
                acc = acc + d.p_hat[r][k] * d.p_hat_inv[k][c]
            assert acc == (d.field.one if r == c else d.field.zero)


@pytest.mark.parametrize("name", ALL)
def test_dj_pairing_identity(name):
    alg = algebra(name)
    d = diag_for(name)
    for la in alg.exponents_in_period:
        for lb in alg.exponents_in_period:
            tr = d.field.zero
            for x, y in zip(d.d_j[la], d.d_j[lb]):
                tr = tr + x * y
            val = (tr * d.field.from_rational(alg.kappa)).project_rational()
            want = (
                QQ(alg.h)
                if (la.j + lb.j == alg.h and la.primed == lb.primed)
                else QQ(0)
            )
            assert val == want, (la, lb)


@pytest.mark.parametrize("name", ALL)
def test_dj_periodicity(name):
    alg = algebra(name)
    d = diag_for(name)
    for lab in alg.exponents_in_period:
        lab2 = ExponentLabel(lab.j + alg.h, lab.primed)
        again = _diagonalize_generator(
            alg, d.field, d.embed, d.p_hat, d.p_hat_inv, d.row_degrees, lab2
        )
        assert again == d.d_j[lab]


def test_d_matrix_remark_tables():
    d1 = diag_for("A1")
    assert [x.project_rational() for x in d1.d_sum] == [1, -1]
    d2 = diag_for("A2")
    w = d2.omega
    assert d2.d_j[ExponentLabel(1)] == (d2.field.one, w, w * w)
    assert [x.project_rational() for x in d2.d_sum] == [2, -1, -1]
    g2 = diag_for("G2")
    s2 = g2.embed(algebra("G2").sqrt2)
    assert g2.d_sum == tuple(
        s2 * g2.field.from_rational(k) for k in (2, 1, -1, -2, -1, 1, 0)
    )
    d4alg = algebra("D4")
    d4 = diag_for("D4")
    s2 = d4.embed(d4alg.sqrt2)
    s6 = d4.embed(d4alg.sqrt_heis)
    z = d4.field.zero
    assert d4.d_sum == (
        s2 * d4.field.from_rational(3), z, z, s2 * d4.field.from_rational(-3),
        z, z, s6, -s6,
    )
    assert d4.d_primed == (z, z, z, z, z, z, s6, -s6)


def test_barf1_a1_values():
    alg = algebra("A1")
    gs = gamma_solution("A1", 10)
    f1 = barF1(alg, gs, 18, diag_for("A1"))
    assert f1.coeff((-3,), 0, 6) == QQ(1, 16)
    assert f1.coeff((-9,), 2, 18) == QQ(105, 1024)


def test_barf1_identity_gamma_vanishes():
    alg = algebra("A1")
    g_id, g_inv = assemble_gamma(alg, [], 2)
    gs0 = GammaSolution(alg, 1, [], g_id, g_inv, 2)
    assert not barF1(alg, gs0, 2, diag_for("A1")).terms


def test_barf2_a1_values_and_symmetry():
    alg = algebra("A1")
    gs = gamma_solution("A1", 10)
    f2 = barFm(alg, gs, 2, 12, diag_for("A1"))
    assert f2.coeff((-1, -5), 0, 12) == QQ(5, 32)
    assert f2.coeff((-5, -1), 0, 12) == QQ(5, 32)
    assert all(exps != (-1, -1) for (exps, _e, _l) in f2.terms)
    assert f2.is_symmetric()


def test_two_point_subtraction_a1_closed_form():
    # for h=2 the subtraction is -(z1 z2^3 + z1^3 z2)/(z1^2 - z2^2)^2; in
    # the region |z1|>|z2| the two geometric sums overlap and every term
    # sits at (z1^-m, z2^m) with coefficient -m, m odd
    d = diag_for("A1")
    sub = _two_point_subtraction(d, 2, window=40, s_max=12)
    for m in range(1, 12, 2):
        got = sub.get(((-m, m), 0, 0))
        assert got is not None and got.project_rational() == -m
    assert all(exps[0] + exps[1] == 0 for (exps, _e, _l) in sub)


def test_barf3_a1_value():
    alg = algebra("A1")
    gs = gamma_solution("A1", 10)
    f3 = barFm(alg, gs, 3, 6, diag_for("A1"))
    assert f3.coeff((-1, -1, -1), -2, 6) == QQ(1, 2)


def test_crosscheck_a1_small():
    alg = algebra("A1")
    tau = expansion("A1", 30)
    gs = gamma_solution("A1", 10)
    rep = crosscheck_correlators(alg, tau, 1, 18, gsol=gs, diag=diag_for("A1"))
    assert rep.ok and rep.checked >= 2
    rep2 = crosscheck_correlators(alg, tau, 2, 12, gsol=gs, diag=diag_for("A1"))
    assert rep2.ok


def test_crosscheck_a2_m2():
    # the first two-point content of A2 sits at lambda^16 (eps parity
    # forbids anything at lambda^8)
    alg = algebra("A2")
    tau = expansion("A2", 16)
    gs = gamma_solution("A2", 4)
    rep = crosscheck_correlators(alg, tau, 2, 16, gsol=gs, diag=diag_for("A2"))
    assert rep.ok and rep.checked >= 2


def test_d4_even_rank_correlators():
    alg = algebra("D4")
    tau = expansion("D4", 14)
    gs = gamma_solution("D4", 2)
    d = diag_for("D4")
    f1 = barF1(alg, gs, 14, d)
    assert f1.nvars == 2 and f1.hat_mask == (False, True)
    rep = crosscheck_correlators(alg, tau, 1, 14, gsol=gs, diag=d, fbar=f1)
    assert rep.ok, rep.mismatches
    f2 = barFm(alg, gs, 2, 14, d)
    assert f2.is_symmetric()
    rep2 = crosscheck_correlators(alg, tau, 2, 14, gsol=gs, diag=d, fbar=f2)
    assert rep2.ok, rep2.mismatches


@pytest.mark.parametrize("name", ["A2", "B3"])
def test_rationality_of_fbar(name):
    alg = algebra(name)
    gs = gamma_solution(name, 2)
    cap = 2 * (alg.h + 1) - 1
    f1 = barF1(alg, gs, cap, diag_for(name))
    for coeff in f1.terms.values():
        QQ(coeff)  # raises if not rational-compatible
