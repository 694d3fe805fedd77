"""Multi-point correlator generating functions at t = 0.

The Heisenberg generators diagonalize simultaneously: P(zeta) with
P = diag(zeta^{-e_r}) * Phat (Phat constant over the cyclotomic compositum)
satisfies P^-1 Lambda_j P zeta^-j = D_j, constant diagonal.  With
Psi(zeta) = P(zeta)^-1 gamma(zeta^h) the one-point function is

    F1(zeta) = (kappa/h) Tr(zeta dPsi/dzeta . Psi^-1 D),     D = sum_j D_j,

and for m >= 2 the star-product permutation sum with the two-point
subtraction term.  Rational functions 1/(zeta_b^h - zeta_a^h) are expanded
in the chain region |zeta_1| > |zeta_2| > ... (a library convention; the
paper fixes no region) and, after symmetrization, only strictly negative
powers survive -- enforced as a runtime assertion.

Output grading: the coefficient of prod zeta_i^(-j_i) is regraded by
lambda^(sum j_i) * eps^(-m) so that it equals the corresponding exact
derivative of the graded log tau at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product as iproduct

from .algebra import (
    AlgebraData,
    ExponentLabel,
    heisenberg_zmat,
    zmat_mul,
)
from .numberfield import FieldElement, NumberField, adjoin_root
from .qpoly import cyclotomic
from .rational import QQ, QQ0, QQ1
from .series import GradedSeries, t_var
from .stringeq import GammaSolution, _truncate_lm
from .tau import TauExpansion, deriv_at_zero


class ExpansionRegionError(RuntimeError):
    """A non-negative zeta power survived symmetrization."""


class CorrelatorIrrationalityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# diagonalization data


@dataclass
class Diagonalization:
    alg: AlgebraData
    field: NumberField  # compositum of the algebra field with Q(omega_h)
    embed: object  # map alg.field -> field
    omega: FieldElement
    p_hat: list  # n x n constant matrix
    p_hat_inv: list
    row_degrees: tuple  # P = diag(zeta^-e_r) * p_hat
    d_j: dict  # ExponentLabel (first period) -> tuple of diagonal entries
    d_sum: tuple  # D = sum over exponents in (0, h)
    d_tilde: tuple | None = None  # D even rank: unprimed part
    d_primed: tuple | None = None  # D even rank: the primed D_{(l-1)'}

    def d_at(self, j: int, primed: bool = False) -> tuple:
        """D_j for any exponent j, via periodicity D_{j+hs} = D_j."""
        jj = j % self.alg.h
        for lab, diag in self.d_j.items():
            if lab.j % self.alg.h == jj and lab.primed == primed:
                return diag
        raise KeyError(f"no D_j for j={j} primed={primed}")


def _mat_inverse(field: NumberField, mat: list) -> list:
    n = len(mat)
    aug = [
        [mat[r][c] for c in range(n)]
        + [field.one if r == c else field.zero for c in range(n)]
        for r in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular diagonalization matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def corr_field(alg: AlgebraData):
    """(field, embed, omega): the algebra field joined with Q(omega_h)."""
    phi = cyclotomic(alg.h)
    label = f"{alg.field.label}+omega{alg.h}"
    if alg.field.degree == 1:
        label = f"Q(omega_{alg.h})"
    field, embed, omega = adjoin_root(alg.field, phi, label)
    return field, embed, omega


def build_diagonalization(alg: AlgebraData) -> Diagonalization:
    fam, l = alg.spec.family, alg.spec.rank
    field, raw_embed, omega = corr_field(alg)

    def embed(v, _f=field, _e=raw_embed):
        return _e(v) if isinstance(v, FieldElement) else _f.from_rational(v)

    n, h = alg.n, alg.h
    omega_pows = [field.one]
    for _ in range(2 * h):
        omega_pows.append(omega_pows[-1] * omega)

    def om(k):
        return omega_pows[k % h]

    inv_h = field.from_rational(QQ(1, h))
    half = field.from_rational(QQ(1, 2))
    if fam in ("A", "C"):
        p_hat = [[om(-r * i) * inv_h for i in range(n)] for r in range(n)]
        row_degrees = tuple(range(n))
    elif fam in ("B", "G"):
        p_hat = [[field.zero] * n for _ in range(n)]
        for i in range(n - 1):
            p_hat[0][i] = half * inv_h
            p_hat[n - 1][i] = inv_h
        p_hat[0][n - 1] = field.from_rational(QQ(h, 2)) * inv_h
        p_hat[n - 1][n - 1] = -field.one
        for r in range(1, n - 1):
            for i in range(n - 1):
                p_hat[r][i] = om(-r * i) * inv_h
        row_degrees = tuple(range(n))
    else:  # D
        mu = alg.field.one if l % 2 == 0 else _mu_element(alg)
        mu = embed(mu)
        lm1 = field.from_rational(l - 1)
        p_hat = [[field.zero] * n for _ in range(n)]
        degs = [0] + list(range(1, l)) + [l - 1] + list(range(l, 2 * l - 1))
        for i in range(h):  # columns beta_{omega^i}
            p_hat[0][i] = half * inv_h
            for r in range(1, l):
                p_hat[r][i] = om(-i * (r - 1) - i) * inv_h  # degree r
            p_hat[l][i] = half * om(-i * (l - 1)) * inv_h
            for r in range(l + 1, 2 * l):
                p_hat[r][i] = om(-i * degs[r]) * inv_h
        mu_inv = mu.inverse()
        p_hat[0][h] = p_hat[0][h + 1] = lm1 * half * inv_h
        p_hat[l - 1][h] = -lm1 * mu_inv * inv_h
        p_hat[l - 1][h + 1] = lm1 * mu_inv * inv_h
        p_hat[l][h] = lm1 * half * mu_inv * inv_h
        p_hat[l][h + 1] = -lm1 * half * mu_inv * inv_h
        p_hat[2 * l - 1][h] = p_hat[2 * l - 1][h + 1] = -lm1 * inv_h
        row_degrees = tuple(degs)
    # fix up: the generic loops above must give row degree e_r per row
    if fam == "D":
        row_degrees = tuple(
            [0] + list(range(1, l)) + [l - 1] + list(range(l, 2 * l - 1))
        )
    p_hat_inv = _mat_inverse(field, p_hat)

    d_j = {}
    for lab in alg.exponents_in_period:
        d_j[lab] = _diagonalize_generator(alg, field, embed, p_hat, p_hat_inv,
                                          row_degrees, lab)
    d_sum = [field.zero] * n
    for lab, diag in d_j.items():
        d_sum = [a + b for a, b in zip(d_sum, diag)]
    kw = {}
    if fam == "D" and l % 2 == 0:
        tilde = [field.zero] * n
        for lab, diag in d_j.items():
            if not lab.primed:
                tilde = [a + b for a, b in zip(tilde, diag)]
        kw["d_tilde"] = tuple(tilde)
        kw["d_primed"] = d_j[ExponentLabel(l - 1, True)]
    return Diagonalization(
        alg, field, embed, omega, p_hat, p_hat_inv, row_degrees,
        d_j, tuple(d_sum), **kw
    )


def _mu_element(alg: AlgebraData):
    """Recover mu = sqrt(-1) for odd-rank D from the stored Gamma."""
    # Gamma's (l-1, 0) entry equals -mu
    val = alg.Gamma[(0, alg.spec.rank - 1, 0)]
    return -val


def _diagonalize_generator(alg, field, embed, p_hat, p_hat_inv, row_degrees, lab):
    """D_j = P^-1 Lambda_j P zeta^-j; raises if not constant diagonal."""
    n, h = alg.n, alg.h
    lam = heisenberg_zmat(alg, lab)
    zeta_mat = {}
    for (z, r, c), v in lam.items():
        zeta_mat[(h * z + row_degrees[r] - row_degrees[c] - lab.j, r, c)] = embed(v)
    phat_z = {(0, r, c): v for r in range(n) for c, v in enumerate(p_hat[r]) if v}
    phat_inv_z = {(0, r, c): v for r in range(n) for c, v in enumerate(p_hat_inv[r]) if v}
    prod = zmat_mul(phat_inv_z, zmat_mul(zeta_mat, phat_z))
    diag = [field.zero] * n
    for (z, r, c), v in prod.items():
        if not v:
            continue
        if z != 0 or r != c:
            raise RuntimeError(
                f"{alg.label}: Lambda_{lab} does not diagonalize (z={z}, r={r}, c={c})"
            )
        diag[r] = v
    return tuple(diag)


# ---------------------------------------------------------------------------
# multivariate zeta series


@dataclass
class ZetaSeries:
    """Finite Laurent data in several zeta variables with graded coefficients.

    terms: {(exps tuple, eps, lam): rational}.  For D with even rank the
    variables alternate (zeta_1, zeta_hat_1, zeta_2, ...); hat_mask records
    which positions are hatted.
    """

    nvars: int
    cap: int
    terms: dict
    hat_mask: tuple

    def coeff(self, exps: tuple, eps: int, lam: int):
        return self.terms.get((tuple(exps), eps, lam), QQ0)

    def by_exponent(self):
        out = {}
        for (exps, eps, lam), c in self.terms.items():
            out.setdefault(exps, {})[(eps, lam)] = c
        return out

    def is_symmetric(self) -> bool:
        """Invariance under transposing variable slots (hat pairs move together)."""
        step = 2 if any(self.hat_mask) else 1
        slots = self.nvars // step
        for a in range(slots):
            for b in range(a + 1, slots):
                for (exps, eps, lam), c in self.terms.items():
                    swapped = list(exps)
                    for s in range(step):
                        swapped[a * step + s], swapped[b * step + s] = (
                            swapped[b * step + s],
                            swapped[a * step + s],
                        )
                    if self.terms.get((tuple(swapped), eps, lam), QQ0) != c:
                        return False
        return True


def _zs_mul(a: dict, b: dict, cap: int, window: int) -> dict:
    out = {}
    for (e1, p1, l1), c1 in a.items():
        for (e2, p2, l2), c2 in b.items():
            lam = l1 + l2
            if lam > cap:
                continue
            exps = tuple(x + y for x, y in zip(e1, e2))
            if any(abs(x) > window for x in exps):
                continue
            key = (exps, p1 + p2, lam)
            val = c1 * c2
            acc = out.get(key)
            if acc is None:
                out[key] = val
            else:
                acc = acc + val
                if acc:
                    out[key] = acc
                else:
                    del out[key]
    return out


def _zs_add_into(tgt: dict, src: dict, scale=None):
    for key, v in src.items():
        if scale is not None:
            v = v * scale
        acc = tgt.get(key)
        if acc is None:
            tgt[key] = v
        else:
            acc = acc + v
            if acc:
                tgt[key] = acc
            else:
                del tgt[key]


def _zsmat_mul(a, b, n, cap, window):
    out = [[None] * n for _ in range(n)]
    for r in range(n):
        for k in range(n):
            e1 = a[r][k]
            if not e1:
                continue
            for c in range(n):
                e2 = b[k][c]
                if not e2:
                    continue
                prod = _zs_mul(e1, e2, cap, window)
                if not prod:
                    continue
                if out[r][c] is None:
                    out[r][c] = prod
                else:
                    _zs_add_into(out[r][c], prod)
    return [[e if e else None for e in row] for row in out]


def _zsmat_trace(a, n) -> dict:
    out = {}
    for i in range(n):
        if a[i][i]:
            _zs_add_into(out, a[i][i])
    return out


# ---------------------------------------------------------------------------
# Psi-bar and K-bar


def _gamma_zeta(diag: Diagonalization, gamma_lm, nvars: int, slot: int, cap: int):
    """gamma(zeta^h) as a ZS matrix in variable `slot` of `nvars`."""
    alg = diag.alg
    n, h = alg.n, alg.h
    embed = diag.embed
    out = [[None] * n for _ in range(n)]
    for z, blk in gamma_lm.blocks.items():
        for r in range(n):
            for c in range(n):
                e = blk[r][c]
                if e is None or not e.terms:
                    continue
                tgt = out[r][c]
                if tgt is None:
                    tgt = out[r][c] = {}
                exps = [0] * nvars
                exps[slot] = h * z
                exps = tuple(exps)
                for (eps, lam, v), coeff in e.terms.items():
                    if lam > cap:
                        continue
                    if isinstance(coeff, FieldElement):
                        coeff = embed(coeff)
                    else:
                        coeff = diag.field.from_rational(coeff)
                    _zs_add_into(tgt, {(exps, eps, lam): coeff})
    return out


def _p_matrices(diag: Diagonalization, nvars: int, slot: int):
    """(P, P^-1) as ZS matrices in variable `slot`."""
    n = diag.alg.n
    p_mat = [[None] * n for _ in range(n)]
    p_inv = [[None] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            v = diag.p_hat[r][c]
            if v:
                exps = [0] * nvars
                exps[slot] = -diag.row_degrees[r]
                p_mat[r][c] = {(tuple(exps), 0, 0): v}
            w = diag.p_hat_inv[r][c]
            if w:
                exps = [0] * nvars
                exps[slot] = diag.row_degrees[c]
                p_inv[r][c] = {(tuple(exps), 0, 0): w}
    return p_mat, p_inv


def _psi_bar(diag, gsol: GammaSolution, nvars, slot, cap, window):
    alg = diag.alg
    gamma = _truncate_lm(gsol.gamma, cap)
    gamma_inv = _truncate_lm(gsol.gamma_inv, cap)
    g_z = _gamma_zeta(diag, gamma, nvars, slot, cap)
    g_inv_z = _gamma_zeta(diag, gamma_inv, nvars, slot, cap)
    p_mat, p_inv = _p_matrices(diag, nvars, slot)
    psi = _zsmat_mul(p_inv, g_z, alg.n, cap, window)
    psi_inv = _zsmat_mul(g_inv_z, p_mat, alg.n, cap, window)
    return psi, psi_inv


def _zeta_d(a, n, slot):
    """zeta_slot * d/dzeta_slot, entrywise."""
    out = [[None] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            e = a[r][c]
            if not e:
                continue
            tgt = {}
            for (exps, eps, lam), v in e.items():
                k = exps[slot]
                if k:
                    tgt[(exps, eps, lam)] = v * k
            if tgt:
                out[r][c] = tgt
    return out


def _diag_matrix(diag_entries, n, nvars):
    zero_exps = (0,) * nvars
    out = [[None] * n for _ in range(n)]
    for i, v in enumerate(diag_entries):
        if v:
            out[i][i] = {(zero_exps, 0, 0): v}
    return out


def _slot_pairs(nvars: int, hatted: bool):
    if hatted:
        return [(i, i + 1) for i in range(0, nvars, 2)]
    return [(i,) for i in range(nvars)]


def _regrade_and_project(diag, terms: dict, cap: int, m: int, j_max: int,
                         hatted: bool = False):
    """Apply the lambda^j eps^-1 per-variable regrade, keep the surviving
    negative-power monomials (one engaged variable per slot), project."""
    nvars = None
    out = {}
    for (exps, eps, lam), coeff in terms.items():
        if nvars is None:
            nvars = len(exps)
        keep = True
        for pair in _slot_pairs(nvars, hatted):
            active = [exps[v] for v in pair if exps[v] != 0]
            if len(active) != 1 or active[0] > 0:
                keep = False
                break
        if not keep:
            continue
        jsum = -sum(exps)
        lam2 = lam + jsum
        if lam2 > cap or any(-e > j_max for e in exps):
            continue
        if isinstance(coeff, FieldElement):
            try:
                coeff = coeff.project_rational()
            except Exception as exc:
                raise CorrelatorIrrationalityError(
                    f"coefficient at {exps} eps^{eps} lam^{lam} is irrational"
                ) from exc
        key = (exps, eps - m, lam2)
        acc = out.get(key)
        if acc is None:
            out[key] = coeff
        else:
            acc = acc + coeff
            if acc:
                out[key] = acc
            else:
                del out[key]
    return out


def _assert_no_nonnegative(alg, terms: dict, cap: int, safe_bound: int,
                           hatted: bool = False):
    """A positive power, or a slot with no engaged variable, must not
    survive symmetrization inside the exactness window."""
    for (exps, eps, lam), coeff in terms.items():
        if lam > cap or not coeff:
            continue
        if any(abs(e) > safe_bound for e in exps):
            continue  # outside the window where the expansion is exact
        bad = any(e > 0 for e in exps)
        for pair in _slot_pairs(len(exps), hatted):
            if all(exps[v] == 0 for v in pair):
                bad = True
        if bad:
            raise ExpansionRegionError(
                f"{alg.label}: zeta exponents {exps} survive with coefficient "
                f"{coeff} at eps^{eps} lambda^{lam}"
            )


def barF1(alg: AlgebraData, gsol: GammaSolution, cap: int,
          diag: Diagonalization | None = None) -> ZetaSeries:
    """One-point generating function at t=0 (graded), pure negative powers."""
    if diag is None:
        diag = build_diagonalization(alg)
    fam, l = alg.spec.family, alg.spec.rank
    d_even = fam == "D" and l % 2 == 0
    nvars = 2 if d_even else 1
    hat_mask = (False, True) if d_even else (False,)
    window = 2 * cap + 4 * alg.h
    n = alg.n
    total = {}
    kappa_h = diag.field.from_rational(alg.kappa / QQ(alg.h))
    specs = [(0, diag.d_tilde), (1, diag.d_primed)] if d_even else [(0, diag.d_sum)]
    for slot, dmat in specs:
        psi, psi_inv = _psi_bar(diag, gsol, nvars, slot, cap, window)
        dpsi = _zeta_d(psi, n, slot)
        prod = _zsmat_mul(
            _zsmat_mul(dpsi, psi_inv, n, cap, window),
            _diag_matrix(dmat, n, nvars),
            n, cap, window,
        )
        _zs_add_into(total, _zsmat_trace(prod, n), kappa_h)
    _assert_no_nonnegative(alg, total, cap, cap, hatted=d_even)
    graded = _regrade_and_project(diag, total, cap, 1, cap, hatted=d_even)
    return ZetaSeries(nvars, cap, graded, hat_mask)


def _geometric_edge(h, nvars, big: int, small: int, s_max: int, sign: int):
    """Expansion of 1/(zeta_first^h - zeta_second^h) in the chain region.

    big is the variable index with larger modulus.  sign=+1 computes
    1/(zeta_big^h - zeta_small^h); the caller flips for the other order.
    """
    out = {}
    for s in range(s_max + 1):
        exps = [0] * nvars
        exps[big] = -h * (s + 1)
        exps[small] = h * s
        out[(tuple(exps), 0, 0)] = QQ(sign)
    return out


def _edge_series(h, nvars, a: int, b: int, s_max: int, field):
    """1/(zeta_b^h - zeta_a^h) expanded for |smaller index| = larger modulus."""
    if b > a:  # |zeta_a| > |zeta_b|: factor = -1/(zeta_a^h - zeta_b^h)
        raw = _geometric_edge(h, nvars, a, b, s_max, -1)
    else:
        raw = _geometric_edge(h, nvars, b, a, s_max, +1)
    return {k: field.from_rational(v) for k, v in raw.items()}


def barFm(alg: AlgebraData, gsol: GammaSolution, m: int, cap: int,
          diag: Diagonalization | None = None) -> ZetaSeries:
    """m-point generating function at t=0 (m >= 2), graded, negative powers."""
    if m < 2:
        raise ValueError("barFm needs m >= 2; use barF1")
    if diag is None:
        diag = build_diagonalization(alg)
    fam, l = alg.spec.family, alg.spec.rank
    d_even = fam == "D" and l % 2 == 0
    step = 2 if d_even else 1
    nvars = m * step
    hat_mask = tuple(bool(i % 2) for i in range(nvars)) if d_even else (False,) * nvars
    window = 2 * cap + 4 * alg.h * m
    s_max = (2 * window) // alg.h + 2
    n = alg.n
    field = diag.field

    # K-bar matrices per slot (and per hat for D even)
    kbars = []  # slot -> list of (matrix, var_index)
    for slot in range(m):
        opts = []
        if d_even:
            pieces = [(diag.d_tilde, slot * 2), (diag.d_primed, slot * 2 + 1)]
        else:
            pieces = [(diag.d_sum, slot)]
        for dmat, var in pieces:
            psi, psi_inv = _psi_bar(diag, gsol, nvars, var, cap, window)
            kb = _zsmat_mul(
                _zsmat_mul(psi_inv, _diag_matrix(dmat, n, nvars), n, cap, window),
                psi, n, cap, window,
            )
            opts.append((kb, var))
        kbars.append(opts)

    total = {}
    minus_kappa_m = field.from_rational(-alg.kappa / QQ(m))
    for perm in permutations(range(m)):
        for picks in iproduct(*[range(len(kbars[slot])) for slot in perm]):
            mats = [kbars[slot][pick][0] for slot, pick in zip(perm, picks)]
            varseq = [kbars[slot][pick][1] for slot, pick in zip(perm, picks)]
            prod = mats[0]
            for nxt in mats[1:]:
                prod = _zsmat_mul(prod, nxt, n, cap, window)
            scalar = _zsmat_trace(prod, n)
            # numerator prod zeta_(var)^h and the cyclic denominators
            num_exps = [0] * nvars
            for var in varseq:
                num_exps[var] += alg.h
            scalar = _zs_mul(
                scalar, {(tuple(num_exps), 0, 0): field.one}, cap, window
            )
            for a_pos in range(m):
                va = varseq[a_pos]
                vb = varseq[(a_pos + 1) % m]
                edge = _edge_series(alg.h, nvars, va, vb, s_max, field)
                scalar = _zs_mul(scalar, edge, cap, window)
            _zs_add_into(total, scalar, minus_kappa_m)

    if m == 2:
        _zs_add_into(total, _two_point_subtraction(diag, nvars, window, s_max))
    _assert_no_nonnegative(alg, total, cap, cap, hatted=d_even)
    graded = _regrade_and_project(diag, total, cap, m, cap, hatted=d_even)
    return ZetaSeries(nvars, cap, graded, hat_mask)


def _two_point_subtraction(diag: Diagonalization, nvars: int, window: int,
                           s_max: int) -> dict:
    """-sum_j j (z1^j z2^(2h-j) + z1^(2h-j) z2^j) / (z1^h - z2^h)^2, expanded.

    For D with even rank the unprimed classes pair the unhatted variables
    and the primed class pairs the hatted ones.
    """
    alg = diag.alg
    h = alg.h
    field = diag.field
    pairs = []  # (j, var_a, var_b)
    for lab in alg.exponents_in_period:
        if lab.primed:
            pairs.append((lab.j, 1, 3))
        else:
            pairs.append((lab.j, 0, 2 if nvars == 4 else 1))
    out = {}
    for j, va, vb in pairs:
        # 1/(za^h - zb^h)^2 = za^(-2h) sum_s (s+1) (zb/za)^(hs)
        geom2 = {}
        for s in range(s_max + 1):
            exps = [0] * nvars
            exps[va] = -h * (s + 2)
            exps[vb] = h * s
            geom2[(tuple(exps), 0, 0)] = field.from_rational(s + 1)
        for ea, eb in ((j, 2 * h - j), (2 * h - j, j)):
            exps = [0] * nvars
            exps[va], exps[vb] = ea, eb
            mono = {(tuple(exps), 0, 0): field.from_rational(-j)}
            _zs_add_into(out, _zs_mul(mono, geom2, 10 ** 9, window))
    return out


# ---------------------------------------------------------------------------
# cross-checks against log tau


@dataclass
class CorrelatorReport:
    ok: bool
    checked: int
    mismatches: list


def _var_for(alg: AlgebraData, j: int, hatted: bool) -> int | None:
    """Time-variable code for the zeta exponent -j on a (possibly hatted) slot."""
    from .algebra import exponent_labels_at_degree

    want = [lab for lab in exponent_labels_at_degree(alg, j) if lab.primed == hatted]
    if not want:
        return None
    lab = want[0]
    return t_var(lab.j, lab.primed)


def crosscheck_correlators(
    alg: AlgebraData, tau: TauExpansion, m: int, cap: int,
    gsol: GammaSolution | None = None, diag: Diagonalization | None = None,
    fbar: ZetaSeries | None = None,
) -> CorrelatorReport:
    """Compare every reachable coefficient of Fbar_m with the exact
    derivative of log tau at t = 0."""
    if fbar is None:
        fbar = barF1(alg, gsol, cap, diag) if m == 1 else barFm(alg, gsol, m, cap, diag)
    if cap > tau.cap:
        raise ValueError("tau expansion cap is smaller than the requested cap")
    mismatches = []
    checked = 0
    # direction 1: every Fbar coefficient equals the derivative
    by_exp = fbar.by_exponent()
    for exps, graded in by_exp.items():
        multiset = {}
        ok_vars = True
        for i, e in enumerate(exps):
            if e == 0:
                continue
            code = _var_for(alg, -e, fbar.hat_mask[i])
            if code is None:
                ok_vars = False
                break
            multiset[code] = multiset.get(code, 0) + 1
        if not ok_vars:
            mismatches.append((exps, "no matching time variable"))
            continue
        want = deriv_at_zero(tau.log_tau_t, multiset)
        got_terms = {(e, l, ()): c for (e, l), c in graded.items() if c}
        want_terms = {
            k: (v.project_rational() if isinstance(v, FieldElement) else v)
            for k, v in want.terms.items()
            if v
        }
        want_terms = {k: v for k, v in want_terms.items() if v and k[1] <= cap}
        got_terms = {k: v for k, v in got_terms.items() if k[1] <= cap}
        checked += 1
        if got_terms != want_terms:
            mismatches.append((exps, f"Fbar {got_terms} vs derivative {want_terms}"))
    # direction 2: every reachable derivative appears in Fbar
    for (e, l, v), coeff in tau.log_tau_t.terms.items():
        if l > cap:
            continue
        nfac = sum(v[i] for i in range(1, len(v), 2))
        if nfac != m:
            continue
        exps_needed = []
        ok = True
        for i in range(0, len(v), 2):
            code, expn = v[i], v[i + 1]
            j, primed = divmod(code, 2)
            for _ in range(expn):
                exps_needed.append((j, bool(primed)))
        key = _exps_key(fbar, exps_needed)
        if key is None:
            mismatches.append((tuple(exps_needed), "not expressible in Fbar slots"))
            continue
        # already covered by direction 1 when the key exists
        if key not in by_exp:
            mismatches.append((key, f"derivative of {v} missing from Fbar"))
    return CorrelatorReport(not mismatches, checked, mismatches)


def _exps_key(fbar: ZetaSeries, js: list) -> tuple | None:
    """Slot assignment for a list of (j, primed) derivative indices."""
    step = 2 if any(fbar.hat_mask) else 1
    slots = fbar.nvars // step
    if len(js) > slots:
        return None
    exps = [0] * fbar.nvars
    # sort descending so the chain-region symmetric representative is canonical
    js_sorted = sorted(js, key=lambda jp: (-jp[0], jp[1]))
    for slot, (j, primed) in enumerate(js_sorted):
        var = slot * step + (1 if primed and step == 2 else 0)
        if primed and step == 1:
            return None
        exps[var] = -j
    return tuple(exps)
