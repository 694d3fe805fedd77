"""Tau function assembly: symbol, truncated trace expansion, rescalings.

Pipeline: g(t;z) = exp(sum_j (lambda^j/eps) t_j Lambda_j) and the string
equation solution gamma give the symbol J = g(-t) gamma.  The truncated
trace expansion

    T_N = -kappa * sum_{i=1}^{i_N} Tr(R_N^i) / i,
    i_N = floor(((N+1)h+1)/(h+2)),

with R_N the N x N block Hankel product, agrees with log tau to
lambda-degree (N+1)h+1, so choosing the smallest N with (N+1)h+1 > cap
gives log tau exactly at the cap.  (The printed trace sum starts at i=0,
which divides by zero; the sum here starts at 1.)

The rescaled form: eps -> eps/sqrt(h), lambda^(2(h+1)) -> lambda and
t_{hk+j_alpha} -> q_{alpha,k}/(h * prod_{s=0..k}(j_alpha/h + s)), followed
by the genus split log tau = sum_g eps^(2g-2) F_g.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .algebra import (
    AlgebraData,
    ExponentLabel,
    exponent_labels_at_degree,
    heisenberg_zmat,
    zmat_mul,
    zmat_to_loop,
)
from .numberfield import FieldElement, NonRationalError, rational_field
from .rational import QQ, QQ0, QQ1
from .series import (
    INF_CAP,
    GradedSeries,
    LoopMatrix,
    _mul_into,
    lm_mul,
    q_var,
    t_var,
)
from .stringeq import GammaSolution, _truncate_lm, levels_for_cap


class UnderResolvedError(ValueError):
    """The gamma solution has fewer levels than the requested cap needs."""


class IrrationalityError(ValueError):
    """A final coefficient failed to project to a rational."""


@dataclass
class Symbol:
    alg: AlgebraData
    cap: int
    J: LoopMatrix
    J_inv: LoopMatrix

    def j_block(self, i: int):
        return self.J.blocks.get(i)

    def jt_block(self, i: int):
        return self.J_inv.blocks.get(i)


@dataclass
class TauExpansion:
    alg: AlgebraData
    cap: int
    N: int
    log_tau_t: GradedSeries
    log_tau_q: GradedSeries
    genus_parts: dict
    q_order: int
    warnings: list = dc_field(default_factory=list)


# ---------------------------------------------------------------------------
# the abelian flow exponential


def q_families(alg: AlgebraData) -> list[ExponentLabel]:
    """Exponent labels in (0, h) in q-variable order: unprimed first."""
    unprimed = [lab for lab in alg.exponents_in_period if not lab.primed]
    primed = [lab for lab in alg.exponents_in_period if lab.primed]
    return unprimed + primed


def positive_exponent_labels(alg: AlgebraData, bound: int) -> list[ExponentLabel]:
    out = []
    for j in range(1, bound + 1):
        out.extend(exponent_labels_at_degree(alg, j))
    return out


def _exp_factor(alg: AlgebraData, lab: ExponentLabel, cap: int, sign: int) -> LoopMatrix:
    """exp(sign * (lambda^j/eps) t_j Lambda_j) truncated at cap."""
    field = alg.field
    n = alg.n
    j = lab.j
    code = t_var(j, lab.primed)
    lj = heisenberg_zmat(alg, lab)
    entry_terms = {}
    power = {(0, r, r): alg.one() for r in range(n)}
    inv_fact = QQ1
    m = 1
    while j * m <= cap:
        power = zmat_mul(power, lj)
        inv_fact = inv_fact / m
        scalar = alg.c(inv_fact if (sign > 0 or m % 2 == 0) else -inv_fact)
        mono = (-m, j * m, (code, m))
        for (z, r, c), v in power.items():
            entry_terms.setdefault((z, r, c), {})[mono] = v * scalar
        m += 1
    blocks = {}
    for (z, r, c), terms in entry_terms.items():
        blk = blocks.setdefault(z, [[None] * n for _ in range(n)])
        blk[r][c] = GradedSeries(field, cap, terms)
    out = LoopMatrix(field, n, alg.h, cap, blocks)
    return LoopMatrix.identity(field, n, alg.h, cap) + out


def build_g(alg: AlgebraData, cap: int):
    """(g_plus, g_minus): exp(+/- sum_j (lambda^j/eps) t_j Lambda_j) at cap."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    plus = LoopMatrix.identity(alg.field, alg.n, alg.h, cap)
    minus = LoopMatrix.identity(alg.field, alg.n, alg.h, cap)
    for lab in positive_exponent_labels(alg, cap):
        plus = lm_mul(plus, _exp_factor(alg, lab, cap, +1))
        minus = lm_mul(minus, _exp_factor(alg, lab, cap, -1))
    return plus, minus


def build_symbol(alg: AlgebraData, gsol: GammaSolution, cap: int) -> Symbol:
    needed = levels_for_cap(alg, cap)
    if gsol.levels < needed:
        raise UnderResolvedError(
            f"cap {cap} needs gamma solved to level {needed}, have {gsol.levels}"
        )
    g_plus, g_minus = build_g(alg, cap)
    gamma = _truncate_lm(gsol.gamma, cap)
    gamma_inv = _truncate_lm(gsol.gamma_inv, cap)
    j_mat = lm_mul(g_minus, gamma)
    j_inv = lm_mul(gamma_inv, g_plus)
    j_mat.validate_admissible()
    j_inv.validate_admissible()
    return Symbol(alg, cap, j_mat, j_inv)


# ---------------------------------------------------------------------------
# flat series matrices


def _zero_block(n):
    return [[None] * n for _ in range(n)]


def hankel_product(sym: Symbol, N: int):
    """R_N as an (N*n) x (N*n) array of GradedSeries (None = zero)."""
    alg, cap = sym.alg, sym.cap
    n = alg.n
    size = N * n
    out = [[None] * size for _ in range(size)]
    field = alg.field
    for s in range(1, N + 1):
        for t in range(1, N + 1):
            for u in range(1, N + 1):
                a_blk = sym.j_block(s + u - 1)
                b_blk = sym.jt_block(-(u + t - 1))
                if a_blk is None or b_blk is None:
                    continue
                for r in range(n):
                    for k in range(n):
                        a = a_blk[r][k]
                        if a is None or a.min_lambda() > cap:
                            continue
                        budget = cap - a.min_lambda()
                        row_out = out[(s - 1) * n + r]
                        for c in range(n):
                            b = b_blk[k][c]
                            if b is None or b.min_lambda() > budget:
                                continue
                            tgt = row_out[(t - 1) * n + c]
                            if tgt is None:
                                tgt = GradedSeries.zero(field, cap)
                                row_out[(t - 1) * n + c] = tgt
                            _mul_into(tgt.terms, a, b, cap)
    _mat_cleanup(out)
    return out


def _mat_cleanup(mat):
    for row in mat:
        for j, e in enumerate(row):
            if e is not None:
                if e.terms:
                    e._min_lambda = None
                    e._lam_groups = None
                else:
                    row[j] = None


def mat_mul(a, b, field, cap):
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[None] * cols for _ in range(rows)]
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            e1 = arow[k]
            if e1 is None:
                continue
            m1 = e1.min_lambda()
            if m1 > cap:
                continue
            budget = cap - m1
            brow = b[k]
            for j in range(cols):
                e2 = brow[j]
                if e2 is None or e2.min_lambda() > budget:
                    continue
                tgt = orow[j]
                if tgt is None:
                    tgt = GradedSeries.zero(field, cap)
                    orow[j] = tgt
                _mul_into(tgt.terms, e1, e2, cap)
    _mat_cleanup(out)
    return out


def mat_trace(a, field, cap) -> GradedSeries:
    out = GradedSeries.zero(field, cap)
    for i in range(len(a)):
        e = a[i][i]
        if e is not None:
            out = out + e
    return out


def mat_trace_pair(a, b, field, cap) -> GradedSeries:
    """Tr(a.b) without forming the product."""
    acc = {}
    size = len(a)
    for i in range(size):
        arow = a[i]
        for j in range(size):
            e1 = arow[j]
            if e1 is None:
                continue
            m1 = e1.min_lambda()
            if m1 > cap:
                continue
            e2 = b[j][i]
            if e2 is None or e2.min_lambda() > cap - m1:
                continue
            _mul_into(acc, e1, e2, cap)
    return GradedSeries(field, cap, acc)


# ---------------------------------------------------------------------------
# log tau


def choose_N(h: int, cap: int) -> int:
    n = 1
    while (n + 1) * h + 1 <= cap:
        n += 1
    return n


def trace_powers(sym: Symbol, N: int, i_max: int, threads: int = 1):
    """[Tr R_N^i for i = 1..i_max] via stored powers M_k, k <= ceil(i_max/2)."""
    alg, cap = sym.alg, sym.cap
    field = alg.field
    r_mat = hankel_product(sym, N)
    powers = [r_mat]
    while 2 * len(powers) < i_max:
        powers.append(mat_mul(powers[-1], r_mat, field, cap))

    def compute(i):
        if i == 1:
            return mat_trace(r_mat, field, cap)
        a = powers[(i + 1) // 2 - 1]
        b = powers[i // 2 - 1]
        return mat_trace_pair(a, b, field, cap)

    indices = list(range(1, i_max + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(compute, indices))
    else:
        results = [compute(i) for i in indices]
    return results


def log_tau(
    alg: AlgebraData,
    gsol: GammaSolution,
    cap: int,
    force_N: int | None = None,
    threads: int = 1,
) -> TauExpansion:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    sym = build_symbol(alg, gsol, cap)
    return log_tau_from_symbol(alg, sym, cap, force_N=force_N, threads=threads)


def log_tau_from_symbol(alg, sym, cap, force_N=None, threads=1) -> TauExpansion:
    """force_N overrides the minimal N; values below the default give a
    deliberately under-resolved T_N (exact only to (N+1)h), which is what
    the degree-bound cross-checks measure."""
    h = alg.h
    N = force_N if force_N is not None else choose_N(h, cap)
    if N < 1:
        raise ValueError("N must be >= 1")
    i_n = ((N + 1) * h + 1) // (h + 2)
    traces = trace_powers(sym, N, i_n, threads=threads)
    total = GradedSeries.zero(alg.field, cap)
    for i, tr in enumerate(traces, start=1):
        total = total + tr.scale(alg.c(QQ(-1, i)))
    log_t = total.scale(alg.c(alg.kappa)).truncate(cap)
    for (e, l, v) in log_t.terms:
        if e % 2 != 0:
            raise IrrationalityError(
                f"odd eps power {e} in log tau; grading is broken"
            )
    log_q, genus, q_order, warnings = rescale_to_q(alg, log_t, cap)
    return TauExpansion(alg, cap, N, log_t, log_q, genus, q_order, warnings)


# ---------------------------------------------------------------------------
# t -> q rescaling and genus split


def t_to_q_factor(alg: AlgebraData, j_alpha: int, k: int):
    """t_{hk+j_alpha} = factor * q_{alpha,k}: 1/(h*prod_{s=0}^{k}(j_alpha/h+s))."""
    prod = QQ1
    for s in range(k + 1):
        prod *= QQ(j_alpha, alg.h) + s
    return 1 / (alg.h * prod)


def rescale_to_q(alg: AlgebraData, log_t: GradedSeries, cap: int):
    h = alg.h
    period = 2 * (h + 1)
    q_order = cap // period
    warnings = []
    if cap % period:
        warnings.append(
            f"cap {cap} is not a multiple of 2(h+1)={period}; "
            f"q-form emitted through lambda^{q_order}"
        )
    fams = q_families(alg)
    fam_index = {(lab.j, lab.primed): a + 1 for a, lab in enumerate(fams)}
    qfield = rational_field()
    terms = {}
    for (e, l, v), coeff in log_t.terms.items():
        if l > period * q_order:
            continue
        if l % period:
            raise IrrationalityError(
                f"lambda degree {l} of a log tau monomial is not a multiple "
                f"of 2(h+1); rescaling is inconsistent"
            )
        if isinstance(coeff, FieldElement):
            coeff = coeff.project_rational()
        # eps -> eps/sqrt(h): even power guaranteed upstream
        coeff = coeff * QQ(1, h) ** (e // 2)
        parts = []
        for idx in range(0, len(v), 2):
            code, exp = v[idx], v[idx + 1]
            j, primed = divmod(code, 2)
            j_alpha = j % h
            lab_key = (j_alpha, bool(primed))
            if lab_key not in fam_index:
                raise ValueError(f"variable t_{j}{'p' if primed else ''} has no q family")
            alpha = fam_index[lab_key]
            k = (j - j_alpha) // h
            coeff = coeff * t_to_q_factor(alg, j_alpha, k) ** exp
            parts.append((q_var(alpha, k), exp))
        parts.sort()
        flat = tuple(x for pair in parts for x in pair)
        key = (e, l // period, flat)
        acc = terms.get(key)
        if acc is None:
            terms[key] = coeff
        else:
            acc = acc + coeff
            if acc:
                terms[key] = acc
            else:
                del terms[key]
    log_q = GradedSeries(qfield, q_order, terms)
    genus = {}
    for (e, l, v), coeff in terms.items():
        g = (e + 2) // 2
        if g < 0 or e != 2 * g - 2:
            raise IrrationalityError(f"eps power {e} is not of the form 2g-2, g>=0")
        gs = genus.setdefault(g, {})
        gs[(0, l, v)] = coeff
    genus_parts = {
        g: GradedSeries(qfield, q_order, gterms) for g, gterms in sorted(genus.items())
    }
    return log_q, genus_parts, q_order, warnings


# ---------------------------------------------------------------------------
# determinant cross-checks


def series_inv_unit(s: GradedSeries, cap: int) -> GradedSeries:
    c0 = s.coeff(0, 0, ())
    if not c0:
        raise ZeroDivisionError("series has no invertible constant term")
    inv0 = (1 / c0) if not isinstance(c0, FieldElement) else c0.inverse()
    v = s.scale(inv0) - GradedSeries.const(s.field, s.field.one if isinstance(c0, FieldElement) else QQ1, cap)
    v = v.truncate(cap)
    if v.is_zero():
        return GradedSeries.const(s.field, inv0, cap)
    one = GradedSeries.const(s.field, s.field.one if isinstance(c0, FieldElement) else QQ1, cap)
    m_max = cap // max(1, v.min_lambda())
    acc = one
    for _ in range(m_max):
        acc = one - (v * acc).truncate(cap)
    return acc.scale(inv0)


def series_log_unit(s: GradedSeries, cap: int) -> GradedSeries:
    """log of a series with constant term 1."""
    one_c = s.coeff(0, 0, ())
    if not one_c or (one_c != 1 and not (isinstance(one_c, FieldElement) and one_c == one_c.field.one)):
        raise ValueError("series_log_unit needs constant term 1")
    v = s - GradedSeries.const(s.field, one_c, cap)
    v = v.truncate(cap)
    out = GradedSeries.zero(s.field, cap)
    if v.is_zero():
        return out
    m_max = cap // max(1, v.min_lambda())
    power = GradedSeries.const(s.field, one_c, cap)
    sign = 1
    for m in range(1, m_max + 1):
        power = (power * v).truncate(cap)
        out = out + power.scale(QQ(sign, m) if not isinstance(one_c, FieldElement) else s.field.from_rational(QQ(sign, m)))
        sign = -sign
    return out


def toeplitz_minor_matrix(sym: Symbol, N: int):
    """T_N: the (N+1) x (N+1) block Toeplitz minor with blocks J_{s-t}."""
    alg = sym.alg
    n = alg.n
    size = (N + 1) * n
    out = [[None] * size for _ in range(size)]
    for s in range(N + 1):
        for t in range(N + 1):
            blk = sym.j_block(s - t)
            if blk is None:
                continue
            for r in range(n):
                for c in range(n):
                    e = blk[r][c]
                    if e is not None and e.terms:
                        out[s * n + r][t * n + c] = e
    return out


def toeplitz_minor_det(sym: Symbol, N: int) -> GradedSeries:
    """det T_N(J) by exact elimination (unit pivots, no pivot search needed)."""
    alg, cap = sym.alg, sym.cap
    field = alg.field
    mat = [
        [e.truncate(cap) if e is not None else None for e in row]
        for row in toeplitz_minor_matrix(sym, N)
    ]
    size = len(mat)
    one = GradedSeries.const(field, alg.one(), cap)
    det = one
    for col in range(size):
        pivot = mat[col][col]
        if pivot is None or not pivot.coeff(0, 0, ()):
            raise ZeroDivisionError("non-unit pivot in Toeplitz elimination")
        det = (det * pivot).truncate(cap)
        inv = series_inv_unit(pivot, cap)
        for r in range(col + 1, size):
            lead = mat[r][col]
            if lead is None or lead.is_zero():
                continue
            factor = (lead * inv).truncate(cap)
            for c in range(col, size):
                e = mat[col][c]
                if e is None or e.is_zero():
                    continue
                sub = (factor * e).truncate(cap)
                cur = mat[r][c]
                mat[r][c] = (-sub) if cur is None else cur - sub
    return det


def toeplitz_identity_check(phi1: LoopMatrix, phi2: LoopMatrix, N: int) -> bool:
    """Lemma: T(p1)T(p2) = T(p1 p2) - H(p1)H~(p2), on truncation-safe blocks."""
    phi1._compat(phi2)
    cap = min(phi1.cap, phi2.cap)
    n = phi1.n
    field = phi1.field
    prod = lm_mul(phi1, phi2)
    modes1 = sorted(phi1.blocks)
    modes2 = sorted(phi2.blocks)
    m1_min = min(modes1) if modes1 else 0
    m2_max = max(modes2) if modes2 else 0
    s_max = min(N, N + m1_min)
    t_max = min(N, N - m2_max)

    def blk(mat_lm, k):
        return mat_lm.blocks.get(k)

    for s in range(s_max + 1):
        for t in range(t_max + 1):
            lhs = _zero_block(n)
            for u in range(N + 1):
                a = blk(phi1, s - u)
                b = blk(phi2, u - t)
                if a is None or b is None:
                    continue
                _acc_block(lhs, a, b, field, cap)
            rhs = _zero_block(n)
            pb = blk(prod, s - t)
            if pb is not None:
                for r in range(n):
                    for c in range(n):
                        e = pb[r][c]
                        if e is not None and e.terms:
                            rhs[r][c] = GradedSeries(field, cap, dict(e.terms))
            for u in range(N + 1):
                a = blk(phi1, s + u + 1)
                b = blk(phi2, -u - t - 1)
                if a is None or b is None:
                    continue
                _acc_block(rhs, a, b, field, cap, sign=-1)
            for r in range(n):
                for c in range(n):
                    x = lhs[r][c]
                    y = rhs[r][c]
                    xs = {} if x is None else {k: v for k, v in x.terms.items() if v}
                    ys = {} if y is None else {k: v for k, v in y.terms.items() if v}
                    if xs != ys:
                        return False
    return True


def _acc_block(tgt, a_blk, b_blk, field, cap, sign=1):
    n = len(tgt)
    for r in range(n):
        for k in range(n):
            e1 = a_blk[r][k]
            if e1 is None or e1.min_lambda() > cap:
                continue
            budget = cap - e1.min_lambda()
            for c in range(n):
                e2 = b_blk[k][c]
                if e2 is None or e2.min_lambda() > budget:
                    continue
                cur = tgt[r][c]
                if cur is None:
                    cur = GradedSeries.zero(field, cap)
                    tgt[r][c] = cur
                if sign == 1:
                    _mul_into(cur.terms, e1, e2, cap)
                else:
                    tmp = {}
                    _mul_into(tmp, e1, e2, cap)
                    for key, v in tmp.items():
                        acc = cur.terms.get(key)
                        if acc is None:
                            cur.terms[key] = -v
                        else:
                            acc = acc - v
                            if acc:
                                cur.terms[key] = acc
                            else:
                                del cur.terms[key]
    for row in tgt:
        for e in row:
            if e is not None:
                e._min_lambda = None
                e._lam_groups = None


# ---------------------------------------------------------------------------
# reductions and diagnostics


@dataclass
class ReductionReport:
    ok: bool
    q_order: int
    first_diff: tuple | None = None
    message: str = ""


def reduction_check(
    parent: TauExpansion,
    child: TauExpansion,
    var_map: dict,
    zero_set: set,
    q_order: int | None = None,
) -> ReductionReport:
    """Check child's q-expansion = parent's with zero_set families killed.

    var_map: child q-family alpha -> parent q-family alpha.
    zero_set: parent q-family alphas set to zero.
    """
    order = min(parent.q_order, child.q_order)
    if q_order is not None:
        if q_order > order:
            raise ValueError(f"q order {q_order} exceeds computed orders")
        order = q_order

    def parent_filter(code):
        alpha, _k = _q_split(code)
        if alpha in zero_set:
            return None
        return (code, 1)

    def child_relabel(code):
        alpha, k = _q_split(code)
        return (q_var(var_map.get(alpha, alpha), k), 1)

    pseries = parent.log_tau_q.map_vars(parent_filter).truncate(order)
    cseries = child.log_tau_q.map_vars(child_relabel).truncate(order)
    diff = pseries - cseries
    if diff.is_zero():
        return ReductionReport(True, order)
    key = diff.sorted_keys()[0]
    return ReductionReport(
        False,
        order,
        first_diff=key,
        message=f"first differing monomial {key}: {diff.terms[key]}",
    )


def homogeneity_report(exp: TauExpansion):
    """Diagnostic: lambda^l terms homogeneous of degree l under
    deg q_{alpha,k} = (h k + j_alpha)/(h+1)."""
    alg = exp.alg
    fams = q_families(alg)
    bad = []
    for g, series in exp.genus_parts.items():
        for (e, l, v), coeff in series.terms.items():
            w = QQ0
            for i in range(0, len(v), 2):
                alpha, k = _q_split(v[i])
                j_alpha = fams[alpha - 1].j
                w += QQ(alg.h * k + j_alpha, alg.h + 1) * v[i + 1]
            if w != l:
                bad.append((g, (e, l, v), w))
    return bad


def _q_split(code: int):
    """(alpha, k) from a q variable code."""
    rem = code - 1_000_000
    return rem // 10_000, rem % 10_000


def deriv_at_zero(series: GradedSeries, multiset: dict) -> GradedSeries:
    """Exact partial derivative at t=0 w.r.t. the given {var code: order}."""
    target = tuple(
        x for code in sorted(multiset) for x in (code, multiset[code])
    )
    out = {}
    for (e, l, v), coeff in series.terms.items():
        if v != target:
            continue
        fact = 1
        for i in range(1, len(v), 2):
            k = v[i]
            for m in range(2, k + 1):
                fact *= m
        out[(e, l, ())] = coeff * fact
    return GradedSeries(series.field, series.cap, out)
