"""Sparse graded formal series and matrices of z-Laurent series.

A monomial is (eps_pow, lambda_pow, vars) with vars a flat sorted tuple
(code, exp, code, exp, ...).  Variable codes: the time variable t_j maps to
2*j (primed: 2*j+1), the rescaled variable q_{alpha,k} to
1_000_000 + 10_000*alpha + k.  Everything is truncated at a lambda cap;
constants use the sentinel cap INF_CAP so that min() composes caps.

LoopMatrix holds an n x n matrix for every stored z-exponent and carries
the admissibility constant h: at z-exponent k every nonzero entry must
have lambda-degree >= (|k|-1)*h.
"""

from __future__ import annotations

from .numberfield import FieldElement, FieldMismatchError, NumberField
from .rational import QQ, QQ0, QQ1, qq_parse, qq_str

INF_CAP = 10**9

_Q_BASE = 1_000_000
_Q_STRIDE = 10_000


class NonNilpotentError(ValueError):
    """lm_exp input has lambda-degree-0 content; the series would not terminate."""


# ---------------------------------------------------------------------------
# variable codes


def t_var(j: int, primed: bool = False) -> int:
    if j < 1:
        raise ValueError("time variable index must be positive")
    return 2 * j + (1 if primed else 0)


def q_var(alpha: int, k: int) -> int:
    if alpha < 1 or k < 0:
        raise ValueError("q variable needs alpha >= 1, k >= 0")
    return _Q_BASE + _Q_STRIDE * alpha + k


def var_label(code: int) -> str:
    if code >= _Q_BASE:
        alpha, k = divmod(code - _Q_BASE, _Q_STRIDE)
        return f"q_{alpha}_{k}"
    j, primed = divmod(code, 2)
    return f"t_{j}p" if primed else f"t_{j}"


def var_from_label(label: str) -> int:
    if label.startswith("q_"):
        _, alpha, k = label.split("_")
        return q_var(int(alpha), int(k))
    if label.startswith("t_"):
        body = label[2:]
        primed = body.endswith("p")
        return t_var(int(body[:-1] if primed else body), primed)
    raise ValueError(f"unknown variable label {label!r}")


def vars_merge(v1: tuple, v2: tuple) -> tuple:
    """Merge two flat sorted (code, exp, ...) tuples, adding exponents."""
    if not v1:
        return v2
    if not v2:
        return v1
    out = []
    i = j = 0
    n1, n2 = len(v1), len(v2)
    while i < n1 and j < n2:
        c1, c2 = v1[i], v2[j]
        if c1 == c2:
            out.append(c1)
            out.append(v1[i + 1] + v2[j + 1])
            i += 2
            j += 2
        elif c1 < c2:
            out.append(c1)
            out.append(v1[i + 1])
            i += 2
        else:
            out.append(c2)
            out.append(v2[j + 1])
            j += 2
    out.extend(v1[i:])
    out.extend(v2[j:])
    return tuple(out)


# ---------------------------------------------------------------------------
# graded series


class GradedSeries:
    __slots__ = ("field", "cap", "terms", "_min_lambda", "_lam_groups")

    def __init__(self, field: NumberField, cap: int, terms: dict):
        self.field = field
        self.cap = cap
        self.terms = terms
        self._min_lambda = None
        self._lam_groups = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: NumberField, cap: int = INF_CAP) -> "GradedSeries":
        return cls(field, cap, {})

    @classmethod
    def const(cls, field: NumberField, coeff, cap: int = INF_CAP) -> "GradedSeries":
        if not coeff:
            return cls(field, cap, {})
        return cls(field, cap, {(0, 0, ()): coeff})

    @classmethod
    def monomial(
        cls, field, coeff, eps: int = 0, lam: int = 0, vars: tuple = (), cap=INF_CAP
    ) -> "GradedSeries":
        if not coeff or lam > cap:
            return cls(field, cap, {})
        return cls(field, cap, {(eps, lam, vars): coeff})

    # -- inspection ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def min_lambda(self) -> int:
        """Smallest lambda power present; INF_CAP for the zero series."""
        if self._min_lambda is None:
            self._min_lambda = (
                min(k[1] for k in self.terms) if self.terms else INF_CAP
            )
        return self._min_lambda

    def lam_groups(self):
        """Terms bucketed by ascending lambda power (cached)."""
        if self._lam_groups is None:
            buckets = {}
            for key, coeff in self.terms.items():
                buckets.setdefault(key[1], []).append((key, coeff))
            self._lam_groups = sorted(buckets.items())
        return self._lam_groups

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __repr__(self):
        n = len(self.terms)
        return f"GradedSeries({self.field.label}, cap={self.cap}, {n} terms)"

    def coeff(self, eps: int, lam: int, vars: tuple = ()):
        c = self.terms.get((eps, lam, vars))
        if c is None:
            return self._zero_coeff()
        return c

    def _zero_coeff(self):
        return QQ0 if self.field.degree == 1 else self.field.zero

    def _check_field(self, other: "GradedSeries"):
        if self.field is not other.field and self.field != other.field:
            raise FieldMismatchError(
                f"series over {self.field.label} vs {other.field.label}"
            )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check_field(other)
        cap = min(self.cap, other.cap)
        big, small = (self.terms, other.terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for key, coeff in small.items():
            acc = out.get(key)
            if acc is None:
                out[key] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        if cap < INF_CAP:
            out = {k: c for k, c in out.items() if k[1] <= cap}
        return GradedSeries(self.field, cap, out)

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(
            self.field, self.cap, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + (-other)

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        self._check_field(other)
        cap = min(self.cap, other.cap)
        out = {}
        _mul_into(out, self, other, cap)
        return GradedSeries(self.field, cap, out)

    def scale(self, coeff) -> "GradedSeries":
        if not coeff:
            return GradedSeries(self.field, self.cap, {})
        return GradedSeries(
            self.field, self.cap, {k: c * coeff for k, c in self.terms.items()}
        )

    def mul_monomial(
        self, coeff, eps: int = 0, lam: int = 0, vars: tuple = ()
    ) -> "GradedSeries":
        """Fast path: multiply by a single monomial coeff * eps^e lam^l vars."""
        if not coeff:
            return GradedSeries(self.field, self.cap, {})
        cap = self.cap
        out = {}
        for (e, l, v), c in self.terms.items():
            l2 = l + lam
            if l2 > cap:
                continue
            out[(e + eps, l2, vars_merge(v, vars))] = c * coeff
        return GradedSeries(self.field, cap, out)

    def truncate(self, cap: int) -> "GradedSeries":
        if cap >= self.cap:
            return GradedSeries(self.field, cap, dict(self.terms))
        return GradedSeries(
            self.field, cap, {k: c for k, c in self.terms.items() if k[1] <= cap}
        )

    def extract(self, predicate) -> "GradedSeries":
        """Sub-series of monomials where predicate(eps, lam, vars) holds."""
        return GradedSeries(
            self.field,
            self.cap,
            {k: c for k, c in self.terms.items() if predicate(k[0], k[1], k[2])},
        )

    def map_vars(self, mapper) -> "GradedSeries":
        """Relabel/rescale variables: mapper(code) -> (new_code, scalar) or None.

        Codes mapped to None zero out any monomial containing them.  The
        scalar multiplies the coefficient once per power of the variable.
        """
        out = {}
        for (e, l, v), c in self.terms.items():
            dead = False
            parts = []
            coeff = c
            for i in range(0, len(v), 2):
                mapped = mapper(v[i])
                if mapped is None:
                    dead = True
                    break
                code, scalar = mapped
                exp = v[i + 1]
                parts.append((code, exp))
                if scalar != 1:
                    coeff = coeff * scalar**exp
            if dead or not coeff:
                continue
            parts.sort()
            flat = tuple(x for pair in parts for x in pair)
            key = (e, l, flat)
            acc = out.get(key)
            if acc is None:
                out[key] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return GradedSeries(self.field, self.cap, out)

    # -- serialization -------------------------------------------------------

    def sorted_keys(self):
        """Canonical order: (lambda_pow, eps_pow, vars)."""
        return sorted(self.terms, key=lambda k: (k[1], k[0], k[2]))

    def to_json(self) -> list:
        out = []
        for key in self.sorted_keys():
            eps, lam, vars = key
            coeff = self.terms[key]
            if isinstance(coeff, FieldElement):
                try:
                    cval = qq_str(coeff.project_rational())
                except Exception:
                    cval = coeff.to_json()
            else:
                cval = qq_str(coeff)
            out.append(
                {
                    "eps": eps,
                    "lambda": lam,
                    "vars": {var_label(vars[i]): vars[i + 1] for i in range(0, len(vars), 2)},
                    "coeff": cval,
                }
            )
        return out

    @classmethod
    def from_json(cls, field: NumberField, cap: int, data: list) -> "GradedSeries":
        terms = {}
        for item in data:
            pairs = sorted(
                (var_from_label(name), exp) for name, exp in item["vars"].items()
            )
            flat = tuple(x for pair in pairs for x in pair)
            raw = item["coeff"]
            if isinstance(raw, str):
                coeff = qq_parse(raw)
                if field.degree > 1:
                    coeff = field.from_rational(coeff)
            else:
                from .numberfield import element_from_json

                coeff = element_from_json(field, raw)
            terms[(item["eps"], item["lambda"], flat)] = coeff
        return cls(field, cap, terms)


def _mul_into(out: dict, a: GradedSeries, b: GradedSeries, cap: int):
    """out += a*b truncated at cap; mutates and zero-prunes out."""
    if not a.terms or not b.terms:
        return
    if a.min_lambda() + b.min_lambda() > cap:
        return
    if len(a.terms) > len(b.terms):
        a, b = b, a
    groups = b.lam_groups()
    out_get = out.get
    for (e1, l1, v1), c1 in a.terms.items():
        budget = cap - l1
        for lam2, items in groups:
            if lam2 > budget:
                break
            lam = l1 + lam2
            for (e2, _, v2), c2 in items:
                key = (e1 + e2, lam, vars_merge(v1, v2))
                c = c1 * c2
                acc = out_get(key)
                if acc is None:
                    out[key] = c
                else:
                    acc = acc + c
                    if acc:
                        out[key] = acc
                    else:
                        del out[key]


def gs_arith(a: GradedSeries, b: GradedSeries, op: str) -> GradedSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def gs_extract(series: GradedSeries, predicate) -> GradedSeries:
    return series.extract(predicate)


# ---------------------------------------------------------------------------
# loop matrices


class AdmissibilityError(ValueError):
    pass


class LoopMatrix:
    """n x n matrix of z-Laurent series with GradedSeries entries.

    blocks maps a z-exponent to an n x n list-of-lists with None for zero
    entries.  h is the admissibility constant of the underlying algebra.
    """

    __slots__ = ("field", "n", "h", "cap", "blocks")

    def __init__(self, field, n: int, h: int, cap: int, blocks: dict):
        self.field = field
        self.n = n
        self.h = h
        self.cap = cap
        self.blocks = blocks

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field, n, h, cap=INF_CAP) -> "LoopMatrix":
        return cls(field, n, h, cap, {})

    @classmethod
    def identity(cls, field, n, h, cap=INF_CAP) -> "LoopMatrix":
        one = QQ1 if field.degree == 1 else field.one
        blk = [[None] * n for _ in range(n)]
        for i in range(n):
            blk[i][i] = GradedSeries.const(field, one, cap)
        return cls(field, n, h, cap, {0: blk})

    @classmethod
    def from_entries(cls, field, n, h, entries, cap=INF_CAP) -> "LoopMatrix":
        """entries: iterable of (z_exp, row, col, coeff) with 0-based indices."""
        blocks = {}
        for z, r, c, coeff in entries:
            if not coeff:
                continue
            blk = blocks.setdefault(z, [[None] * n for _ in range(n)])
            cur = blk[r][c]
            series = GradedSeries.const(field, coeff, cap)
            blk[r][c] = series if cur is None else cur + series
        m = cls(field, n, h, cap, blocks)
        m._prune()
        return m

    def _prune(self):
        for z in list(self.blocks):
            blk = self.blocks[z]
            if all(e is None or e.is_zero() for row in blk for e in row):
                del self.blocks[z]
            else:
                for row in blk:
                    for c, e in enumerate(row):
                        if e is not None and e.is_zero():
                            row[c] = None

    def copy(self) -> "LoopMatrix":
        return LoopMatrix(
            self.field,
            self.n,
            self.h,
            self.cap,
            {z: [row[:] for row in blk] for z, blk in self.blocks.items()},
        )

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(
            e is None or e.is_zero() for blk in self.blocks.values() for row in blk for e in row
        )

    def entry(self, z: int, r: int, c: int) -> GradedSeries:
        blk = self.blocks.get(z)
        e = blk[r][c] if blk is not None else None
        return e if e is not None else GradedSeries.zero(self.field, self.cap)

    def z_range(self):
        zs = [z for z, blk in self.blocks.items()]
        return (min(zs), max(zs)) if zs else (0, 0)

    def __eq__(self, other):
        if not isinstance(other, LoopMatrix):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return (
            f"LoopMatrix(n={self.n}, h={self.h}, cap={self.cap}, "
            f"z_modes={sorted(self.blocks)})"
        )

    def validate_admissible(self):
        """Check the lambda-degree lower bound (|k|-1)*h on every z-block."""
        for z, blk in self.blocks.items():
            bound = (abs(z) - 1) * self.h
            if bound <= 0:
                continue
            for r, row in enumerate(blk):
                for c, e in enumerate(row):
                    if e is not None and e.terms and e.min_lambda() < bound:
                        raise AdmissibilityError(
                            f"entry z^{z}[{r},{c}] has lambda degree "
                            f"{e.min_lambda()} < {bound}"
                        )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LoopMatrix") -> "LoopMatrix":
        self._compat(other)
        cap = min(self.cap, other.cap)
        blocks = {z: [row[:] for row in blk] for z, blk in self.blocks.items()}
        for z, blk in other.blocks.items():
            mine = blocks.setdefault(z, [[None] * self.n for _ in range(self.n)])
            for r in range(self.n):
                for c in range(self.n):
                    e = blk[r][c]
                    if e is None:
                        continue
                    mine[r][c] = e if mine[r][c] is None else mine[r][c] + e
        out = LoopMatrix(self.field, self.n, self.h, cap, blocks)
        out._prune()
        return out

    def __neg__(self) -> "LoopMatrix":
        return self.scale(-QQ1 if self.field.degree == 1 else -self.field.one)

    def __sub__(self, other: "LoopMatrix") -> "LoopMatrix":
        return self + (-other)

    def scale(self, coeff) -> "LoopMatrix":
        blocks = {}
        for z, blk in self.blocks.items():
            blocks[z] = [
                [None if e is None else e.scale(coeff) for e in row] for row in blk
            ]
        out = LoopMatrix(self.field, self.n, self.h, self.cap, blocks)
        out._prune()
        return out

    def mul_series(self, series: GradedSeries) -> "LoopMatrix":
        blocks = {}
        for z, blk in self.blocks.items():
            blocks[z] = [
                [None if e is None else e * series for e in row] for row in blk
            ]
        out = LoopMatrix(self.field, self.n, self.h, min(self.cap, series.cap), blocks)
        out._prune()
        return out

    def z_shift(self, k: int) -> "LoopMatrix":
        return LoopMatrix(
            self.field,
            self.n,
            self.h,
            self.cap,
            {z + k: [row[:] for row in blk] for z, blk in self.blocks.items()},
        )

    def z_derivative(self) -> "LoopMatrix":
        """d/dz, entrywise on z-Laurent coefficients (not admissible in general)."""
        blocks = {}
        for z, blk in self.blocks.items():
            if z == 0:
                continue
            factor = QQ(z) if self.field.degree == 1 else self.field.from_rational(z)
            blocks[z - 1] = [
                [None if e is None else e.scale(factor) for e in row] for row in blk
            ]
        out = LoopMatrix(self.field, self.n, self.h, self.cap, blocks)
        out._prune()
        return out

    def z_project_nonneg(self) -> "LoopMatrix":
        return LoopMatrix(
            self.field,
            self.n,
            self.h,
            self.cap,
            {z: [row[:] for row in blk] for z, blk in self.blocks.items() if z >= 0},
        )

    def _compat(self, other: "LoopMatrix"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch {self.n} vs {other.n}")
        if self.h != other.h:
            raise ValueError(f"admissibility constant mismatch {self.h} vs {other.h}")

    def __mul__(self, other: "LoopMatrix") -> "LoopMatrix":
        return lm_mul(self, other)

    def trace(self) -> GradedSeries:
        out = GradedSeries.zero(self.field, self.cap)
        blk = self.blocks.get(0)
        if blk is not None:
            for i in range(self.n):
                if blk[i][i] is not None:
                    out = out + blk[i][i]
        return out

    def residue_trace(self) -> GradedSeries:
        """Res Tr(M) dz: trace of the z^(-1) block."""
        out = GradedSeries.zero(self.field, self.cap)
        blk = self.blocks.get(-1)
        if blk is not None:
            for i in range(self.n):
                if blk[i][i] is not None:
                    out = out + blk[i][i]
        return out


def lm_mul(a: LoopMatrix, b: LoopMatrix) -> LoopMatrix:
    a._compat(b)
    cap = min(a.cap, b.cap)
    n = a.n
    out_blocks = {}
    for z1, blk1 in a.blocks.items():
        for z2, blk2 in b.blocks.items():
            z = z1 + z2
            tgt = out_blocks.get(z)
            if tgt is None:
                tgt = [[None] * n for _ in range(n)]
                out_blocks[z] = tgt
            for r in range(n):
                row1 = blk1[r]
                trow = tgt[r]
                for k in range(n):
                    e1 = row1[k]
                    if e1 is None or e1.min_lambda() > cap:
                        continue
                    row2 = blk2[k]
                    budget = cap - e1.min_lambda()
                    for c in range(n):
                        e2 = row2[c]
                        if e2 is None or e2.min_lambda() > budget:
                            continue
                        cur = trow[c]
                        if cur is None:
                            cur = GradedSeries.zero(a.field, cap)
                            trow[c] = cur
                        _mul_into(cur.terms, e1, e2, cap)
    out = LoopMatrix(a.field, n, a.h, cap, out_blocks)
    for blk in out_blocks.values():
        for row in blk:
            for c, e in enumerate(row):
                if e is not None:
                    e._min_lambda = None
                    e._lam_groups = None
    out._prune()
    return out


def lm_exp(s: LoopMatrix) -> LoopMatrix:
    """exp(S) truncated at S.cap; every monomial of S must have lambda >= 1."""
    s_min = INF_CAP
    for blk in s.blocks.values():
        for row in blk:
            for e in row:
                if e is not None and e.terms:
                    ml = min(k[1] for k in e.terms)
                    if ml < 1:
                        raise NonNilpotentError(
                            "lm_exp needs every monomial to carry lambda >= 1"
                        )
                    s_min = min(s_min, ml)
    ident = LoopMatrix.identity(s.field, s.n, s.h, s.cap)
    if s_min >= INF_CAP:
        return ident
    if s.cap >= INF_CAP:
        raise ValueError("cannot exponentiate an uncapped series matrix")
    m_max = s.cap // s_min
    acc = ident
    for m in range(m_max, 0, -1):
        acc = ident + lm_mul(s, acc).scale(QQ(1, m))
    return acc


def lm_fourier(a: LoopMatrix, k: int):
    """The z^k coefficient as an n x n array of GradedSeries."""
    blk = a.blocks.get(k)
    zero = GradedSeries.zero(a.field, a.cap)
    if blk is None:
        return [[zero] * a.n for _ in range(a.n)]
    return [[e if e is not None else zero for e in row] for row in blk]
