"""Matrix realizations of the untwisted affine algebras of types A, B, C, D, G2.

Everything is indexed 0-based internally.  For each (family, rank) the
builder assembles: the n x n Weyl generator matrices E_i, F_i, H_i
(i = 0..rank), the affine Cartan matrix and Kac labels, the Coxeter number
h, the trace-form normalization kappa, the diagonal grading matrix rho,
the cyclic element Lambda = z*E_0 + sum_i E_i and (for type D) the extra
generator Gamma feeding the doubled exponent class.

Constant/Laurent matrices are handled as sparse dicts:
  constant matrix: {(r, c): coeff}
  z-matrix (ZMat): {(z, r, c): coeff}
with coeff a rational (degree-1 field) or a FieldElement.
"""

from __future__ import annotations

from typing import NamedTuple

from .numberfield import (
    FieldElement,
    NumberField,
    adjoin_root,
    quadratic_field,
    rational_field,
)
from .rational import QQ, QQ0, QQ1, squarefree_part
from .series import INF_CAP, GradedSeries, LoopMatrix


class AlgebraSpec(NamedTuple):
    family: str
    rank: int


class ExponentLabel(NamedTuple):
    j: int
    primed: bool = False

    def __str__(self):
        return f"{self.j}'" if self.primed else str(self.j)


_RANK_BOUNDS = {"A": 1, "B": 3, "C": 2, "D": 4, "G": 2}


class InvalidExponentError(ValueError):
    pass


def parse_spec(text: str) -> AlgebraSpec:
    text = text.strip().upper()
    if len(text) < 2 or text[0] not in _RANK_BOUNDS or not text[1:].isdigit():
        raise ValueError(f"cannot parse algebra spec {text!r}")
    spec = AlgebraSpec(text[0], int(text[1:]))
    validate_spec(spec)
    return spec


def validate_spec(spec: AlgebraSpec):
    low = _RANK_BOUNDS[spec.family]
    if spec.family == "G":
        if spec.rank != 2:
            raise ValueError("type G exists only at rank 2")
    elif spec.rank < low:
        raise ValueError(f"type {spec.family} needs rank >= {low}, got {spec.rank}")


# ---------------------------------------------------------------------------
# sparse matrix helpers


def zmat_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, c in b.items():
        acc = out.get(key)
        if acc is None:
            out[key] = c
        else:
            acc = acc + c
            if acc:
                out[key] = acc
            else:
                del out[key]
    return out


def zmat_scale(a: dict, s) -> dict:
    if not s:
        return {}
    return {key: c * s for key, c in a.items()}


def zmat_sub(a: dict, b: dict) -> dict:
    return zmat_add(a, {k: -c for k, c in b.items()})


def zmat_mul(a: dict, b: dict) -> dict:
    by_row = {}
    for (z, r, c), coeff in b.items():
        by_row.setdefault(r, []).append((z, c, coeff))
    out = {}
    for (z1, r, k), c1 in a.items():
        for z2, c, c2 in by_row.get(k, ()):
            key = (z1 + z2, r, c)
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


def zmat_commutator(a: dict, b: dict) -> dict:
    return zmat_sub(zmat_mul(a, b), zmat_mul(b, a))


def zmat_power(a: dict, k: int) -> dict:
    out = None
    base = a
    while k:
        if k & 1:
            out = base if out is None else zmat_mul(out, base)
        k >>= 1
        if k:
            base = zmat_mul(base, base)
    return out if out is not None else {}


def zmat_zshift(a: dict, s: int) -> dict:
    return {(z + s, r, c): coeff for (z, r, c), coeff in a.items()}


def zmat_deriv_z(a: dict, field: NumberField) -> dict:
    out = {}
    for (z, r, c), coeff in a.items():
        if z == 0:
            continue
        f = QQ(z) if field.degree == 1 else field.from_rational(z)
        out[(z - 1, r, c)] = coeff * f
    return out


def zmat_trace_zcoeff(a: dict, z: int, field: NumberField):
    acc = QQ0 if field.degree == 1 else field.zero
    for (zz, r, c), coeff in a.items():
        if zz == z and r == c:
            acc = acc + coeff
    return acc


def zmat_is_zero(a: dict) -> bool:
    return not any(a.values())


def zmat_to_loop(field, n, h, zmat: dict, cap=INF_CAP) -> LoopMatrix:
    entries = [(z, r, c, coeff) for (z, r, c), coeff in zmat.items()]
    return LoopMatrix.from_entries(field, n, h, entries, cap)


def zmat_from_loop(m: LoopMatrix) -> dict:
    out = {}
    for z, blk in m.blocks.items():
        for r in range(m.n):
            for c in range(m.n):
                e = blk[r][c]
                if e is None or e.is_zero():
                    continue
                coeff = e.terms.get((0, 0, ()))
                if coeff is None or len(e.terms) > 1:
                    raise ValueError("matrix entry is not a plain constant")
                out[(z, r, c)] = coeff
    return out


# ---------------------------------------------------------------------------
# algebra data


class AlgebraData:
    def __init__(self, **kw):
        self.spec: AlgebraSpec = kw["spec"]
        self.n: int = kw["n"]
        self.h: int = kw["h"]
        self.kappa = kw["kappa"]
        self.cartan = kw["cartan"]
        self.kac_labels = kw["kac_labels"]
        self.field: NumberField = kw["field"]
        self.E = kw["E"]  # list of constant matrices {(r,c): coeff}
        self.F = kw["F"]
        self.H = kw["H"]
        self.rho_diag = kw["rho_diag"]  # tuple of rationals
        self.Lambda = kw["Lambda"]  # ZMat
        self.Gamma = kw.get("Gamma")  # ZMat, type D only
        self.sqrt2 = kw.get("sqrt2")  # field element, B/D/G
        self.sqrt_heis = kw.get("sqrt_heis")  # sqrt(2l-2) for D primed class
        self.exponents_in_period = kw["exponents_in_period"]
        self.label = f"{self.spec.family}{self.spec.rank}"

    def __repr__(self):
        return f"AlgebraData({self.label}, n={self.n}, h={self.h})"

    # coefficient helpers -------------------------------------------------

    def c(self, q):
        """Lift a rational into the coefficient domain."""
        return QQ(q) if self.field.degree == 1 else self.field.from_rational(q)

    def one(self):
        return QQ1 if self.field.degree == 1 else self.field.one

    def weyl_e(self, i: int) -> dict:
        """e_i = z^{delta_{i,0}} E_i as a ZMat."""
        z = 1 if i == 0 else 0
        return {(z, r, c): v for (r, c), v in self.E[i].items()}

    def weyl_f(self, i: int) -> dict:
        z = -1 if i == 0 else 0
        return {(z, r, c): v for (r, c), v in self.F[i].items()}

    def weyl_h(self, i: int) -> dict:
        return {(0, r, c): v for (r, c), v in self.H[i].items()}

    def lambda1(self) -> dict:
        """The normalized degree-1 Heisenberg generator Lambda_1 as a ZMat."""
        return heisenberg_zmat(self, ExponentLabel(1, False))

    def dprime_action(self, x: dict) -> dict:
        """[d'_{-1}, X] = dX/dz + (1/(h z)) [rho, X] on a ZMat."""
        out = zmat_deriv_z(x, self.field)
        hq = QQ(self.h)
        for (z, r, c), coeff in x.items():
            w = (self.rho_diag[r] - self.rho_diag[c]) / hq
            if w:
                key = (z - 1, r, c)
                val = coeff * self.c(w)
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


def _emat(entries) -> dict:
    """Constant matrix from 1-BASED (r, c, coeff) triples."""
    out = {}
    for r, c, coeff in entries:
        key = (r - 1, c - 1)
        out[key] = out.get(key, QQ0) + QQ(coeff)
    return {k: v for k, v in out.items() if v}


def _lift_const(mat: dict, field: NumberField) -> dict:
    if field.degree == 1:
        return dict(mat)
    return {k: field.from_rational(v) for k, v in mat.items()}


def _diag_from_H(H_list, coeffs, n):
    diag = [QQ0] * n
    for coeff, H in zip(coeffs, H_list):
        for (r, c), v in H.items():
            if r == c:
                diag[r] += coeff * v
    return tuple(diag)


def _solve_c_vector(cartan, rank):
    """(1,...,1) * Adot^{-1} for the finite Cartan matrix (rows/cols 1..rank)."""
    size = rank
    rows = [[QQ(cartan[i + 1][j + 1]) for j in range(size)] for i in range(size)]
    # solve c^T * Adot = (1,..,1)  <=>  Adot^T c = 1
    mat = [[rows[j][i] for j in range(size)] for i in range(size)]
    rhs = [QQ1] * size
    for col in range(size):
        piv = next(r for r in range(col, size) if mat[r][col])
        mat[col], mat[piv] = mat[piv], mat[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        rhs[col] *= inv
        for r in range(size):
            if r != col and mat[r][col]:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
                rhs[r] -= f * rhs[col]
    return rhs


def _coroot_scale(E, F, H):
    """nu with [H, E] = nu E; the coroot is (2/nu) H."""
    (r, c), coeff = next(iter(E.items()))
    hr = H.get((r, r), QQ0)
    hc = H.get((c, c), QQ0)
    return hr - hc


def build_algebra(spec: AlgebraSpec | str) -> AlgebraData:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    validate_spec(spec)
    fam, l = spec.family, spec.rank
    if fam == "A":
        data = _build_a(l)
    elif fam == "B":
        data = _build_b(l)
    elif fam == "C":
        data = _build_c(l)
    elif fam == "D":
        data = _build_d(l)
    else:
        data = _build_g2()
    data["spec"] = spec

    # rho from eq. (1,...,1) Adot^{-1} against coroots (short-root H's in the
    # printed tables are half-coroots; rescale by the realized [H,E] pairing)
    cvec = _solve_c_vector(data["cartan"], l)
    coroots = []
    for i in range(1, l + 1):
        nu = _coroot_scale(data["E_raw"][i], data["F_raw"][i], data["H_raw"][i])
        coroots.append({k: QQ(2) / nu * v for k, v in data["H_raw"][i].items()})
    rho = _diag_from_H(coroots, cvec, data["n"])
    data["rho_diag"] = rho

    field = data["field"]
    data["E"] = [_lift_const(m, field) for m in data["E_raw"]]
    data["F"] = [_lift_const(m, field) for m in data["F_raw"]]
    data["H"] = [_lift_const(m, field) for m in data["H_raw"]]
    del data["E_raw"], data["F_raw"], data["H_raw"]

    alg = AlgebraData(**data)
    _finish_lambda(alg)
    _check_realization(alg)
    return alg


def _finish_lambda(alg: AlgebraData):
    lam = {}
    for i in range(len(alg.E)):
        lam = zmat_add(lam, alg.weyl_e(i))
    alg.Lambda = lam


def _check_realization(alg: AlgebraData):
    """Construction-time sanity: rho grades every Weyl generator correctly."""
    for i in range(len(alg.E)):
        deg = principal_degree_zmat(alg, alg.weyl_e(i))
        if deg != 1:
            raise AssertionError(f"{alg.label}: e_{i} has principal degree {deg}")
        deg = principal_degree_zmat(alg, alg.weyl_f(i))
        if deg != -1:
            raise AssertionError(f"{alg.label}: f_{i} has principal degree {deg}")
    if sum(alg.kac_labels) != alg.h:
        raise AssertionError(f"{alg.label}: Kac labels do not sum to h")
    for i, row in enumerate(alg.cartan):
        if sum(a * k for a, k in zip(row, alg.kac_labels)) != 0:
            raise AssertionError(f"{alg.label}: Cartan row {i} does not kill labels")


# -- per-family tables -------------------------------------------------------


def _build_a(l: int) -> dict:
    n = l + 1
    E = [_emat([(1, n, 1)])]
    F = [_emat([(n, 1, 1)])]
    H = [_emat([(1, 1, 1), (n, n, -1)])]
    for i in range(1, l + 1):
        E.append(_emat([(i + 1, i, 1)]))
        F.append(_emat([(i, i + 1, 1)]))
        H.append(_emat([(i, i, -1), (i + 1, i + 1, 1)]))
    if l == 1:
        cartan = ((2, -2), (-2, 2))
    else:
        rows = []
        for i in range(l + 1):
            row = [0] * (l + 1)
            row[i] = 2
            row[(i + 1) % (l + 1)] = -1
            row[(i - 1) % (l + 1)] = -1
            rows.append(tuple(row))
        cartan = tuple(rows)
    exps = [ExponentLabel(j) for j in range(1, n) ]
    return dict(
        n=n,
        h=n,
        kappa=QQ1,
        cartan=cartan,
        kac_labels=(1,) * (l + 1),
        field=rational_field(),
        E_raw=E,
        F_raw=F,
        H_raw=H,
        Lambda=None,
        exponents_in_period=exps,
    )


def _build_b(l: int) -> dict:
    n = 2 * l + 1
    E = [_emat([(1, 2 * l, QQ(1, 2)), (2, 2 * l + 1, QQ(1, 2))])]
    F = [_emat([(2 * l, 1, 2), (2 * l + 1, 2, 2)])]
    H = [_emat([(1, 1, 1), (2, 2, 1), (2 * l, 2 * l, -1), (2 * l + 1, 2 * l + 1, -1)])]
    for i in range(1, l):
        E.append(_emat([(i + 1, i, 1), (2 * l + 2 - i, 2 * l + 1 - i, 1)]))
        F.append(_emat([(i, i + 1, 1), (2 * l + 1 - i, 2 * l + 2 - i, 1)]))
        H.append(
            _emat(
                [
                    (i, i, -1),
                    (i + 1, i + 1, 1),
                    (2 * l + 1 - i, 2 * l + 1 - i, -1),
                    (2 * l + 2 - i, 2 * l + 2 - i, 1),
                ]
            )
        )
    E.append(_emat([(l + 1, l, 1), (l + 2, l + 1, 1)]))
    F.append(_emat([(l, l + 1, 1), (l + 1, l + 2, 1)]))
    H.append(_emat([(l, l, -1), (l + 2, l + 2, 1)]))
    rows = [[0] * (l + 1) for _ in range(l + 1)]
    for i in range(l + 1):
        rows[i][i] = 2
    rows[0][2] = -1
    rows[1][2] = -1
    rows[2][0] = -1
    rows[2][1] = -1
    for i in range(2, l):
        rows[i][i + 1] = -1
        if i > 2:
            rows[i][i - 1] = -1
    if l > 2:
        rows[l - 1][l] = -1
    rows[l][l - 1] = -2
    cartan = tuple(tuple(r) for r in rows)
    exps = [ExponentLabel(j) for j in range(1, 2 * l) if j % 2 == 1]
    field = quadratic_field(2)
    return dict(
        n=n,
        h=2 * l,
        kappa=QQ(1, 2),
        cartan=cartan,
        kac_labels=(1, 1) + (2,) * (l - 1),
        field=field,
        E_raw=E,
        F_raw=F,
        H_raw=H,
        Lambda=None,
        sqrt2=field.gen(),
        exponents_in_period=exps,
    )


def _build_c(l: int) -> dict:
    n = 2 * l
    E = [_emat([(1, 2 * l, 1)])]
    F = [_emat([(2 * l, 1, 1)])]
    H = [_emat([(1, 1, 1), (2 * l, 2 * l, -1)])]
    for i in range(1, l):
        E.append(_emat([(i + 1, i, 1), (2 * l + 1 - i, 2 * l - i, 1)]))
        F.append(_emat([(i, i + 1, 1), (2 * l - i, 2 * l + 1 - i, 1)]))
        H.append(
            _emat(
                [
                    (i, i, -1),
                    (i + 1, i + 1, 1),
                    (2 * l - i, 2 * l - i, -1),
                    (2 * l + 1 - i, 2 * l + 1 - i, 1),
                ]
            )
        )
    E.append(_emat([(l + 1, l, 1)]))
    F.append(_emat([(l, l + 1, 1)]))
    H.append(_emat([(l, l, -1), (l + 1, l + 1, 1)]))
    rows = [[0] * (l + 1) for _ in range(l + 1)]
    for i in range(l + 1):
        rows[i][i] = 2
        if i + 1 <= l:
            rows[i][i + 1] = -1
        if i - 1 >= 0:
            rows[i][i - 1] = -1
    rows[1][0] = -2
    rows[l - 1][l] = -2
    cartan = tuple(tuple(r) for r in rows)
    exps = [ExponentLabel(j) for j in range(1, 2 * l) if j % 2 == 1]
    return dict(
        n=n,
        h=2 * l,
        kappa=QQ1,
        cartan=cartan,
        kac_labels=(1,) + (2,) * (l - 1) + (1,),
        field=rational_field(),
        E_raw=E,
        F_raw=F,
        H_raw=H,
        Lambda=None,
        exponents_in_period=exps,
    )


def _build_d(l: int) -> dict:
    n = 2 * l
    E = [_emat([(1, 2 * l - 1, QQ(1, 2)), (2, 2 * l, QQ(1, 2))])]
    F = [_emat([(2 * l - 1, 1, 2), (2 * l, 2, 2)])]
    H = [
        _emat(
            [(1, 1, 1), (2, 2, 1), (2 * l - 1, 2 * l - 1, -1), (2 * l, 2 * l, -1)]
        )
    ]
    for i in range(1, l):
        E.append(_emat([(i + 1, i, 1), (2 * l + 1 - i, 2 * l - i, 1)]))
        F.append(_emat([(i, i + 1, 1), (2 * l - i, 2 * l + 1 - i, 1)]))
        H.append(
            _emat(
                [
                    (i, i, -1),
                    (i + 1, i + 1, 1),
                    (2 * l - i, 2 * l - i, -1),
                    (2 * l + 1 - i, 2 * l + 1 - i, 1),
                ]
            )
        )
    E.append(_emat([(l + 1, l - 1, QQ(1, 2)), (l + 2, l, QQ(1, 2))]))
    F.append(_emat([(l - 1, l + 1, 2), (l, l + 2, 2)]))
    H.append(
        _emat(
            [
                (l - 1, l - 1, -1),
                (l, l, -1),
                (l + 1, l + 1, 1),
                (l + 2, l + 2, 1),
            ]
        )
    )
    rows = [[0] * (l + 1) for _ in range(l + 1)]
    for i in range(l + 1):
        rows[i][i] = 2
    rows[0][2] = -1
    rows[1][2] = -1
    rows[2][0] = -1
    rows[2][1] = -1
    for i in range(2, l - 2):
        rows[i][i + 1] = -1
        rows[i + 1][i] = -1
    rows[l - 2][l - 1] = -1
    rows[l - 2][l] = -1
    rows[l - 1][l - 2] = -1
    rows[l][l - 2] = -1
    cartan = tuple(tuple(r) for r in rows)
    h = 2 * l - 2

    # field: needs sqrt2, sqrt(2l-2) and (odd rank) sqrt(-1)
    field = quadratic_field(2)
    sqrt2 = field.gen()
    s = squarefree_part(2 * l - 2)
    if s == 1:
        from math import isqrt

        sqrt_heis = field.from_rational(isqrt(2 * l - 2))
    elif s == 2:
        from math import isqrt

        sqrt_heis = sqrt2 * field.from_rational(isqrt((2 * l - 2) // 2))
    else:
        field, emb, root_s = adjoin_root(
            field, (QQ(-s), QQ0, QQ1), f"Q(sqrt2,sqrt{s})"
        )
        sqrt2 = emb(sqrt2)
        from math import isqrt

        sqrt_heis = root_s * field.from_rational(isqrt((2 * l - 2) // s))
    if l % 2 == 1:
        field, emb, mu = adjoin_root(field, (QQ1, QQ0, QQ1), field.label + "(i)")
        sqrt2 = emb(sqrt2)
        sqrt_heis = emb(sqrt_heis)
    else:
        mu = field.one

    # Gamma of the doubled exponent class (built over the final field)
    half = field.from_rational(QQ(1, 2))
    quarter = field.from_rational(QQ(1, 4))
    one = field.one
    sgn = one if l % 2 == 0 else -one
    gamma = {
        (0, l - 1, 0): one,
        (0, l, 0): -half,
        (1, l - 1, 2 * l - 1): -half,
        (1, l, 2 * l - 1): quarter,
        (0, 2 * l - 1, l): sgn,
        (0, 2 * l - 1, l - 1): -sgn * half,
        (1, 0, l): -sgn * half,
        (1, 0, l - 1): sgn * quarter,
    }
    gamma = {k: -mu * v for k, v in gamma.items()}

    exps = [ExponentLabel(j) for j in range(1, h) if j % 2 == 1]
    if l % 2 == 0:
        exps.append(ExponentLabel(l - 1, True))
    else:
        exps.append(ExponentLabel(l - 1, False))
    exps.sort(key=lambda e: (e.j, e.primed))
    return dict(
        n=n,
        h=h,
        kappa=QQ(1, 2),
        cartan=cartan,
        kac_labels=(1, 1) + (2,) * (l - 3) + (1, 1),
        field=field,
        E_raw=E,
        F_raw=F,
        H_raw=H,
        Lambda=None,
        Gamma=gamma,
        sqrt2=sqrt2,
        sqrt_heis=sqrt_heis,
        exponents_in_period=exps,
    )


def _build_g2() -> dict:
    # The printed F_1 lacks the factor 2 on the middle entries; without it
    # [E_1, F_1], E_1 is not an sl2 pair and no rho reproduces the grading.
    E = [
        _emat([(1, 6, QQ(1, 2)), (2, 7, QQ(1, 2))]),
        _emat([(2, 1, 1), (4, 3, 1), (5, 4, 1), (7, 6, 1)]),
        _emat([(3, 2, 1), (6, 5, 1)]),
    ]
    F = [
        _emat([(6, 1, 2), (7, 2, 2)]),
        _emat([(1, 2, 1), (3, 4, 2), (4, 5, 2), (6, 7, 1)]),
        _emat([(2, 3, 1), (5, 6, 1)]),
    ]
    H = [
        _emat([(1, 1, 1), (2, 2, 1), (6, 6, -1), (7, 7, -1)]),
        _emat(
            [(1, 1, -1), (2, 2, 1), (3, 3, -2), (5, 5, 2), (6, 6, -1), (7, 7, 1)]
        ),
        _emat([(2, 2, -1), (3, 3, 1), (5, 5, -1), (6, 6, 1)]),
    ]
    cartan = ((2, 0, -1), (0, 2, -3), (-1, -1, 2))
    field = quadratic_field(2)
    exps = [ExponentLabel(1), ExponentLabel(5)]
    return dict(
        n=7,
        h=6,
        kappa=QQ(1, 2),
        cartan=cartan,
        kac_labels=(1, 3, 2),
        field=field,
        E_raw=E,
        F_raw=F,
        H_raw=H,
        Lambda=None,
        sqrt2=field.gen(),
        exponents_in_period=exps,
    )


# ---------------------------------------------------------------------------
# principal degree and exponents


def principal_degree_zmat(alg: AlgebraData, m: dict):
    """Common value of rho_r - rho_c + z*h over nonzero entries, else None."""
    deg = None
    for (z, r, c), coeff in m.items():
        if not coeff:
            continue
        d = alg.rho_diag[r] - alg.rho_diag[c] + z * alg.h
        if d != int(d):
            return None
        d = int(d)
        if deg is None:
            deg = d
        elif deg != d:
            return None
    return deg


def principal_degree(alg: AlgebraData, m: LoopMatrix):
    """Principal degree of a constant-entried LoopMatrix; None if mixed."""
    return principal_degree_zmat(alg, zmat_from_loop(m))


def exponent_labels_at_degree(alg: AlgebraData, k: int) -> list[ExponentLabel]:
    """Labels of Heisenberg generators of principal degree k (0, 1 or 2 of them)."""
    if k == 0:
        return []
    fam, l = alg.spec.family, alg.spec.rank
    out = []
    if fam == "A":
        if k % alg.h != 0:
            out.append(ExponentLabel(k, False))
    elif fam in ("B", "C"):
        if k % 2 == 1:
            out.append(ExponentLabel(k, False))
    elif fam == "G":
        if k % 6 in (1, 5):
            out.append(ExponentLabel(k, False))
    else:  # D
        if k % 2:
            out.append(ExponentLabel(k, False))
        if (k - (l - 1)) % alg.h == 0:
            out.append(ExponentLabel(k, True if l % 2 == 0 else False))
    # drop duplicates (odd-rank D: the Gamma class is even, never collides)
    uniq = []
    for lab in out:
        if lab not in uniq:
            uniq.append(lab)
    return uniq


def heisenberg_zmat(alg: AlgebraData, label: ExponentLabel) -> dict:
    """The normalized generator for a (possibly negative, possibly primed) label."""
    j = label.j
    if j == 0 or ExponentLabel(j, label.primed) not in exponent_labels_at_degree(alg, j):
        raise InvalidExponentError(f"{j}{'-primed' if label.primed else ''} is not "
                                   f"an exponent of {alg.label}")
    fam, l = alg.spec.family, alg.spec.rank
    lam = alg.Lambda
    if fam == "D" and (label.primed or (l % 2 == 1 and (j - (l - 1)) % alg.h == 0)):
        k = j // (l - 1)
        if k * (l - 1) != j:
            raise InvalidExponentError(f"{j} is not in the Gamma class of {alg.label}")
        if k > 0:
            out = zmat_power(alg.Gamma, k)
        else:
            out = zmat_power(zmat_zshift(alg.Gamma, -1), -k)
        return zmat_scale(out, alg.sqrt_heis)
    if fam == "A":
        if j > 0:
            return zmat_power(lam, j)
        return zmat_power(zmat_zshift(zmat_power(lam, alg.h - 1), -1), -j)
    if fam == "C":
        if j > 0:
            return zmat_power(lam, j)
        return zmat_power(zmat_zshift(zmat_power(lam, alg.h - 1), -1), -j)
    # B, D unprimed, G: sqrt2 * Lambda^k with the inverse built from z^-1
    power = alg.h - 1 if fam in ("B", "G") else 2 * l - 3
    if j > 0:
        out = zmat_power(lam, j)
    else:
        out = zmat_power(zmat_zshift(zmat_power(lam, power), -1), -j)
    return zmat_scale(out, alg.sqrt2)


def heisenberg_generator(alg: AlgebraData, label, cap=INF_CAP) -> LoopMatrix:
    if isinstance(label, int):
        label = ExponentLabel(label, False)
    return zmat_to_loop(alg.field, alg.n, alg.h, heisenberg_zmat(alg, label), cap)


def cocycle_pairing(alg: AlgebraData, a: dict, b: dict):
    """kappa * Res Tr(dA/dz * B) dz, the central 2-cocycle."""
    prod = zmat_mul(zmat_deriv_z(a, alg.field), b)
    val = zmat_trace_zcoeff(prod, -1, alg.field)
    if isinstance(val, FieldElement):
        return val * alg.field.from_rational(alg.kappa)
    return val * alg.kappa


# ---------------------------------------------------------------------------
# weight basis and homogeneous subspaces


class WeightBasis:
    def __init__(self, alg: AlgebraData, elements):
        self.alg = alg
        self.elements = elements  # list of (const matrix dict, weight int)
        self.by_weight = {}
        for mat, w in elements:
            self.by_weight.setdefault(w, []).append(mat)

    def __len__(self):
        return len(self.elements)

    def weights(self):
        return sorted(self.by_weight)


_EXPECTED_DIM = {
    "A": lambda l: l * l + 2 * l,
    "B": lambda l: l * (2 * l + 1),
    "C": lambda l: l * (2 * l + 1),
    "D": lambda l: l * (2 * l - 1),
    "G": lambda l: 14,
}


def _const_weight(alg: AlgebraData, m: dict):
    w = None
    for (r, c), coeff in m.items():
        if not coeff:
            continue
        d = alg.rho_diag[r] - alg.rho_diag[c]
        if d != int(d):
            return None
        d = int(d)
        if w is None:
            w = d
        elif w != d:
            return None
    return w


def weight_basis(alg: AlgebraData) -> WeightBasis:
    """Bracket closure of the finite Weyl generators, pruned to a basis."""
    zero = QQ0 if alg.field.degree == 1 else alg.field.zero

    # echelon bookkeeping: pivot coordinate -> reduced matrix
    pivots: dict = {}

    def reduce_add(m: dict) -> bool:
        m = dict(m)
        while m:
            key = min(m)
            piv = pivots.get(key)
            if piv is None:
                lead = m[key]
                inv = (1 / lead) if not isinstance(lead, FieldElement) else lead.inverse()
                pivots[key] = {k: v * inv for k, v in m.items()}
                return True
            f = m[key]
            for k, v in piv.items():
                acc = m.get(k, zero) - v * f
                if acc:
                    m[k] = acc
                else:
                    m.pop(k, None)
        return False

    basis = []
    frontier = []
    for i in range(1, alg.spec.rank + 1):
        for mat in (alg.E[i], alg.F[i], alg.H[i]):
            if reduce_add(mat):
                basis.append(mat)
                frontier.append(mat)
    expected = _EXPECTED_DIM[alg.spec.family](alg.spec.rank)
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > expected + 2:
            raise RuntimeError(f"{alg.label}: bracket closure failed to terminate")
        new_frontier = []
        for x in frontier:
            for y in basis[:]:
                br = _const_commutator(x, y)
                if br and reduce_add(br):
                    basis.append(br)
                    new_frontier.append(br)
        frontier = new_frontier
    if len(basis) != expected:
        raise RuntimeError(
            f"{alg.label}: closure dimension {len(basis)} != expected {expected}"
        )
    elements = []
    for mat in basis:
        w = _const_weight(alg, mat)
        if w is None:
            raise RuntimeError(f"{alg.label}: closure produced a mixed-weight element")
        elements.append((mat, w))
    elements.sort(key=lambda mw: mw[1])
    return WeightBasis(alg, elements)


def _const_commutator(a: dict, b: dict) -> dict:
    out = {}
    bb_by_row = {}
    for (r, c), v in b.items():
        bb_by_row.setdefault(r, []).append((c, v))
    aa_by_row = {}
    for (r, c), v in a.items():
        aa_by_row.setdefault(r, []).append((c, v))
    for (r, k), v1 in a.items():
        for c, v2 in bb_by_row.get(k, ()):
            key = (r, c)
            val = v1 * v2
            acc = out.get(key)
            out[key] = val if acc is None else acc + val
    for (r, k), v1 in b.items():
        for c, v2 in aa_by_row.get(k, ()):
            key = (r, c)
            val = v1 * v2
            acc = out.get(key)
            out[key] = -val if acc is None else acc - val
    return {k: v for k, v in out.items() if v}


def homogeneous_subspace_zmats(alg: AlgebraData, wb: WeightBasis, k: int) -> list[dict]:
    """Basis of the degree-k piece of the loop algebra: X z^m, weight(X)+m*h = k."""
    out = []
    for w in wb.weights():
        if (k - w) % alg.h != 0:
            continue
        m = (k - w) // alg.h
        for mat in wb.by_weight[w]:
            out.append({(m, r, c): v for (r, c), v in mat.items()})
    return out


def homogeneous_subspace(alg: AlgebraData, wb: WeightBasis, k: int) -> list[LoopMatrix]:
    return [
        zmat_to_loop(alg.field, alg.n, alg.h, zm)
        for zm in homogeneous_subspace_zmats(alg, wb, k)
    ]
