"""Exact arithmetic in small algebraic number fields Q[x]/(m(x)).

Elements carry coordinates in the power basis 1, x, ..., x^(d-1) of the
monic minimal polynomial.  The only constructions the rest of the library
needs are Q itself, real quadratic fields like Q(sqrt2), cyclotomic fields
Q(omega_h) and pairwise composita of those, built through a primitive
element found with resultants (no factor towers, no LLL).
"""

from __future__ import annotations

from math import isqrt

from . import qpoly
from .rational import QQ, QQ0, QQ1, qq_parse, qq_str, squarefree_part

MAX_COMPOSITUM_DEGREE = 64


class InvalidFieldError(ValueError):
    pass


class FieldMismatchError(ValueError):
    pass


class NonRationalError(ValueError):
    """Raised when projecting an element with nonzero higher coordinates."""

    def __init__(self, coords):
        super().__init__(f"element is not rational; coordinates {coords}")
        self.coords = coords


class CompositumError(ValueError):
    pass


class NumberField:
    """Q[x]/(min_poly) with a human-readable label.

    Multiplication reduces modulo min_poly through precomputed rows for
    x^d .. x^(2d-2); inversion is the extended Euclidean algorithm.
    """

    __slots__ = ("min_poly", "label", "degree", "_red_rows", "zero", "one", "_gen")

    def __init__(self, min_poly, label: str):
        min_poly = qpoly.pnorm(min_poly)
        if qpoly.pdeg(min_poly) < 1:
            raise InvalidFieldError("min_poly must have degree >= 1")
        if min_poly[-1] != 1:
            raise InvalidFieldError("min_poly must be monic")
        self.min_poly = min_poly
        self.label = label
        d = qpoly.pdeg(min_poly)
        self.degree = d
        # x^k mod min_poly for k = d .. 2d-2, as coordinate tuples
        rows = []
        cur = tuple(-c for c in min_poly[:-1])  # x^d
        for _ in range(d - 1):
            rows.append(cur)
            shifted = (QQ0,) + cur
            head = shifted[:d]
            overflow = shifted[d] if len(shifted) > d else QQ0
            if overflow:
                cur = tuple(h + overflow * r for h, r in zip(head, rows[0]))
            else:
                cur = head
        self._red_rows = tuple(rows)
        self.zero = FieldElement(self, (QQ0,) * d)
        self.one = FieldElement(self, (QQ1,) + (QQ0,) * (d - 1))
        if d > 1:
            self._gen = FieldElement(self, (QQ0, QQ1) + (QQ0,) * (d - 2))
        else:
            self._gen = self.zero

    def __repr__(self):
        return f"NumberField({self.label!r}, degree={self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.min_poly == other.min_poly
            and self.label == other.label
        )

    def __hash__(self):
        return hash((self.min_poly, self.label))

    def gen(self) -> FieldElement:
        """The class of x (zero in the degree-1 case)."""
        return self._gen

    def element(self, coords) -> FieldElement:
        coords = tuple(QQ(c) for c in coords)
        if len(coords) != self.degree:
            raise InvalidFieldError(
                f"expected {self.degree} coordinates, got {len(coords)}"
            )
        return FieldElement(self, coords)

    def from_rational(self, value) -> FieldElement:
        return FieldElement(self, (QQ(value),) + (QQ0,) * (self.degree - 1))

    def from_poly(self, coeffs) -> FieldElement:
        """Element from an arbitrary-length coefficient list, reduced mod min_poly."""
        _, rem = qpoly.pdivmod(qpoly.pnorm(coeffs), self.min_poly)
        coords = list(rem) + [QQ0] * (self.degree - len(rem))
        return FieldElement(self, tuple(coords))


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def __repr__(self):
        return f"FieldElement({self.field.label}, {[qq_str(c) for c in self.coords]})"

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if self.field != other.field:
                return False
            return self.coords == other.coords
        if isinstance(other, (int, type(QQ0))):
            return self == self.field.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.label, self.coords))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"mixed fields {self.field.label} and {other.field.label}"
                )
            return other
        if isinstance(other, (int, type(QQ0))):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(
            self.field, tuple(a - b for a, b in zip(self.coords, o.coords))
        )

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.coords[0] * o.coords[0],))
        a, b = self.coords, o.coords
        if d == 2:
            a0, a1 = a
            b0, b1 = b
            hi = a1 * b1
            if hi:
                r0, r1 = self.field._red_rows[0]
                return FieldElement(
                    self.field,
                    (a0 * b0 + hi * r0, a0 * b1 + a1 * b0 + hi * r1),
                )
            return FieldElement(self.field, (a0 * b0, a0 * b1 + a1 * b0))
        conv = [QQ0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
        out = list(conv[:d])
        rows = self.field._red_rows
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                row = rows[k - d]
                for i in range(d):
                    if row[i]:
                        out[i] += ck * row[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid in Q[x]: s*self + t*min_poly = gcd (a unit here)
        a = qpoly.pnorm(self.coords)
        b = self.field.min_poly
        s0, s1 = (QQ1,), ()
        while b:
            q, r = qpoly.pdivmod(a, b)
            a, b = b, r
            s0, s1 = s1, qpoly.psub(s0, qpoly.pmul(q, s1))
        if qpoly.pdeg(a) != 0:
            raise ZeroDivisionError(
                f"element is a zero divisor modulo {self.field.label}"
            )
        inv_lead = 1 / a[0]
        return self.field.from_poly(qpoly.pscale(s0, inv_lead))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def project_rational(self):
        """The constant coordinate, if all higher coordinates vanish."""
        if any(self.coords[1:]):
            raise NonRationalError(self.coords)
        return self.coords[0]

    def to_json(self):
        return {"field": self.field.label, "coords": [qq_str(c) for c in self.coords]}


def field_make(min_poly, label: str) -> NumberField:
    """Public constructor; min_poly monic over Q, degree >= 1."""
    return NumberField(tuple(QQ(c) for c in min_poly), label)


def fe_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def fe_project_rational(a):
    if isinstance(a, FieldElement):
        return a.project_rational()
    return QQ(a)  # raw rationals pass through


def element_from_json(field: NumberField, obj) -> FieldElement:
    if obj["field"] != field.label:
        raise FieldMismatchError(f"element of {obj['field']} in field {field.label}")
    return field.element([qq_parse(c) for c in obj["coords"]])


# ---------------------------------------------------------------------------
# standard fields


def rational_field() -> NumberField:
    return NumberField((QQ0, QQ1), "Q")


def quadratic_field(m: int) -> NumberField:
    """Q(sqrt(m)) for a squarefree integer m != 0, 1."""
    if m in (0, 1) or squarefree_part(abs(m)) != abs(m):
        raise InvalidFieldError(f"{m} is not a valid squarefree radicand")
    return NumberField((QQ(-m), QQ0, QQ1), f"Q(sqrt{m})")


def cyclotomic_field(h: int) -> NumberField:
    """Q(omega_h) with omega_h a primitive h-th root of unity."""
    return NumberField(qpoly.cyclotomic(h), f"Q(omega_{h})")


# ---------------------------------------------------------------------------
# composita


def _root_in_field(field: NumberField, g) -> FieldElement | None:
    """A root of g in `field`, for deg(g) <= 2 over Q; None when there is none."""
    g = qpoly.pnorm(g)
    if qpoly.pdeg(g) == 1:
        return field.from_rational(-g[0] / g[1])
    if qpoly.pdeg(g) != 2:
        return None
    # y^2 + py + q: root iff the discriminant is a square in the field
    p, q = g[1] / g[2], g[0] / g[2]
    disc = p * p - 4 * q
    root = _rational_square_root_in_field(field, disc)
    if root is None:
        return None
    return (root - field.from_rational(p)) * field.from_rational(QQ(1, 2))


def _rational_square_root_in_field(field: NumberField, disc) -> FieldElement | None:
    """sqrt of a rational inside `field`, or None.

    Writes disc = (k/den)^2 * s with s squarefree and looks for sqrt(s).
    Only the power bases actually in use are searched: Q itself and pure
    quadratics Q[x]/(x^2 - r0); richer fields fall through to None, which
    is safe for the composita built here (all real, adjoined roots new).
    """
    if disc == 0:
        return field.zero
    num, den = disc.numerator, disc.denominator
    s = squarefree_part(abs(num * den))
    if num < 0:
        s = -s
    k = isqrt(abs(num * den) // abs(s))
    factor = field.from_rational(QQ(k, den))
    if s == 1:
        return factor
    if field.degree == 2:
        r0, r1 = field._red_rows[0]  # x^2 = r0 + r1 x
        if r1 == 0 and r0 == s:
            return field.gen() * factor
    return None


def adjoin_root(field: NumberField, g, label: str):
    """Extend `field` by a root of the rational polynomial g.

    Returns (new_field, embed, root) where embed maps old elements into the
    new field and root is the adjoined root.  When g already has a root in
    `field` the field is returned unchanged.
    """
    g = qpoly.pnorm(tuple(QQ(c) for c in g))
    if qpoly.pdeg(g) < 1:
        raise InvalidFieldError("cannot adjoin a root of a constant")
    existing = _root_in_field(field, g)
    if existing is not None:
        return field, (lambda e: e), existing
    if field.degree == 1:
        new = NumberField(qpoly.pmonic(g), label)

        def embed_q(e, _new=new):
            return _new.from_rational(e.coords[0])

        return new, embed_q, new.gen()
    if field.degree * qpoly.pdeg(g) > MAX_COMPOSITUM_DEGREE:
        raise CompositumError(
            f"compositum degree {field.degree * qpoly.pdeg(g)} exceeds "
            f"{MAX_COMPOSITUM_DEGREE}"
        )
    f = field.min_poly
    for c in range(1, 41):
        p = qpoly.pmonic(qpoly.resultant_shifted(f, g, c))
        if not p or qpoly.pdeg(qpoly.pgcd(p, qpoly.pderiv(p))) != 0:
            continue  # not squarefree: collision of conjugate sums
        try:
            new = NumberField(p, label)
            alpha = _common_root(new, f, g, c)
        except ZeroDivisionError:
            continue  # p reducible: some leading coefficient was a zero divisor
        if alpha is None:
            continue
        beta = new.gen() - new.from_rational(c) * alpha
        # sanity: both defining relations hold in the new field
        if _eval_poly_in_field(f, alpha) or _eval_poly_in_field(g, beta):
            continue
        alpha_powers = [new.one]
        for _ in range(field.degree - 1):
            alpha_powers.append(alpha_powers[-1] * alpha)

        def embed(e, _powers=tuple(alpha_powers), _new=new):
            acc = _new.zero
            for coord, pw in zip(e.coords, _powers):
                if coord:
                    acc = acc + pw * _new.from_rational(coord)
            return acc

        return new, embed, beta
    raise CompositumError(
        f"no primitive element found joining {field.label} with the given polynomial"
    )


def _common_root(new: NumberField, f, g, c: int):
    """gcd over `new` of f(y) and g(theta - c y); returns its root when linear."""
    fy = [new.from_rational(co) for co in f]
    theta = new.gen()
    minus_c = new.from_rational(-c)
    gy = [new.zero]
    lin = [theta, minus_c]
    for co in reversed(g):
        gy = _fpoly_add(_fpoly_mul(gy, lin, new), [new.from_rational(co)], new)
    a, b = _fpoly_norm(fy), _fpoly_norm(gy)
    while b:
        a, b = b, _fpoly_rem(a, b, new)
    if len(a) != 2:
        return None
    return -(a[0] / a[1])


def _fpoly_norm(p):
    while p and not p[-1]:
        p = p[:-1]
    return list(p)


def _fpoly_add(p, q, field):
    n = max(len(p), len(q))
    return _fpoly_norm(
        [
            (p[i] if i < len(p) else field.zero) + (q[i] if i < len(q) else field.zero)
            for i in range(n)
        ]
    )


def _fpoly_mul(p, q, field):
    if not p or not q:
        return []
    out = [field.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return _fpoly_norm(out)


def _fpoly_rem(p, q, field):
    rem = list(p)
    dq = len(q) - 1
    inv_lead = q[-1].inverse()
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i]
        if not c:
            continue
        fct = c * inv_lead
        for j in range(dq + 1):
            rem[i - dq + j] = rem[i - dq + j] - fct * q[j]
    return _fpoly_norm(rem)


def _eval_poly_in_field(p, x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(p):
        acc = acc * x + x.field.from_rational(c)
    return acc
