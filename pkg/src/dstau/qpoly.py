"""Dense univariate polynomials over the rationals.

Coefficient lists are little-endian tuples (c0, c1, ..., cd).  Only what the
number-field layer needs: ring arithmetic, gcd, cyclotomic polynomials and
the resultant used to build compositum fields.
"""

from __future__ import annotations

from .rational import QQ, QQ0, QQ1


def pnorm(coeffs) -> tuple:
    """Strip trailing zeros; the zero polynomial is the empty tuple."""
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def pdeg(p) -> int:
    """Degree, with deg 0 = -1 by convention."""
    return len(p) - 1


def padd(p, q):
    n = max(len(p), len(q))
    return pnorm(
        (p[i] if i < len(p) else QQ0) + (q[i] if i < len(q) else QQ0) for i in range(n)
    )


def pneg(p):
    return tuple(-c for c in p)


def psub(p, q):
    return padd(p, pneg(q))


def pscale(p, s):
    if not s:
        return ()
    return tuple(c * s for c in p)


def pmul(p, q):
    if not p or not q:
        return ()
    out = [QQ0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return pnorm(out)


def pdivmod(p, q):
    """Exact division with remainder; q must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = pdeg(q)
    lead = q[-1]
    quo = [QQ0] * max(0, len(p) - dq)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i]
        if not c:
            continue
        f = c / lead
        quo[i - dq] = f
        for j in range(dq + 1):
            rem[i - dq + j] -= f * q[j]
    return pnorm(quo), pnorm(rem)


def pmonic(p):
    if not p:
        return ()
    lead = p[-1]
    if lead == 1:
        return pnorm(p)
    return tuple(c / lead for c in p)


def pgcd(p, q):
    """Monic gcd via the Euclidean algorithm."""
    a, b = pnorm(p), pnorm(q)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def pderiv(p):
    return pnorm(tuple(p[i] * i for i in range(1, len(p))))


def peval(p, x):
    acc = QQ0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pcompose_linear(p, a, b):
    """p(a*y + b) as a polynomial in y."""
    out = ()
    lin = pnorm((b, a))
    for c in reversed(p):
        out = padd(pmul(out, lin), (c,))
    return out


def cyclotomic(h: int) -> tuple:
    """The h-th cyclotomic polynomial, by exact division of x^h - 1."""
    if h < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = [QQ0] * (h + 1)
    num[0], num[h] = QQ(-1), QQ1
    p = pnorm(num)
    for d in range(1, h):
        if h % d == 0:
            p, rem = pdivmod(p, cyclotomic(d))
            assert not rem
    return p


def sylvester_resultant(f, g):
    """Resultant of two rational polynomials via the Sylvester determinant."""
    m, n = pdeg(f), pdeg(g)
    if m < 0 or n < 0:
        return QQ0
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    size = m + n
    rows = []
    for i in range(n):
        row = [QQ0] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [QQ0] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    # fraction-free enough: plain exact Gaussian elimination
    det = QQ1
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col]), None)
        if piv is None:
            return QQ0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col]:
                factor = rows[r][col] * inv
                for c in range(col, size):
                    rows[r][c] -= factor * rows[col][c]
    return det


def resultant_shifted(f, g, c: int) -> tuple:
    """Res_y(f(y), g(x - c*y)) as a polynomial in x, by interpolation.

    Its roots are c*alpha + beta over the roots alpha of f, beta of g.
    """
    m, n = pdeg(f), pdeg(g)
    deg = m * n
    xs = []
    k = 0
    while len(xs) < deg + 1:
        xs.append(QQ(k))
        if k > 0:
            xs.append(QQ(-k))
        k += 1
    xs = xs[: deg + 1]
    ys = []
    for x0 in xs:
        gy = pcompose_linear(g, QQ(-c), x0)  # g(x0 - c*y) in y
        ys.append(sylvester_resultant(f, gy))
    return _lagrange(xs, ys)


def _lagrange(xs, ys) -> tuple:
    out = ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        num = (QQ1,)
        den = QQ1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = pmul(num, (-xj, QQ1))
            den *= xi - xj
        out = padd(out, pscale(num, yi / den))
    return out
