"""Dense univariate polynomials as coefficient lists, lowest degree first.

Two flavours: exact rationals (lists of Fraction) and F_p (lists of ints in
[0, p)). The zero polynomial is the empty list.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a) -> int:
    """Degree of a trimmed polynomial; -1 for zero."""
    return len(trim(a)) - 1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def scale(a, c):
    return trim([c * x for x in a])


def power(a, e: int):
    out = [Fraction(1)]
    base = list(a)
    while e:
        if e & 1:
            out = mul(out, base)
        base = mul(base, base)
        e >>= 1
    return out


def derivative(a):
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def divmod_q(a, b):
    """Euclidean division over Q."""
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = trim(a)
    return trim(q), a


def gcd_q(a, b):
    """Monic gcd over Q."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_q(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(c) / lead for c in a]


def mod_p(a, p: int):
    return trim([c % p for c in a])


def divmod_p(a, b, p: int):
    a = mod_p(a, p)
    b = mod_p(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] = (a[i + shift] - c * bc) % p
        a = trim(a)
    return trim(q), a


def gcd_p(a, b, p: int):
    """Monic gcd over F_p by the Euclidean algorithm."""
    a, b = mod_p(a, p), mod_p(b, p)
    while b:
        a, b = b, divmod_p(a, b, p)[1]
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def primitive_integer_pair(num, den):
    """Scale two rational polynomials by one rational so all coefficients are
    coprime integers and the leading coefficient of ``den`` is positive."""
    coeffs = [Fraction(c) for c in list(num) + list(den)]
    lcm_den = 1
    for c in coeffs:
        lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
    ints_num = [int(Fraction(c) * lcm_den) for c in num]
    ints_den = [int(Fraction(c) * lcm_den) for c in den]
    g = 0
    for c in ints_num + ints_den:
        g = gcd(g, c)
    g = g or 1
    lead = trim(ints_den)
    sign = -1 if lead and lead[-1] < 0 else 1
    return [sign * c // g for c in ints_num], [sign * c // g for c in ints_den]


def homogeneous_substitute(a, d: int, m):
    """Coefficients of sum a_i X^i Y^(d-i) with (X, Y) = (m00 u + m01, m10 u + m11),
    returned as a polynomial in u. ``m`` is ((m00, m01), (m10, m11))."""
    (m00, m01), (m10, m11) = m
    X = trim([m01, m00])
    Y = trim([m11, m10])
    out = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        out = add(out, scale(mul(power(X, i), power(Y, d - i)), c))
    return out


def binomial_shift(a, t):
    """Coefficients of a(u + t)."""
    out = [0] * len(a)
    for i, c in enumerate(a):
        for k in range(i + 1):
            out[k] += c * comb(i, k) * t ** (i - k)
    return trim(out)
