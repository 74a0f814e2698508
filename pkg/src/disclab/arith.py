"""Small exact-integer helpers: gcd/inverse, valuations, prime-power ceilings."""

from math import gcd, isqrt

from .errors import PreconditionViolated


def egcd(a, b):
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b) and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, (a, b) = a // b, (b, a % b)
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def modinv(a, m):
    """Inverse of a modulo m, as a residue in [0, m)."""
    if m < 1:
        raise PreconditionViolated(f"modulus must be positive, got {m}")
    if m == 1:
        return 0
    g, x, _ = egcd(a % m, m)
    if g != 1:
        raise PreconditionViolated(f"{a} is not invertible mod {m}")
    return x % m


def valuation(n, p):
    """Split n = p**e * rest with p not dividing rest; return (e, rest)."""
    if n == 0:
        raise PreconditionViolated("valuation of zero is undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def is_power_of(n, p):
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def prime_power_ceiling(p, n):
    """Smallest power of p that is >= n; 1 when n == 1."""
    if n < 1:
        raise PreconditionViolated(f"n must be >= 1, got {n}")
    x = 1
    while x < n:
        x *= p
    return x


def factorize(n):
    """Prime factorisation of |n| by trial division, as {prime: exponent}."""
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


__all__ = [
    "egcd", "modinv", "valuation", "is_power_of", "prime_power_ceiling",
    "factorize", "divisors", "gcd",
]
