"""Arithmetic over the prime field GF(p), p > 3.

Scalars are plain Python ints in [0, p).  Binomial coefficients are reduced
with Lucas' theorem so that multi-index coefficients of divided-power
products stay exact for arbitrarily large entries.
"""

from __future__ import annotations


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def validate_prime(p: int) -> int:
    """Check that p is a prime greater than 3 and return it."""
    if not isinstance(p, int) or not is_prime(p) or p <= 3:
        raise ValueError(f"characteristic must be a prime > 3, got {p!r}")
    return p


def fadd(a: int, b: int, p: int) -> int:
    return (a + b) % p


def fsub(a: int, b: int, p: int) -> int:
    return (a - b) % p


def fmul(a: int, b: int, p: int) -> int:
    return (a * b) % p


def fneg(a: int, p: int) -> int:
    return (-a) % p


def finv(a: int, p: int) -> int:
    """Multiplicative inverse via Fermat's little theorem."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


_OPS = {
    "add": fadd,
    "sub": fsub,
    "mul": fmul,
    "neg": lambda a, b, p: fneg(a, p),
    "inv": lambda a, b, p: finv(a, p),
}


def field_arith(op: str, a: int, b: int | None = None, *, p: int) -> int:
    """Dispatch one field operation by name.

    `neg` and `inv` are unary; the rest take two operands.
    """
    if op not in _OPS:
        raise ValueError(f"unknown field op {op!r}")
    if op in ("neg", "inv"):
        if b is not None:
            raise ValueError(f"{op} is unary")
    elif b is None:
        raise ValueError(f"{op} needs two operands")
    return _OPS[op](a % p, None if b is None else b % p, p)


def binom(a: int, b: int, p: int) -> int:
    """C(a, b) mod p by Lucas' theorem.

    Zero when b < 0 or b > a.  Works digit by digit in base p, so huge
    arguments cost O(log_p a).
    """
    if b < 0 or b > a:
        return 0
    r = 1
    while a or b:
        ad, a = a % p, a // p
        bd, b = b % p, b // p
        if bd > ad:
            return 0
        num = den = 1
        for k in range(bd):
            num = num * (ad - k) % p
            den = den * (k + 1) % p
        r = r * num * pow(den, p - 2, p) % p
    return r


def multi_binom(alpha: tuple[int, ...], beta: tuple[int, ...], p: int) -> int:
    """Product over components of C(alpha_i + beta_i, alpha_i) mod p.

    This is the structure constant of the divided-power product
    x^(alpha) * x^(beta).
    """
    if len(alpha) != len(beta):
        raise ValueError(
            f"multi-index length mismatch: {len(alpha)} vs {len(beta)}"
        )
    r = 1
    for a, b in zip(alpha, beta):
        r = r * binom(a + b, a, p) % p
        if r == 0:
            return 0
    return r
