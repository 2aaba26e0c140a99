"""Stateless integer primitives: primality, factorization, orders, congruences.

Everything here works on plain Python ints, is deterministic, and is safe to
call concurrently.  Modular exponentiation delegates to the built-in
three-argument ``pow`` (square-and-multiply in C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError

# Deterministic Miller-Rabin witnesses: correct for all n < 3.3 * 10^24,
# far beyond the 2^63 input bound enforced below.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_DIVISION_LIMIT = 1 << 32
INT_LIMIT = 1 << 63


@dataclass(frozen=True)
class Factored:
    """A factorization n = prod q^alpha with q strictly increasing.

    n = 1 carries an empty factor list.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(alpha == 1 for _, alpha in self.factors)


@dataclass(frozen=True)
class CongruenceSolution:
    """Solution set of a*u = b (mod n): {base + k*step : 0 <= k < count}.

    count = 0 means no solution; otherwise base is the smallest nonnegative
    solution (0 <= base < step) and step * count equals the modulus.
    """

    base: int
    step: int
    count: int

    def values(self) -> list[int]:
        return [self.base + k * self.step for k in range(self.count)]


@dataclass(frozen=True)
class PrimeContext:
    """A prime p together with derived data about n = p - 1."""

    p: int
    n: int
    factors: Factored
    divisors: tuple[int, ...]
    phi: int


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2^63.

    Trial division below 2^32, a fixed Miller-Rabin witness set above; no
    probabilistic answers in range.
    """
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    if n < _TRIAL_DIVISION_LIMIT:
        d = 3
        while d * d <= n:
            if n % d == 0:
                return False
            d += 2
        return True
    return _miller_rabin(n)


def _miller_rabin(n: int) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_primes(start: int, k: int) -> list[int]:
    """The k smallest primes >= start, ascending."""
    if start < 2 or k < 1:
        raise InvalidInputError(f"need start >= 2 and k >= 1, got ({start}, {k})")
    found: list[int] = []
    candidate = start
    while len(found) < k:
        if candidate >= INT_LIMIT:
            raise InvalidInputError("prime search left the 63-bit input range")
        if is_prime(candidate):
            found.append(candidate)
        candidate += 1
    return found


def factorize(n: int) -> Factored:
    """Prime factorization by trial division.

    The remaining cofactor is primality-tested after each extracted factor,
    so large prime cofactors are appended without scanning up to their root.
    """
    if n < 1 or n >= INT_LIMIT:
        raise InvalidInputError(f"factorize needs 1 <= n < 2^63, got {n}")
    m = n
    factors: list[tuple[int, int]] = []
    for q in (2, 3):
        if m % q == 0:
            alpha = 0
            while m % q == 0:
                m //= q
                alpha += 1
            factors.append((q, alpha))
    d = 5
    while m > 1:
        if is_prime(m):
            factors.append((m, 1))
            break
        while d * d <= m and m % d != 0:
            d += 2 if d % 6 == 5 else 4  # skip multiples of 2 and 3
        alpha = 0
        while m % d == 0:
            m //= d
            alpha += 1
        factors.append((d, alpha))
    return Factored(n, tuple(factors))


def euler_phi(f: Factored) -> int:
    """Euler's totient from a factorization: prod q^(alpha-1) * (q-1)."""
    value = 1
    for q, alpha in f:
        value *= q ** (alpha - 1) * (q - 1)
    return value


def divisors(f: Factored) -> list[int]:
    """All divisors of f.n, ascending."""
    ds = [1]
    for q, alpha in f:
        ds = [d * q**beta for d in ds for beta in range(alpha + 1)]
    return sorted(ds)


def divisors_with_phi(f: Factored) -> list[tuple[int, int]]:
    """(d, phi(d)) for every divisor d of f.n, ascending by d.

    Avoids refactorizing each divisor; used wherever a divisor sum needs
    totients of all divisors.
    """
    pairs = [(1, 1)]
    for q, alpha in f:
        ext = []
        for d, ph in pairs:
            ext.append((d, ph))
            power = 1
            for beta in range(1, alpha + 1):
                power *= q
                ext.append((d * power, ph * (power - power // q)))
        pairs = ext
    return sorted(pairs)


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base^exponent mod modulus for exponent >= 0, modulus >= 2."""
    return pow(base, exponent, modulus)


def solve_linear_congruence(a: int, b: int, n: int) -> CongruenceSolution:
    """Describe all u in [0, n) with a*u = b (mod n).

    There are gcd(a, n) solutions when gcd(a, n) divides b, none otherwise;
    no-solution is count = 0, not an error.
    """
    if n < 1:
        raise InvalidInputError(f"modulus must be positive, got {n}")
    a %= n
    b %= n
    g = math.gcd(a, n)
    if b % g != 0:
        return CongruenceSolution(base=0, step=n, count=0)
    step = n // g
    base = (b // g) * pow((a // g) % step, -1, step) % step if step > 1 else 0
    return CongruenceSolution(base=base, step=step, count=g)


def multiplicative_order(x: int, p: int, f: Factored) -> int:
    """Least t >= 1 with x^t = 1 (mod p); f is the factorization of p - 1.

    Starts at p - 1 and divides out prime factors while the power stays 1.
    """
    t = p - 1
    for q, _ in f:
        while t % q == 0 and pow(x, t // q, p) == 1:
            t //= q
    return t


def smallest_primitive_root(p: int, f: Factored) -> int:
    """Least g >= 1 of multiplicative order p - 1 modulo p; f factors p - 1."""
    n = p - 1
    primes = f.primes
    for g in range(1, p):
        if all(pow(g, n // q, p) != 1 for q in primes):
            return g
    raise InvalidInputError(f"no primitive root found; {p} is not prime")


def prime_context(p: int) -> PrimeContext:
    """Bundle a prime with the factorization, divisors, and totient of p - 1."""
    if not is_prime(p):
        raise InvalidInputError(f"not prime: {p}")
    f = factorize(p - 1) if p > 2 else Factored(1, ())
    return PrimeContext(p=p, n=p - 1, factors=f, divisors=tuple(divisors(f)), phi=euler_phi(f))
