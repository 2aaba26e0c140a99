"""Naive brute-force counters used to validate the census on small primes.

These deliberately share nothing with the index-table algorithms beyond
mod_pow and the condition-class definitions: orders come from repeated
multiplication, solutions from double loops over all pairs.  Quadratic in p,
hence the hard prime limit.
"""

from __future__ import annotations

import math

import numpy as np

from .census import CountMatrix, Equation
from .errors import InvalidInputError
from .numtheory import is_prime, mod_pow
from .residue_tables import class_matrix, class_vector

ORACLE_PRIME_LIMIT = 2000


def _check(p: int) -> None:
    if p > ORACLE_PRIME_LIMIT:
        raise InvalidInputError(f"oracle limit is p <= {ORACLE_PRIME_LIMIT}, got {p}")
    if not is_prime(p):
        raise InvalidInputError(f"not prime: {p}")


def _combos(p: int) -> list[int]:
    """Per-residue PR/RP combo codes from naive order computation."""
    n = p - 1
    codes = [0] * p
    for x in range(1, p):
        order = 1
        value = x
        while value != 1:
            value = value * x % p
            order += 1
        codes[x] = (1 if order == n else 0) + (2 if math.gcd(x, n) == 1 else 0)
    return codes


def oracle_fp(p: int) -> CountMatrix:
    """Count g^h = h (mod p) by checking all (g, h) pairs."""
    _check(p)
    combo = _combos(p)
    tally = np.zeros((4, 4), dtype=np.int64)
    for g in range(1, p):
        for h in range(1, p):
            if mod_pow(g, h, p) == h:
                tally[combo[g], combo[h]] += 1
    total = class_matrix(tally)
    return CountMatrix(p=p, equation=Equation.FP,
                       trivial=np.zeros((4, 4), dtype=np.int64),
                       nontrivial=total.copy(), total=total)


def oracle_ha(p: int) -> CountMatrix:
    """Count h^h = a^a (mod p) by comparing all (h, a) pairs; rows index a."""
    _check(p)
    combo = _combos(p)
    self_power = [0] + [mod_pow(x, x, p) for x in range(1, p)]
    trivial = np.zeros((4, 4), dtype=np.int64)
    nontrivial = np.zeros((4, 4), dtype=np.int64)
    for h in range(1, p):
        for a in range(1, p):
            if self_power[h] == self_power[a]:
                (trivial if h == a else nontrivial)[combo[a], combo[h]] += 1
    trivial = class_matrix(trivial)
    nontrivial = class_matrix(nontrivial)
    return CountMatrix(p=p, equation=Equation.HA,
                       trivial=trivial, nontrivial=nontrivial,
                       total=trivial + nontrivial)


def oracle_tc(p: int) -> CountMatrix:
    """Count pairs (g, h) whose companion a = g^h satisfies g^a = h (mod p),
    split on a = h, with the ord row tallying solutions where gcd(a, n) = 1."""
    _check(p)
    n = p - 1
    combo = _combos(p)
    trivial = np.zeros((4, 4), dtype=np.int64)
    nontrivial = np.zeros((4, 4), dtype=np.int64)
    ord_trivial = np.zeros(4, dtype=np.int64)
    ord_nontrivial = np.zeros(4, dtype=np.int64)
    for g in range(1, p):
        for h in range(1, p):
            a = mod_pow(g, h, p)
            if mod_pow(g, a, p) != h:
                continue
            if a == h:
                trivial[combo[g], combo[h]] += 1
                if math.gcd(a, n) == 1:
                    ord_trivial[combo[h]] += 1
            else:
                nontrivial[combo[g], combo[h]] += 1
                if math.gcd(a, n) == 1:
                    ord_nontrivial[combo[h]] += 1
    trivial = class_matrix(trivial)
    nontrivial = class_matrix(nontrivial)
    return CountMatrix(p=p, equation=Equation.TC,
                       trivial=trivial, nontrivial=nontrivial,
                       total=trivial + nontrivial,
                       ord_trivial=class_vector(ord_trivial),
                       ord_nontrivial=class_vector(ord_nontrivial))
