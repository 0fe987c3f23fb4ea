"""Elementary arithmetic functions and level data for Gamma_0(N)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def sigma(k: int, n: int) -> int:
    """Sum of k-th powers of the divisors of n."""
    return sum(d**k for d in divisors(n))


@lru_cache(maxsize=64)
def sigma_table(k: int, length: int) -> tuple[int, ...]:
    """``(0, sigma_k(1), ..., sigma_k(length - 1))`` by a divisor sieve."""
    table = [0] * length
    for d in range(1, length):
        dk = d**k
        for m in range(d, length, d):
            table[m] += dk
    return tuple(table)


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def legendre7(d: int) -> int:
    """Legendre symbol (d/7)."""
    r = d % 7
    if r == 0:
        return 0
    return 1 if r in (1, 2, 4) else -1


@dataclass(frozen=True)
class LevelData:
    """Index ``mu``, weight ``k`` and vanishing order ``h`` of Delta_N at level N.

    ``k`` and ``h`` are exact rationals; use :attr:`admissible` to test the
    integrality conditions instead of assuming them.
    """

    N: int
    mu: int
    k: Fraction
    h: Fraction

    @property
    def admissible(self) -> bool:
        return self.k.denominator == 1 and self.k.numerator % 2 == 0 and self.h.denominator == 1


def gamma0_index(N: int) -> int:
    """[SL_2(Z) : Gamma_0(N)] = N * prod_{p | N} (1 + 1/p)."""
    fac = factorize(N)
    return prod(p ** (e - 1) * (p + 1) for p, e in fac.items())


def level_data(N: int) -> LevelData:
    mu = gamma0_index(N)
    return LevelData(
        N=N,
        mu=mu,
        k=Fraction(12 * sigma(0, N), mu),
        h=Fraction(sigma(1, N), mu),
    )


def admissible_levels(bound: int) -> list[LevelData]:
    """All N <= bound where k_N is an even integer and h_N is an integer."""
    out = []
    for N in range(1, bound + 1):
        data = level_data(N)
        if data.admissible:
            out.append(data)
    return out


ADMISSIBLE = (1, 2, 3, 5, 6, 11, 14, 15)
