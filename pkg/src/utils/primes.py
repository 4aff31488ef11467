"""Prime helpers backed by sympy."""

from functools import lru_cache
from typing import FrozenSet, Iterable

from sympy import isprime, primefactors


@lru_cache(maxsize=4096)
def prime_divisors(n: int) -> FrozenSet[int]:
    """Primes dividing n (empty for n = 1)."""
    if n < 1:
        raise ValueError(f"prime divisors need a positive integer, got {n}")
    return frozenset(int(p) for p in primefactors(n))


def all_prime(values: Iterable[int]) -> bool:
    return all(isprime(int(v)) for v in values)


def is_pi_number(n: int, primes: FrozenSet[int]) -> bool:
    """True when every prime divisor of n lies in primes (n = 1 always qualifies)."""
    return prime_divisors(n) <= primes
