import logging
from collections import Counter
from functools import lru_cache

import sympy
from sympy.ntheory import pollard_rho

import opt
from orbicover.errors import FactorBudgetExceeded

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4)
def _small_primes(bound:int) -> tuple:
    return tuple(sympy.primerange(2, bound + 1))


def factorize(n:int, seed:int=0, trial_bound:int=None, step_budget:int=None) -> dict:
    """Prime factorization {prime: exponent} of n >= 1.

    Trial division up to `trial_bound`, then seeded Pollard rho on whatever cofactor is left.
    Raises FactorBudgetExceeded when rho cannot split a composite within `step_budget` steps.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    trial_bound = opt.trial_division_bound if trial_bound is None else trial_bound
    step_budget = opt.rho_step_budget if step_budget is None else step_budget

    factors = Counter()
    remaining = n
    for prime in _small_primes(trial_bound):
        if prime * prime > remaining:
            break
        while remaining % prime == 0:
            factors[prime] += 1
            remaining //= prime
    if remaining == 1:
        return dict(sorted(factors.items()))

    stack = [remaining]
    attempt = 0
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m <= trial_bound or sympy.isprime(m):
            # after trial division every cofactor below the bound is prime
            factors[m] += 1
            continue
        power = sympy.perfect_power(m)
        if power:
            base, exponent = power
            stack.extend([base] * exponent)
            continue
        logger.debug("pollard rho on %d (seed %d)", m, seed + attempt)
        divisor = pollard_rho(m, seed=seed + attempt, retries=opt.rho_retries, max_steps=step_budget)
        attempt += 1
        if divisor is None:
            raise FactorBudgetExceeded(m)
        stack.extend([divisor, m // divisor])
    return dict(sorted(factors.items()))


def prime_divisors(n:int, seed:int=0) -> list:
    return list(factorize(n, seed=seed))


def valuation(n:int, prime:int) -> int:
    e = 0
    while n % prime == 0:
        n //= prime
        e += 1
    return e


def multiplicative_order(a:int, modulus:int) -> int:
    return int(sympy.n_order(a, modulus))
