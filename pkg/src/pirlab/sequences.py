"""Recursion ledger behind the complete-graph scheme construction.

Three interlocking sequences drive the construction on n servers:

  x_k  summations of length k created per (desired server, helper set) pair,
  y_k  portion of the previous step's 2-sided residual still unconsumed,
  z_k  portion of the previous step's 1-sided residual still unconsumed,

with a regime change at k0 = floor(n/2) + 2 where the residual supply
becomes the binding constraint.  Everything is exact rational arithmetic;
the integer scale M clears all denominators so that the builder can emit
whole numbers of summations.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalConsistencyError, ParameterError

BUILDER_CAP = 8  # explicit scheme emission is supported up to n = 8


def _check_n(n):
    if not isinstance(n, int) or n < 3:
        raise ParameterError(f"construction needs an integer n >= 3, got {n}")


def dfact(m):
    """Double factorial over odd integers; empty products are 1."""
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


# ============================================================
# the recursions
# ============================================================

@functools.lru_cache(maxsize=None)
def _raw_sequences(n):
    _check_n(n)
    k0 = n // 2 + 2
    x = {1: Fraction(1)}
    y = {2: Fraction(n - 3, 2)}
    z = {1: Fraction(1)}
    for k in range(2, n):
        if k < k0:
            x[k] = Fraction(n - k + 1, 2) * x[k - 1] + z[k - 1]
            if k <= n - 2:
                z[k] = x[k] - Fraction(k - 1, 2) * x[k - 1]
        else:
            x[k] = Fraction(k - 1, 2 * k - n) * (x[k - 1] + z[k - 1])
            if k <= n - 2:
                z[k] = Fraction(0)
        if k >= 3:
            y[k] = x[k] - 2 * x[k - 1] + Fraction(k - 2, n - k) * y[k - 1]
    return x, y, z, k0


def closed_form_x(n, k):
    """Direct evaluation of x_k (independent of the recursion)."""
    _check_n(n)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must be in 1..{n - 1}, got {k}")
    k0 = n // 2 + 2

    def falling(j):
        # (n+3)! / (2^j (n-j+3)!) as an exact fraction
        num = 1
        for i in range(n - j + 4, n + 4):
            num *= i
        return Fraction(num, 2**j)

    if k < k0:
        return sum(falling(j) * (-1) ** (k - j - 1) * math.comb(k - 1, j)
                   for j in range(k))
    prefactor = Fraction(1)
    for i in range(k0, k + 1):
        prefactor *= Fraction(i - 1, 2 * i - n)
    body = sum(falling(j) * (-1) ** (k0 - j - 2)
               * Fraction(k0 - j + 2, 2) * math.comb(k0 - 2, j)
               for j in range(k0 - 1))
    return prefactor * body


# ============================================================
# per-step application ledger (normalized to M = 1)
# ============================================================

@dataclass(frozen=True)
class StepCounts:
    k: int
    case: int
    alpha_per: Fraction
    alpha_realizations: int
    beta_per: Fraction
    beta_realizations: int
    beta_per_iT: Fraction
    gamma_per: Fraction
    gamma_realizations: int
    zeta_per: Fraction
    zeta_realizations: int
    leftover_per_type: Fraction
    leftover_types: int


@functools.lru_cache(maxsize=None)
def step_ledger(n):
    """Application counts per realization for every step k = 2..n-1."""
    x, y, z, k0 = _raw_sequences(n)
    zero = Fraction(0)
    out = []
    for k in range(2, n):
        case = 1 if k < k0 else 2
        pairs = 2 * math.comb(n - 2, k - 1)  # (desired server, helper set)

        alpha_per = z[k - 1]
        alpha_realizations = pairs

        if k >= 3:
            if k % 2:
                beta_realizations = pairs * dfact(k - 2)
                beta_total = (Fraction(n - 2) * math.comb(n - 3, k - 3)
                              * y[k - 1] / (k - 1))
            else:
                beta_realizations = pairs * (k - 1) * dfact(k - 3)
                beta_total = (Fraction(n - 2) * math.comb(n - 3, k - 3)
                              * y[k - 1] / (k - 2))
            beta_per = beta_total / beta_realizations
            beta_per_iT = beta_total / pairs
        else:
            beta_per = beta_per_iT = zero
            beta_realizations = 0

        gamma_per = x[k - 1] - beta_per_iT
        if gamma_per < 0:
            raise InternalConsistencyError(
                f"negative gamma supply at n={n} k={k}")
        gamma_realizations = pairs

        if k <= n - 2:
            zeta_realizations = pairs * (n - 1 - k)
            if case == 1:
                zeta_per = x[k - 1] / 2
            else:
                zeta_per = (x[k - 1] + z[k - 1]) / (2 * k - n)
            leftover_per_type = x[k - 1] - 2 * zeta_per
            leftover_types = (n - 2) * math.comb(n - 3, k - 1)
            if leftover_per_type < 0:
                raise InternalConsistencyError(
                    f"over-consumed side types at n={n} k={k}")
        else:
            zeta_per = leftover_per_type = zero
            zeta_realizations = leftover_types = 0

        out.append(StepCounts(
            k=k, case=case,
            alpha_per=alpha_per, alpha_realizations=alpha_realizations,
            beta_per=beta_per, beta_realizations=beta_realizations,
            beta_per_iT=beta_per_iT,
            gamma_per=gamma_per, gamma_realizations=gamma_realizations,
            zeta_per=zeta_per, zeta_realizations=zeta_realizations,
            leftover_per_type=leftover_per_type,
            leftover_types=leftover_types,
        ))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def scaling_M(n):
    """Smallest integer scale making every ledger quantity integral."""
    x, y, z, _ = _raw_sequences(n)
    denominators = [v.denominator
                    for v in (*x.values(), *y.values(), *z.values())]
    for st in step_ledger(n):
        denominators += [st.alpha_per.denominator, st.beta_per.denominator,
                         st.gamma_per.denominator, st.zeta_per.denominator,
                         st.leftover_per_type.denominator]
    return math.lcm(*denominators)


# ============================================================
# assembled ledger and derived quantities
# ============================================================

@dataclass(frozen=True)
class SequenceLedger:
    n: int
    x: dict
    y: dict
    z: dict
    k0: int
    m_scale: int
    subpacketization: int


@functools.lru_cache(maxsize=None)
def build_sequences(n):
    x, y, z, k0 = _raw_sequences(n)
    m = scaling_M(n)
    total = 2 * sum(math.comb(n - 2, k - 1) * x[k] for k in range(1, n)) * m
    if total.denominator != 1:
        raise InternalConsistencyError(f"non-integer subpacketization at n={n}")
    return SequenceLedger(n=n, x=dict(x), y=dict(y), z=dict(z), k0=k0,
                          m_scale=m, subpacketization=int(total))


def subpacketization(n):
    """Number of subfiles each file is split into."""
    return build_sequences(n).subpacketization


def answer_count(n):
    """Summations downloaded from each server."""
    x, _, _, _ = _raw_sequences(n)
    m = scaling_M(n)
    total = sum(math.comb(n - 1, k) * x[k] for k in range(1, n)) * m
    if total.denominator != 1:
        raise InternalConsistencyError(f"non-integer answer count at n={n}")
    return int(total)


def rate(n):
    """Exact rate of the construction; the scale M cancels."""
    x, _, _, _ = _raw_sequences(n)
    created = 2 * sum(math.comb(n - 2, k - 1) * x[k] for k in range(1, n))
    downloaded = n * sum(math.comb(n - 1, k) * x[k] for k in range(1, n))
    return created / downloaded
