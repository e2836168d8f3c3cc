"""Exact capacity bounds for replicated storage over graphs.

All bounds are returned as Fractions.  The complete-graph upper bound is
1/(n * sum_{i=2..n} 1/i!), the balanced-bipartite bound is
1/(n * sum_{i=1..n/2} 1/(i! 2^i)), and the general bound for simple graphs
is min(max_degree/|E|, 1/matching_number).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterError
from .graphs import matching_number
from .render import decimal_str
from .sequences import rate


# ============================================================
# closed-form bounds
# ============================================================

def upper_bound_complete(n):
    if n < 3:
        raise ParameterError(f"complete-graph bound needs n >= 3, got {n}")
    total = sum(Fraction(1, math.factorial(i)) for i in range(2, n + 1))
    return Fraction(1, n) / total


def upper_bound_balanced_bipartite(n):
    if n < 4 or n % 2:
        raise ParameterError(
            f"balanced bipartite bound needs even n >= 4, got {n}")
    total = sum(Fraction(1, math.factorial(i) * 2**i)
                for i in range(1, n // 2 + 1))
    return Fraction(1, n) / total


def general_upper_bound(g):
    if g.multigraph:
        raise ParameterError("general upper bound applies to simple graphs only")
    if not g.edges:
        raise ParameterError("graph has no files")
    by_degree = Fraction(g.max_degree(), len(g.edges))
    by_matching = Fraction(1, matching_number(g))
    return min(by_degree, by_matching)


def prior_bounds_complete(n):
    """Previously published bounds on complete graphs, for comparison columns."""
    if n < 3:
        raise ParameterError(f"prior bounds need n >= 3, got {n}")
    half = Fraction(1, 2)
    return {
        "sadeh_upper": Fraction(2, n + 1),
        "sadeh_lower": Fraction(2 ** (n - 1), (2 ** (n - 1) - 1) * n),
        "kong_lower": 6 / ((5 - half ** (n - 3)) * n),
    }


def multigraph_lower_bound(base_rate, r):
    """Rate achieved after replicating every file r times."""
    if not isinstance(r, int) or r < 1:
        raise ParameterError(f"replication factor must be >= 1, got {r}")
    return Fraction(base_rate) / (2 - Fraction(1, 2) ** (r - 1))


# ============================================================
# comparison table
# ============================================================

@dataclass(frozen=True)
class BoundReport:
    n: int
    upper: Fraction
    lower: Fraction
    sources: dict = field(default_factory=dict)

    @property
    def coefficient_upper(self):
        return self.n * self.upper

    @property
    def coefficient_lower(self):
        return self.n * self.lower

    @property
    def upper_str(self):
        return decimal_str(self.upper)

    @property
    def lower_str(self):
        return decimal_str(self.lower)


def bounds_table(n_min=3, n_max=10):
    if n_min < 3 or n_max < n_min:
        raise ParameterError(f"need 3 <= n_min <= n_max, got {n_min}..{n_max}")
    return [BoundReport(n, upper_bound_complete(n), rate(n),
                        prior_bounds_complete(n))
            for n in range(n_min, n_max + 1)]


def render_table(reports, fmt="csv"):
    if fmt == "csv":
        lines = [
            "# capacity bounds for complete storage graphs",
            "# upper: converse bound, lower: achieved scheme rate",
            "n,upper,lower,upper_coeff,lower_coeff",
        ]
        for r in reports:
            lines.append(",".join([
                str(r.n),
                decimal_str(r.upper),
                decimal_str(r.lower),
                decimal_str(r.coefficient_upper),
                decimal_str(r.coefficient_lower),
            ]))
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| n | upper | lower | n*upper | n*lower |",
            "| --- | --- | --- | --- | --- |",
        ]
        for r in reports:
            lines.append("| {} | {} | {} | {} | {} |".format(
                r.n,
                decimal_str(r.upper),
                decimal_str(r.lower),
                decimal_str(r.coefficient_upper),
                decimal_str(r.coefficient_lower),
            ))
        return "\n".join(lines) + "\n"
    raise ParameterError(f"unknown table format {fmt!r}")
