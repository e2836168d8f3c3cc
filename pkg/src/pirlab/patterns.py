"""Recovery-pattern extraction and the independence conditions.

A scheme's query rows decompose into connected components: two rows are
linked when they share a non-desired subfile symbol.  A component is a
recovery pattern when XOR-ing all of its rows cancels everything except a
single desired subfile, and no server contributes more than one row.
Components that never touch the desired file are side information.

The independence conditions checked here:

  1. a summation repeats a file,
  2. a subfile symbol repeats at one server, or a server is asked for a
     file it does not store,
  3. the desired subfiles across all rows are not exactly 1..L,
  4. a component is neither a valid pattern nor pure side information.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass

from .scheme import RecoveryPattern


@dataclass(frozen=True)
class Violation:
    condition: int
    detail: str


@dataclass(frozen=True)
class IndependenceReport:
    ok: bool
    violations: tuple


@dataclass(frozen=True)
class Extraction:
    patterns: tuple
    side_info: tuple


class IndependenceError(RuntimeError):
    """Raised when extraction is attempted on a dependent scheme."""

    def __init__(self, report):
        lines = [f"[{v.condition}] {v.detail}" for v in report.violations]
        super().__init__("scheme rows are not independent: " +
                         "; ".join(lines))
        self.report = report


# ============================================================
# shared row walk
# ============================================================

def _components(scheme):
    """Union rows sharing a non-desired symbol; return component lists."""
    nodes = [(srv, idx)
             for srv, rows in sorted(scheme.queries.items())
             for idx in range(len(rows))]
    parent = {node: node for node in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    occurrences = defaultdict(list)
    for srv, idx in nodes:
        for f, s, _sign in scheme.queries[srv][idx].terms:
            if f != scheme.theta:
                occurrences[(f, s)].append((srv, idx))
    for places in occurrences.values():
        for other in places[1:]:
            union(places[0], other)

    groups = defaultdict(list)
    for node in nodes:
        groups[find(node)].append(node)
    return [sorted(group) for root, group in sorted(groups.items())]


def _classify(scheme, component):
    """Return ("pattern", target, selections) / ("side",) / ("bad", detail)."""
    residue = Counter()
    per_server = Counter()
    theta_hits = 0
    for srv, idx in component:
        per_server[srv] += 1
        for f, s, _sign in scheme.queries[srv][idx].terms:
            residue[(f, s)] += 1
            if f == scheme.theta:
                theta_hits += 1
    odd = {sym for sym, cnt in residue.items() if cnt % 2}
    if theta_hits == 0:
        return ("side",)
    crowded = sorted(srv for srv, cnt in per_server.items() if cnt > 1)
    if crowded:
        return ("bad", f"servers {crowded} each contribute several rows "
                       f"to one component")
    if len(odd) == 1:
        (f, s) = next(iter(odd))
        if f == scheme.theta:
            selections = {srv: idx for srv, idx in component}
            return ("pattern", s, selections)
    leftover = sorted(odd - {(scheme.theta, s) for s in range(1, scheme.L + 1)})
    return ("bad", f"rows {component} leave uncancelled symbols {leftover}")


# ============================================================
# public checks
# ============================================================

def check_independence(scheme):
    """Evaluate all four independence conditions, collecting every breach."""
    violations = []
    theta = scheme.theta

    theta_subs = Counter()
    for srv, rows in sorted(scheme.queries.items()):
        seen_here = Counter()
        for idx, row in enumerate(rows):
            files = [f for f, s, _sign in row.terms]
            dup_files = sorted(f for f, c in Counter(files).items() if c > 1)
            if dup_files:
                violations.append(Violation(
                    1, f"row {idx} at server {srv} repeats files {dup_files}"))
            for f, s, _sign in row.terms:
                if srv not in scheme.graph.endpoints(f):
                    violations.append(Violation(
                        2, f"server {srv} asked for file {f} it does not "
                           f"store (row {idx})"))
                seen_here[(f, s)] += 1
                if f == theta:
                    theta_subs[s] += 1
        dups = sorted(sym for sym, c in seen_here.items() if c > 1)
        if dups:
            violations.append(Violation(
                2, f"subfile symbols {dups} repeat at server {srv}"))

    expected = set(range(1, scheme.L + 1))
    missing = sorted(expected - set(theta_subs))
    extra = sorted(s for s, c in theta_subs.items()
                   if c > 1 or s not in expected)
    if missing or extra:
        violations.append(Violation(
            3, f"desired subfiles must appear exactly once each: "
               f"missing {missing}, repeated or out of range {extra}"))

    for component in _components(scheme):
        verdict = _classify(scheme, component)
        if verdict[0] == "bad":
            violations.append(Violation(4, verdict[1]))

    return IndependenceReport(ok=not violations, violations=tuple(violations))


def extract_patterns(scheme):
    """Recover the pattern partition from the query rows alone.

    Raises IndependenceError (carrying the full report) when any
    independence condition fails.
    """
    report = check_independence(scheme)
    if not report.ok:
        raise IndependenceError(report)

    patterns = []
    side_info = []
    for component in _components(scheme):
        verdict = _classify(scheme, component)
        if verdict[0] == "pattern":
            patterns.append(RecoveryPattern(target=verdict[1],
                                            selections=verdict[2]))
        else:
            side_info.extend(component)
    patterns.sort(key=lambda p: p.target)
    return Extraction(patterns=tuple(patterns),
                      side_info=tuple(sorted(side_info)))


@dataclass(frozen=True)
class SrpReport:
    counts: dict
    ok: bool


def check_srp(scheme, extraction):
    """Count patterns by which endpoint serves the desired term.

    The source-symmetry property asks for an even split between the two
    servers storing the desired file.
    """
    t1, t2 = scheme.graph.endpoints(scheme.theta)
    counts = {t1: 0, t2: 0}
    for p in extraction.patterns:
        for srv, idx in p.selections.items():
            if scheme.theta in scheme.queries[srv][idx].files:
                counts[srv] += 1
    return SrpReport(counts=counts, ok=counts[t1] == counts[t2])
