"""Single-symbol randomized retrieval on arbitrary 2-replicated graphs.

Every file gets two private coin flips: an inclusion bit mu and an
orientation bit lam.  The two copies of a file are always requested with
opposite signs, so summing all answers cancels every file except the
desired one, which is deliberately included an odd number of times (its
lower endpoint participates when mu is 1, the higher one when mu is 0).
Each server only ever sees independent uniform bits, so the per-server
answer distribution is identical for every desired file.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import ParameterError, UnsupportedSizeError
from .graphs import Graph

DISTRIBUTION_DEGREE_CAP = 12


@dataclass(frozen=True)
class GeneralScheme:
    graph: Graph
    theta: int
    q: int
    mu: tuple
    lam: tuple
    queries: dict

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(b) for b in self.mu))
        object.__setattr__(self, "lam", tuple(int(b) for b in self.lam))
        object.__setattr__(
            self, "queries",
            {int(v): tuple((int(f), int(sign)) for f, sign in combo)
             for v, combo in dict(self.queries).items()})

    def to_json(self):
        return {
            "graph": self.graph.to_json(),
            "theta": self.theta,
            "q": self.q,
            "mu": list(self.mu),
            "lam": list(self.lam),
            "queries": {str(v): [[f, sign] for f, sign in combo]
                        for v, combo in sorted(self.queries.items())},
        }

    @classmethod
    def from_json(cls, doc):
        try:
            return cls(graph=Graph.from_json(doc["graph"]),
                       theta=int(doc["theta"]), q=int(doc["q"]),
                       mu=tuple(doc["mu"]), lam=tuple(doc["lam"]),
                       queries={int(v): tuple(tuple(t) for t in combo)
                                for v, combo in doc["queries"].items()})
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed scheme document: {exc}")


def _check_inputs(graph, theta, mu, lam, q):
    m = len(graph.edges)
    if not 0 <= theta < m:
        raise ParameterError(f"theta {theta} is not a file id (0..{m - 1})")
    for name, bits in (("mu", mu), ("lam", lam)):
        if len(bits) != m:
            raise ParameterError(f"{name} must carry one bit per file "
                                 f"({m}), got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ParameterError(f"{name} entries must be 0 or 1")
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"alphabet size q must be an integer >= 2, "
                             f"got {q}")


def _sign(at_lower, lam_bit, q):
    if q == 2:
        return 1
    return (-1) ** lam_bit if at_lower else (-1) ** (lam_bit + 1)


def build_general_query(graph, theta, mu, lam, q=2):
    """Assemble per-server query combos from explicit randomness bits."""
    mu, lam = tuple(mu), tuple(lam)
    _check_inputs(graph, theta, mu, lam, q)
    queries = {v: [] for v in graph.servers}
    for fid in graph.files:
        lo, hi = graph.endpoints(fid)
        for v, at_lower in ((lo, True), (hi, False)):
            if fid == theta:
                include = mu[fid] == 1 if at_lower else mu[fid] == 0
            else:
                include = mu[fid] == 1
            if include:
                queries[v].append((fid, _sign(at_lower, lam[fid], q)))
    return GeneralScheme(graph=graph, theta=theta, q=q, mu=mu, lam=lam,
                         queries={v: tuple(sorted(combo))
                                  for v, combo in queries.items()})


def random_general_scheme(graph, theta, rng, q=2):
    m = len(graph.edges)
    mu = tuple(rng.randrange(2) for _ in range(m))
    lam = tuple(rng.randrange(2) for _ in range(m))
    return build_general_query(graph, theta, mu, lam, q=q)


def answers(scheme, contents):
    """Each server's single answer symbol, as an integer mod q."""
    if len(contents) != len(scheme.graph.edges):
        raise ParameterError("contents must hold one symbol per file")
    return {v: sum(sign * contents[f] for f, sign in combo) % scheme.q
            for v, combo in scheme.queries.items()}


def reconstruct(scheme, answer_map):
    """Recover the desired symbol from the full answer map."""
    total = sum(answer_map.values()) % scheme.q
    # the desired term enters with coefficient +-1; that sign is its own
    # inverse mod q
    coef = (1 - 2 * scheme.mu[scheme.theta]) * \
        _sign(at_lower=False, lam_bit=scheme.lam[scheme.theta], q=scheme.q)
    return (total * coef) % scheme.q


def general_rate(graph):
    """1 over the expected number of non-idle servers per retrieval."""
    total = sum(1 - Fraction(1, 2) ** graph.degree(v)
                for v in graph.servers)
    return 1 / total


def answer_distribution(graph, theta, server, q=2):
    """Exact distribution of one server's query combo.

    Enumerates the 4^degree joint values of the incident randomness bits;
    refuses degrees past DISTRIBUTION_DEGREE_CAP to keep that enumeration
    honest.  The result is identical for every theta, which is the privacy
    statement in exact form.
    """
    if not 0 <= theta < len(graph.edges):
        raise ParameterError(f"theta {theta} is not a file id")
    if server not in graph.servers:
        raise ParameterError(f"server {server} is not a vertex")
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"alphabet size q must be an integer >= 2")
    incident = graph.incident(server)
    if len(incident) > DISTRIBUTION_DEGREE_CAP:
        raise UnsupportedSizeError(
            f"degree {len(incident)} exceeds the enumeration cap "
            f"{DISTRIBUTION_DEGREE_CAP}")

    dist = {}
    weight = Fraction(1, 4) ** len(incident)
    for assignment in product(range(4), repeat=len(incident)):
        combo = []
        for fid, code in zip(incident, assignment):
            mu_bit, lam_bit = code >> 1, code & 1
            lo, _hi = graph.endpoints(fid)
            at_lower = server == lo
            if fid == theta:
                include = mu_bit == 1 if at_lower else mu_bit == 0
            else:
                include = mu_bit == 1
            if include:
                combo.append((fid, _sign(at_lower, lam_bit, q)))
        key = tuple(sorted(combo))
        dist[key] = dist.get(key, Fraction(0)) + weight
    return dist
