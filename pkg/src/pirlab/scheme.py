"""Wire-format data model for deterministic and probabilistic schemes.

A deterministic scheme lists, per server, the summations the server answers
with.  Each summation term is a (file, subfile, sign) triple; subfiles are
1-based.  Recovery patterns group one summation per involved server such
that the group cancels to a single desired subfile.  Side information rows
are downloaded but not used by any pattern.
"""

from dataclasses import dataclass, field, replace as _dc_replace
from fractions import Fraction

from .errors import ParameterError
from .graphs import Graph
from .render import frac_str, parse_frac


# ============================================================
# summations and recovery patterns
# ============================================================

@dataclass(frozen=True)
class Summation:
    terms: tuple

    def __post_init__(self):
        norm = []
        for term in self.terms:
            f, s, sign = term
            if not (isinstance(f, int) and f >= 0):
                raise ParameterError(f"bad file id in term {term}")
            if not (isinstance(s, int) and s >= 1):
                raise ParameterError(f"bad subfile index in term {term}")
            if sign not in (1, -1):
                raise ParameterError(f"bad sign in term {term}")
            norm.append((f, s, sign))
        object.__setattr__(self, "terms", tuple(sorted(norm)))

    @property
    def files(self):
        return tuple(f for f, _, _ in self.terms)

    def to_json(self):
        return {"terms": [[f, s, sign] for f, s, sign in self.terms]}

    @classmethod
    def from_json(cls, doc):
        return cls(tuple(tuple(t) for t in doc["terms"]))


@dataclass(frozen=True)
class RecoveryPattern:
    target: int
    selections: dict
    step: int = None
    pattern_class: str = None

    def __post_init__(self):
        sel = {int(srv): int(idx) for srv, idx in dict(self.selections).items()}
        object.__setattr__(self, "selections", sel)

    def to_json(self):
        doc = {"target": self.target,
               "selections": {str(srv): idx
                              for srv, idx in sorted(self.selections.items())}}
        if self.step is not None:
            doc["step"] = self.step
        if self.pattern_class is not None:
            doc["class"] = self.pattern_class
        return doc

    @classmethod
    def from_json(cls, doc):
        return cls(target=int(doc["target"]),
                   selections={int(s): int(i)
                               for s, i in doc["selections"].items()},
                   step=doc.get("step"),
                   pattern_class=doc.get("class"))


# ============================================================
# deterministic scheme
# ============================================================

@dataclass(frozen=True)
class DeterministicScheme:
    graph: Graph
    theta: int
    L: int
    queries: dict
    patterns: tuple = None
    side_info: tuple = ()

    def __post_init__(self):
        if not 0 <= self.theta < len(self.graph.edges):
            raise ParameterError(f"theta {self.theta} is not a file id")
        if self.L < 1:
            raise ParameterError(f"subpacketization must be >= 1, got {self.L}")
        queries = {int(srv): tuple(rows)
                   for srv, rows in dict(self.queries).items()}
        for srv in self.graph.servers:
            queries.setdefault(srv, ())
        for srv, rows in queries.items():
            if srv not in self.graph.servers:
                raise ParameterError(f"no server {srv} in the graph")
            for row in rows:
                if not isinstance(row, Summation):
                    raise ParameterError("queries must contain Summation rows")
        object.__setattr__(self, "queries", queries)
        if self.patterns is not None:
            object.__setattr__(self, "patterns", tuple(self.patterns))
            for p in self.patterns:
                for srv, idx in p.selections.items():
                    if not 0 <= idx < len(queries.get(srv, ())):
                        raise ParameterError(
                            f"pattern {p.target} references missing row "
                            f"{idx} at server {srv}")
        side = self.side_info
        side = () if side is None else tuple((int(s), int(i)) for s, i in side)
        for srv, idx in side:
            if not 0 <= idx < len(queries.get(srv, ())):
                raise ParameterError(
                    f"side info references missing row {idx} at server {srv}")
        object.__setattr__(self, "side_info", side)

    def replace(self, **overrides):
        return _dc_replace(self, **overrides)

    def to_json(self):
        doc = {
            "graph": self.graph.to_json(),
            "theta": self.theta,
            "L": self.L,
            "queries": {str(srv): [row.to_json() for row in rows]
                        for srv, rows in sorted(self.queries.items())},
        }
        if self.patterns is not None:
            doc["patterns"] = [p.to_json() for p in self.patterns]
        doc["side_info"] = [{"server": s, "index": i} for s, i in self.side_info]
        return doc

    @classmethod
    def from_json(cls, doc):
        try:
            graph = Graph.from_json(doc["graph"])
            queries = {int(srv): tuple(Summation.from_json(r) for r in rows)
                       for srv, rows in doc["queries"].items()}
            patterns = None
            if "patterns" in doc:
                patterns = tuple(RecoveryPattern.from_json(p)
                                 for p in doc["patterns"])
            side = tuple((e["server"], e["index"])
                         for e in doc.get("side_info", ()))
            return cls(graph=graph, theta=int(doc["theta"]), L=int(doc["L"]),
                       queries=queries, patterns=patterns, side_info=side)
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed scheme document: {exc}")


# ============================================================
# probabilistic scheme
# ============================================================

@dataclass(frozen=True)
class ProbRow:
    p: Fraction
    q: dict
    pattern_servers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        q = {}
        for srv, combo in dict(self.q).items():
            if combo is not None:
                combo = tuple((int(f), int(sign)) for f, sign in combo)
            q[int(srv)] = combo
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "pattern_servers",
                           tuple(int(s) for s in self.pattern_servers))

    def to_json(self):
        return {
            "p": frac_str(self.p),
            "q": {str(srv): None if combo is None
                  else [[f, sign] for f, sign in combo]
                  for srv, combo in sorted(self.q.items())},
            "pattern_servers": list(self.pattern_servers),
        }

    @classmethod
    def from_json(cls, doc):
        return cls(p=parse_frac(doc["p"]),
                   q={int(s): None if combo is None
                      else tuple(tuple(t) for t in combo)
                      for s, combo in doc["q"].items()},
                   pattern_servers=tuple(doc.get("pattern_servers", ())))


@dataclass(frozen=True)
class ProbabilisticScheme:
    graph: Graph
    theta: int
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not 0 <= self.theta < len(self.graph.edges):
            raise ParameterError(f"theta {self.theta} is not a file id")

    def to_json(self):
        return {
            "graph": self.graph.to_json(),
            "theta": self.theta,
            "rows": [row.to_json() for row in self.rows],
        }

    @classmethod
    def from_json(cls, doc):
        try:
            return cls(graph=Graph.from_json(doc["graph"]),
                       theta=int(doc["theta"]),
                       rows=tuple(ProbRow.from_json(r) for r in doc["rows"]))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed probabilistic document: {exc}")
