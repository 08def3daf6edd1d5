"""Loop-free graphs, framings, weights and the symmetric Cartan pairing."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


class DatumError(ValueError):
    pass


FRAME_MARK = "+"


@dataclass(frozen=True)
class CartanDatum:
    """A finite loop-free graph with its symmetric Cartan matrix.

    ``vertices`` is the ordered vertex list; ``edges`` holds each unordered
    edge once (multiplicity by repetition).  ``framing`` maps an original
    vertex to its framing copy when the datum came out of ``frame``.
    """

    vertices: tuple
    edges: tuple
    framing: tuple = ()
    cartan: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {v: k for k, v in enumerate(self.vertices)}
        n = len(self.vertices)
        mat = [[0] * n for _ in range(n)]
        for k in range(n):
            mat[k][k] = 2
        for a, b in self.edges:
            ia, ib = index[a], index[b]
            mat[ia][ib] -= 1
            mat[ib][ia] -= 1
        object.__setattr__(self, "cartan", tuple(tuple(r) for r in mat))

    @property
    def rank(self):
        return len(self.vertices)

    def index(self, vertex):
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise DatumError(f"unknown vertex {vertex!r}") from None

    def pairing(self, i, j):
        """(i, alpha_j) for vertex names i, j."""
        return self.cartan[self.index(i)][self.index(j)]

    def multiplicity(self, i, j):
        if i == j:
            return 0
        return -self.pairing(i, j)

    @property
    def framing_map(self):
        return dict(self.framing)

    @property
    def base_vertices(self):
        """Vertices that are not framing copies (all vertices if unframed)."""
        plus = {b for _, b in self.framing}
        return tuple(v for v in self.vertices if v not in plus)

    def canonical(self):
        edges = sorted(tuple(sorted((str(a), str(b)))) for a, b in self.edges)
        return json.dumps({"vertices": [str(v) for v in self.vertices], "edges": edges,
                           "framing": [[str(a), str(b)] for a, b in self.framing]},
                          sort_keys=True, separators=(",", ":"))

    def digest(self):
        """Content hash of the canonical serialization."""
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:24]

    # weights are tuples of values (i, lambda) in vertex order

    def root(self, j):
        """The vector ((i, alpha_j))_i."""
        col = self.index(j)
        return tuple(row[col] for row in self.cartan)

    def pair_degree(self, nu):
        """Image of nu in N[I] inside X: the tuple ((i, nu))_i."""
        n = self.rank
        return tuple(sum(self.cartan[i][j] * nu[j] for j in range(n)) for i in range(n))

    def weight_of(self, lam, nu):
        """The values (i, lambda - nu)."""
        pn = self.pair_degree(nu)
        return tuple(a - b for a, b in zip(lam, pn))

    def simple_degree(self, k):
        """alpha_k as an N[I] tuple, for a vertex index k."""
        return tuple(1 if j == k else 0 for j in range(self.rank))

    def zero(self):
        return (0,) * self.rank

    def frame(self):
        """The framed datum: one new vertex per vertex, joined by a single edge."""
        names = [str(v) for v in self.vertices]
        k = 1
        while True:
            new = [n + FRAME_MARK * k for n in names]
            if len(set(new)) == len(new) and not set(new) & set(names):
                break
            k += 1
        verts = tuple(self.vertices) + tuple(new)
        edges = tuple(self.edges) + tuple((v, p) for v, p in zip(self.vertices, new))
        return CartanDatum(verts, edges, framing=tuple(zip(self.vertices, new)))

    def label(self):
        return f"{len(self.vertices)} vertices, {len(self.edges)} edges"


def build_datum(vertices, edges):
    """Validate and build a datum from vertex names and an edge list."""
    verts = tuple(str(v) for v in vertices)
    if len(set(verts)) != len(verts):
        raise DatumError("duplicate vertex names")
    known = set(verts)
    out = []
    for e in edges:
        a, b = (str(x) for x in e)
        if a not in known or b not in known:
            bad = a if a not in known else b
            raise DatumError(f"unknown vertex {bad!r} in edge {a}-{b}")
        if a == b:
            raise DatumError(f"loop edge at vertex {a!r}")
        out.append((a, b))
    return CartanDatum(verts, tuple(out))


@dataclass(frozen=True)
class WeightVector:
    """A weight in X (values (i, lambda)) or a grading in N[I]."""

    coords: tuple
    kind: str = "X"

    def __post_init__(self):
        if self.kind not in ("X", "N"):
            raise ValueError("kind must be 'X' or 'N'")
        if self.kind == "N" and any(c < 0 for c in self.coords):
            raise ValueError("N[I] vectors must be nonnegative")

    def height(self):
        return sum(self.coords)


def weight_of(datum, lam, nu):
    lam = lam.coords if isinstance(lam, WeightVector) else tuple(lam)
    nu = nu.coords if isinstance(nu, WeightVector) else tuple(nu)
    return WeightVector(datum.weight_of(lam, nu), "X")


def as_vector(datum, value, kind="X"):
    """Accept a tuple, list, or {vertex: value} map."""
    if isinstance(value, WeightVector):
        return value.coords
    if isinstance(value, dict):
        unknown = set(map(str, value)) - set(datum.vertices)
        if unknown:
            raise DatumError(f"unknown vertex {sorted(unknown)[0]!r}")
        return tuple(int(value.get(v, 0)) for v in datum.vertices)
    vec = tuple(int(x) for x in value)
    if len(vec) != datum.rank:
        raise DatumError(f"expected {datum.rank} entries, got {len(vec)}")
    return vec


def is_dominant(lam):
    return all(c >= 0 for c in lam)


def degrees_up_to(rank, height):
    """All N[I] tuples of total height <= height, by height then lex."""
    out = []
    for h in range(height + 1):
        out.extend(compositions(h, rank))
    return out


def compositions(total, parts):
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def sub_degrees(nu):
    """All mu <= nu componentwise."""
    out = [()]
    for c in nu:
        out = [p + (k,) for p in out for k in range(c + 1)]
    return out


def splits(nu, parts):
    """All ordered tuples (nu^1, ..., nu^parts) summing to nu."""
    if parts == 1:
        return [(tuple(nu),)]
    out = []
    for first in sub_degrees(nu):
        rest = tuple(a - b for a, b in zip(nu, first))
        for tail in splits(rest, parts - 1):
            out.append((first,) + tail)
    return out

