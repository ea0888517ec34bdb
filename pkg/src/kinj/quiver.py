"""Quivers with monomial (zero) relations.

Relations are stored as composable arrow-id sequences in travel order: the
path ``(a, b)`` means "first ``a``, then ``b``".  Vertex ids may be any
hashable JSON-friendly value; repetitive windows use ``(copy, vertex)``
pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable


@dataclass(frozen=True)
class Arrow:
    id: str
    source: Hashable
    target: Hashable


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple = ()

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise ValueError(f"arrow {a.id} has an undeclared endpoint")

    @classmethod
    def build(cls, vertices: Iterable, arrows: Iterable) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(i, s, t) for i, s, t in arrows))

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise KeyError(aid)

    def incoming(self, v) -> list:
        return [a for a in self.arrows if a.target == v]

    def outgoing(self, v) -> list:
        return [a for a in self.arrows if a.source == v]

    def sinks(self) -> list:
        return [v for v in self.vertices if not self.outgoing(v)]

    def paths_of_length(self, k: int) -> list:
        paths = [(a.id,) for a in self.arrows]
        for _ in range(k - 1):
            paths = [p + (b.id,) for p in paths for b in self.outgoing(self.arrow(p[-1]).target)]
        return paths

    def path_components(self) -> list:
        """Order the vertices of each connected component along its path.

        Raises ValueError unless every component is a path (each vertex meets at
        most two arrows, no cycles, no loops).  Components and the direction of
        traversal are chosen deterministically.
        """
        nbrs = {v: [] for v in self.vertices}
        for a in self.arrows:
            if a.source == a.target:
                raise ValueError(f"loop {a.id}: quiver is not path-shaped")
            nbrs[a.source].append(a.target)
            nbrs[a.target].append(a.source)
        if any(len(ns) > 2 for ns in nbrs.values()):
            raise ValueError("a vertex meets more than two arrows: quiver is not path-shaped")
        seen = set()
        comps = []
        order = {v: i for i, v in enumerate(self.vertices)}
        for v in self.vertices:
            if v in seen or len(nbrs[v]) == 2:
                continue
            path = [v]
            seen.add(v)
            prev, cur = None, v
            while True:
                nxt = [w for w in nbrs[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                if cur in seen:
                    raise ValueError("multiple arrows between two vertices")
                seen.add(cur)
                path.append(cur)
            if len(path) > 1 and order[path[-1]] < order[path[0]]:
                path.reverse()
            comps.append(path)
        if len(seen) != len(self.vertices):
            raise ValueError("quiver contains a cycle: not path-shaped")
        comps.sort(key=lambda p: order[p[0]])
        return comps

    def to_json(self) -> dict:
        return {
            "vertices": [_vjson(v) for v in self.vertices],
            "arrows": [[a.id, _vjson(a.source), _vjson(a.target)] for a in self.arrows],
        }


@dataclass(frozen=True)
class BoundQuiver:
    quiver: Quiver
    relations: tuple = field(default=())

    def __post_init__(self):
        for rel in self.relations:
            if not rel:
                raise ValueError("empty relation path")
            for a, b in zip(rel, rel[1:]):
                if self.quiver.arrow(a).target != self.quiver.arrow(b).source:
                    raise ValueError(f"relation {rel} is not a composable path")

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    def to_json(self) -> dict:
        d = self.quiver.to_json()
        d["relations"] = [list(r) for r in self.relations]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "BoundQuiver":
        q = Quiver.build([_vparse(v) for v in d["vertices"]],
                         [(i, _vparse(s), _vparse(t)) for i, s, t in d["arrows"]])
        return cls(q, tuple(tuple(r) for r in d.get("relations", [])))


def _vjson(v):
    return list(v) if isinstance(v, tuple) else v


def _vparse(v):
    return tuple(v) if isinstance(v, list) else v


def cycle_quiver(n: int) -> BoundQuiver:
    """C_n: vertices 1..n, arrows a{j}: j -> j+1 (cyclically), all length-2 paths zero."""
    if n < 1:
        raise ValueError("cycle quiver needs n >= 1")
    arrows = [(f"a{j}", j, j % n + 1) for j in range(1, n + 1)]
    q = Quiver.build(range(1, n + 1), arrows)
    rels = tuple((f"a{j}", f"a{j % n + 1}") for j in range(1, n + 1))
    return BoundQuiver(q, rels)


def lrnm_quiver(r: int, n: int, m: int) -> BoundQuiver:
    """Q(r, n, m) with the ideal I(r, n, m).

    Cycle vertices 0..n-1 with a{i}: i -> i+1 and a{n-1}: n-1 -> 0, tail
    vertices -m..-1 with a{i}: i -> i+1.  The r zero relations are the
    consecutive length-2 paths through a{n-1}, a{n-2}, ..., a{n-r}.
    """
    if not (n >= r >= 1 and m >= 0):
        raise ValueError(f"({r}, {n}, {m}) is not in Omega: need n >= r >= 1 and m >= 0")
    verts = list(range(-m, n))
    arrows = [(f"a{i}", i, i + 1) for i in range(-m, n - 1)]
    arrows.append((f"a{n - 1}", n - 1, 0))
    rels = []
    for k in range(r):
        first = n - 1 - k
        second = (n - k) % n
        rels.append((f"a{first}", f"a{second}"))
    return BoundQuiver(Quiver.build(verts, arrows), tuple(rels))


def separated_quiver(q: Quiver | BoundQuiver) -> Quiver:
    """Vertices v and (v, "'") for every v; an arrow l -> m' for each l -> m."""
    if isinstance(q, BoundQuiver):
        q = q.quiver
    verts = list(q.vertices) + [prime(v) for v in q.vertices]
    arrows = [(a.id, a.source, prime(a.target)) for a in q.arrows]
    return Quiver.build(verts, arrows)


def prime(v):
    return (v, "'")


def is_primed(v) -> bool:
    return isinstance(v, tuple) and len(v) == 2 and v[1] == "'"


def unprime(v):
    return v[0]


def repetitive_window(q: BoundQuiver, lo: int, hi: int, bar_quotient: bool = True) -> BoundQuiver:
    """Finite window [lo, hi] of the repetitive quiver of C_n.

    Copy c carries vertices (c, j), j = 1..n, with alpha arrows
    (c, j) -> (c, j+1); connecting arrows beta go (c, j) -> (c+1, j-1).
    With ``bar_quotient`` every length-2 path is a zero relation; without it
    only alpha^2 and beta^2 are recorded (commutativity relations are never
    stored).
    """
    if lo > hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    n = len(q.vertices)
    if q != cycle_quiver(n):
        raise ValueError("repetitive windows are built only for cycle quivers")
    verts = [(c, j) for c in range(lo, hi + 1) for j in range(1, n + 1)]
    arrows = []
    for c in range(lo, hi + 1):
        for j in range(1, n + 1):
            arrows.append((f"al{c}_{j}", (c, j), (c, j % n + 1)))
    for c in range(lo, hi):
        for j in range(1, n + 1):
            arrows.append((f"be{c}_{j}", (c, j), (c + 1, (j - 2) % n + 1)))
    quiver = Quiver.build(verts, arrows)
    rels = []
    for path in quiver.paths_of_length(2):
        kinds = tuple(p[:2] for p in path)
        if bar_quotient or kinds[0] == kinds[1]:
            rels.append(path)
    return BoundQuiver(quiver, tuple(rels))


def path_window(length: int, orientation: Iterable[bool], start: int = 0) -> Quiver:
    """Path on vertices start..start+length-1; orientation[i] True means i -> i+1."""
    orient = list(orientation)
    if len(orient) != max(length - 1, 0):
        raise ValueError("orientation needs length-1 entries")
    arrows = []
    for k, fwd in enumerate(orient):
        i = start + k
        arrows.append((f"e{i}", i, i + 1) if fwd else (f"e{i}", i + 1, i))
    return Quiver.build(range(start, start + length), arrows)
