"""Finite-dimensional quiver representations.

Includes the radical filtration, the separation functors S, T and T' for
radical-square-zero representations, and interval decomposition of
representations of path-shaped quivers (type A windows of any orientation).
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Optional

from . import exactlin as el
from .exactlin import Matrix
from .quiver import BoundQuiver, Quiver, is_primed, prime, separated_quiver, unprime

NEG_INF = -math.inf
POS_INF = math.inf


class RepError(ValueError):
    pass


class Rep:
    """A representation: a space k^dims[v] per vertex and a matrix per arrow.

    The matrix of an arrow has shape dims(target) x dims(source).  If the
    quiver carries relations, every relation path must compose to zero.
    """

    def __init__(self, quiver: Quiver | BoundQuiver, dims: dict, maps: Optional[dict] = None):
        if isinstance(quiver, Quiver):
            quiver = BoundQuiver(quiver)
        self.bound = quiver
        self.quiver = quiver.quiver
        self.dims = {v: int(dims.get(v, 0)) for v in self.quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise RepError("negative dimension")
        maps = dict(maps or {})
        self.maps = {}
        for a in self.quiver.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = maps.pop(a.id, None)
            if m is None:
                m = Matrix.zeros(*shape)
            elif not isinstance(m, Matrix):
                m = Matrix(shape[0], shape[1], m)
            if m.shape != shape:
                raise RepError(f"arrow {a.id}: matrix shape {m.shape}, expected {shape}")
            self.maps[a.id] = m
        if maps:
            raise RepError(f"maps given for unknown arrows {sorted(maps)}")
        for rel in quiver.relations:
            if not self.path_map(rel).is_zero():
                raise RepError(f"relation {rel} does not vanish")

    def path_map(self, path) -> Matrix:
        a0 = self.quiver.arrow(path[0])
        m = Matrix.identity(self.dims[a0.source])
        for aid in path:
            m = self.maps[aid] @ m
        return m

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> dict:
        return dict(self.dims)

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    def to_json(self) -> dict:
        return {
            "dims": {_key(v): d for v, d in self.dims.items()},
            "maps": {aid: m.to_json() for aid, m in self.maps.items()},
        }

    @classmethod
    def from_json(cls, quiver: Quiver | BoundQuiver, d: dict) -> "Rep":
        q = quiver.quiver if isinstance(quiver, BoundQuiver) else quiver
        keymap = {_key(v): v for v in q.vertices}
        dims = {keymap[k]: v for k, v in d["dims"].items()}
        maps = {}
        for aid, rows in d.get("maps", {}).items():
            a = q.arrow(aid)
            maps[aid] = Matrix.from_json(rows, dims.get(a.source, 0))
        return cls(quiver, dims, maps)


def _key(v) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


def zero_rep(quiver) -> Rep:
    return Rep(quiver, {})


def rep_direct_sum(*reps: Rep) -> Rep:
    q = reps[0].bound
    dims = {v: sum(r.dims[v] for r in reps) for v in q.vertices}
    maps = {a.id: el.direct_sum(*(r.maps[a.id] for r in reps)) for a in q.arrows}
    return Rep(q, dims, maps)


def restrict(v: Rep, bases: dict) -> Rep:
    """Subrepresentation spanned at each vertex by the columns of bases[v].

    The subspaces must be invariant under every arrow.
    """
    maps = {}
    for a in v.quiver.arrows:
        img = v.maps[a.id] @ bases[a.source]
        maps[a.id] = el.coordinates(bases[a.target], img)
    return Rep(v.bound, {x: bases[x].cols for x in v.quiver.vertices}, maps)


# ---------------------------------------------------------------------------
# homomorphisms

def hom_space(v: Rep, w: Rep) -> list:
    """Basis of Hom(v, w) as dicts vertex -> matrix (shape w.dims x v.dims)."""
    q = v.quiver
    offsets = {}
    n = 0
    for x in q.vertices:
        offsets[x] = n
        n += w.dims[x] * v.dims[x]
    eqs = {}
    row = 0
    # unknown phi_x[i, j] has index offsets[x] + i * v.dims[x] + j
    for a in q.arrows:
        s, t = a.source, a.target
        A, B = v.maps[a.id], w.maps[a.id]
        # w_a phi_s - phi_t v_a = 0, entrywise over (i in w.dims[t], j in v.dims[s])
        for i in range(w.dims[t]):
            for j in range(v.dims[s]):
                for k in range(w.dims[s]):
                    c = B[i, k]
                    if c != 0:
                        idx = offsets[s] + k * v.dims[s] + j
                        eqs[(row, idx)] = eqs.get((row, idx), 0) + c
                for k in range(v.dims[t]):
                    c = A[k, j]
                    if c != 0:
                        idx = offsets[t] + i * v.dims[t] + k
                        eqs[(row, idx)] = eqs.get((row, idx), 0) - c
                row += 1
    K = el.kernel_basis(Matrix.from_sparse(row, n, eqs))
    out = []
    for c in range(K.cols):
        col = K.column(c)
        phi = {}
        for x in q.vertices:
            r, s = w.dims[x], v.dims[x]
            o = offsets[x]
            phi[x] = Matrix(r, s, [[col[o + i * s + j] for j in range(s)] for i in range(r)])
        out.append(phi)
    return out


def is_homomorphism(v: Rep, w: Rep, phi: dict) -> bool:
    return all(
        w.maps[a.id] @ phi[a.source] == phi[a.target] @ v.maps[a.id] for a in v.quiver.arrows
    )


def _is_iso_map(v: Rep, phi: dict) -> bool:
    return all(el.rank(phi[x]) == v.dims[x] for x in v.quiver.vertices)


def is_isomorphic(v: Rep, w: Rep, rng: Optional[random.Random] = None, tries: int = 4) -> bool:
    """Decide v ~= w.

    Over F_p with a small Hom space the answer is exact: random combinations
    of a Hom basis are tried, then every homomorphism is enumerated.  Otherwise
    only random combinations are tried.  Isomorphisms form a dense open subset
    of Hom when they exist, so a false negative is vanishingly rare over QQ;
    over a large F_p Hom space the number of tries is raised to compensate.
    """
    if v.dims != w.dims:
        return False
    if v.total_dim == 0:
        return True
    basis = hom_space(v, w)
    if not basis:
        return False
    f = el.get_field()
    rng = rng or random.Random(0)
    if isinstance(f, el.PrimeField) and f.p ** len(basis) <= 1 << 16:
        # random combinations usually hit an isomorphism fast; the full sweep
        # is what makes a negative answer exact
        for _ in range(32):
            coeffs = [rng.randrange(f.p) for _ in basis]
            if _is_iso_map(v, _combine(basis, coeffs, v.quiver.vertices)):
                return True
        for coeffs in _all_vectors(f.p, len(basis)):
            phi = _combine(basis, coeffs, v.quiver.vertices)
            if _is_iso_map(v, phi):
                return True
        return False
    if isinstance(f, el.PrimeField):
        tries = max(tries, 256)
    for _ in range(tries):
        coeffs = [rng.randint(-10 ** 6, 10 ** 6) for _ in basis]
        if _is_iso_map(v, _combine(basis, coeffs, v.quiver.vertices)):
            return True
    return False


def _all_vectors(p: int, k: int):
    if k == 0:
        yield ()
        return
    for head in range(p):
        for tail in _all_vectors(p, k - 1):
            yield (head,) + tail


def _combine(basis, coeffs, vertices) -> dict:
    out = {}
    for x in vertices:
        m = None
        for phi, c in zip(basis, coeffs):
            term = phi[x].scale(c)
            m = term if m is None else m + term
        out[x] = m
    return out


# ---------------------------------------------------------------------------
# radical and separation functors

def radical_spaces(v: Rep) -> dict:
    """Column bases of (Rad V)_x = sum of images of arrows ending at x."""
    out = {}
    for x in v.quiver.vertices:
        span = Matrix.zeros(v.dims[x], 0)
        for a in v.quiver.incoming(x):
            span = span.hstack(v.maps[a.id])
        out[x] = el.column_space(span)
    return out


def radical(v: Rep) -> tuple:
    """The subrepresentation Rad V together with its inclusion matrices."""
    incl = radical_spaces(v)
    return restrict(v, incl), incl


def has_rad_square_zero(v: Rep) -> bool:
    r, _ = radical(v)
    return all(b.cols == 0 for b in radical_spaces(r).values())


def functor_tprime(x: Rep) -> Rep:
    """T'(X): (X/Rad X)_i at vertex i and (Rad X)_i at vertex i'.

    The arrow i -> j' induced by X_alpha is expressed in a complement basis of
    Rad X_i (quotient coordinates) and a basis of Rad X_j.
    """
    if not has_rad_square_zero(x):
        raise RepError("T' needs a radical-square-zero representation")
    rad = radical_spaces(x)
    comp = {v: el.complement_columns(rad[v]) for v in x.quiver.vertices}
    sq = separated_quiver(x.quiver)
    dims = {}
    for v in x.quiver.vertices:
        dims[v] = comp[v].cols
        dims[prime(v)] = rad[v].cols
    maps = {}
    for a in x.quiver.arrows:
        img = x.maps[a.id] @ comp[a.source]
        maps[a.id] = el.coordinates(rad[a.target], img)
    return Rep(sq, dims, maps)


def functor_s(m: Rep) -> Rep:
    """S(M) = [M/JM ; JM] for a module over a radical-square-zero bound quiver algebra."""
    if not has_rad_square_zero(m):
        raise RepError("S is defined only when Rad^2 M = 0")
    return functor_tprime(m)


def functor_t(y: Rep, target: Quiver | BoundQuiver) -> Rep:
    """T(Y): Y_i (+) Y_i' at i, arrow matrices [[0, 0], [Y_alpha, 0]]."""
    q = target.quiver if isinstance(target, BoundQuiver) else target
    dims = {}
    for v in q.vertices:
        dims[v] = y.dims[v] + y.dims[prime(v)]
    maps = {}
    for a in q.arrows:
        s, t = a.source, a.target
        ya = y.maps[a.id]
        top = Matrix.zeros(y.dims[t], dims[s])
        bottom = ya.hstack(Matrix.zeros(y.dims[prime(t)], y.dims[prime(s)]))
        maps[a.id] = top.vstack(bottom)
    return Rep(target, dims, maps)


def is_separated(x: Rep) -> bool:
    """(Rad X)_i' = X_i' at every sink i' of a separated quiver.

    Only the primed copies count: an unprimed vertex can be an isolated sink
    (the copy of a sink of Q) and the simple there lies in the image of T'.
    On a quiver without primed vertices every sink is checked.
    """
    rad = radical_spaces(x)
    sinks = x.quiver.sinks()
    if any(is_primed(v) for v in x.quiver.vertices):
        sinks = [v for v in sinks if is_primed(v)]
    return all(rad[v].cols == x.dims[v] for v in sinks)


# ---------------------------------------------------------------------------
# interval decomposition

@dataclass(frozen=True, order=True)
class Interval:
    """Thin indecomposable k_{ab}: k on vertices a..b of a path, identity maps.

    ``a``/``b`` are positions along the path (the vertex ids themselves when
    the path's vertices are consecutive integers); infinite ends are
    ``-inf``/``+inf``.  ``component`` indexes the path component.
    """

    a: float
    b: float
    component: int = 0
    clipped: bool = False

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError("interval with a > b")

    def to_json(self, mult: int = 1) -> dict:
        return {"a": _end_json(self.a), "b": _end_json(self.b), "mult": mult, "clipped": self.clipped}


def _end_json(x):
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "+inf"
    return int(x)


def _positions(path: list) -> list:
    if all(isinstance(v, int) for v in path) and all(b - a == 1 for a, b in zip(path, path[1:])):
        return list(path)
    return list(range(len(path)))


def interval_vertices(path: list, iv: Interval) -> list:
    """Vertices of the path covered by a finite interval."""
    pos = _positions(path)
    return [v for v, x in zip(path, pos) if iv.a <= x <= iv.b]


@dataclass
class _Bar:
    start: int              # position index of the left end
    left_forward: bool      # orientation of the arrow entering at the left end
    vecs: dict              # position index -> column vector (list of scalars)

    def rank(self):
        # order in which lower-rank bars may be added to higher-rank ones
        return (1, self.start) if self.left_forward else (0, -self.start)


def decompose_path(v: Rep, path: list) -> tuple:
    """Interval decomposition along one path component.

    Sweeps vertices left to right.  At each arrow the live bars at the current
    vertex are re-based, using only base changes that extend to automorphisms
    of the already-decomposed prefix, so that a forward map kills a subset of
    bars and is injective on the rest, or a backward map has image spanned by a
    subset of bars.  Returns ``(bars, bases)`` where each bar is
    ``(first, last)`` in path-index coordinates and ``bases[v]`` is the
    invertible matrix whose columns are the bar vectors at vertex v (column
    order = order of ``bars`` restricted to bars alive at v).
    """
    f = el.get_field()
    arrows_between = {}
    for a in v.quiver.arrows:
        arrows_between[(a.source, a.target)] = a
    finished = []
    d0 = v.dims[path[0]]
    live = []
    for k in range(d0):
        live.append(_Bar(0, True, {0: _unit(d0, k, f)}))
    for i in range(len(path) - 1):
        x, y = path[i], path[i + 1]
        dx, dy = v.dims[x], v.dims[y]
        if (x, y) in arrows_between:
            A = v.maps[arrows_between[(x, y)].id]
            live.sort(key=_Bar.rank)
            kept, images = [], []  # images: reduced sparse vectors with pivot
            piv_rows = []
            for bar in live:
                w = _matvec(A, bar.vecs[i])
                # reduce against earlier (lower or equal rank) kept bars
                combo = []
                for (pr, img), kb in zip(piv_rows, kept):
                    c = w[pr]
                    if c != 0:
                        c = f.reduce(c * f.inv(img[pr]))
                        w = [f.reduce(a - c * b) for a, b in zip(w, img)]
                        combo.append((c, kb))
                for c, kb in combo:
                    _add_into(bar, kb, -c, i, f)
                nz = next((r for r, val in enumerate(w) if val != 0), None)
                if nz is None:
                    finished.append((bar.start, i, bar))
                else:
                    kept.append(bar)
                    piv_rows.append((nz, w))
            new_live = []
            for bar in kept:
                bar.vecs[i + 1] = _matvec(A, bar.vecs[i])
                new_live.append(bar)
            img = Matrix.from_columns([bar.vecs[i + 1] for bar in kept], dy) if kept else Matrix.zeros(dy, 0)
            comp = el.complement_columns(img)
            for c in range(comp.cols):
                new_live.append(_Bar(i + 1, True, {i + 1: list(comp.column(c))}))
            live = new_live
        else:
            B = v.maps[arrows_between[(y, x)].id]  # y -> x
            live.sort(key=_Bar.rank)
            m = len(live)
            # coordinates of im(B) in the live basis at x; columns ordered by rank descending
            basis = Matrix.from_columns([bar.vecs[i] for bar in live], dx) if live else Matrix.zeros(dx, 0)
            imgB = el.column_space(B)
            coords = el.coordinates(basis, imgB) if imgB.cols else Matrix.zeros(m, 0)
            order = list(range(m - 1, -1, -1))
            W = coords.transpose().select_columns(order)
            R, piv, _ = el.rref(W)
            cont = []
            for r, pc in enumerate(piv):
                p = order[pc]
                row = R.row(r)
                target = live[p]
                for cc in range(pc + 1, m):
                    c = row[cc]
                    if c != 0:
                        _add_into(target, live[order[cc]], c, i, f)
                cont.append(target)
            contset = {id(b) for b in cont}
            new_live = []
            for bar in live:
                if id(bar) not in contset:
                    finished.append((bar.start, i, bar))
            for bar in cont:
                u = el.solve(B, Matrix.from_columns([bar.vecs[i]], dx))
                bar.vecs[i + 1] = list(u.column(0))
                new_live.append(bar)
            ker = el.kernel_basis(B)
            for c in range(ker.cols):
                new_live.append(_Bar(i + 1, False, {i + 1: list(ker.column(c))}))
            live = new_live
    last = len(path) - 1
    for bar in live:
        finished.append((bar.start, last, bar))
    finished.sort(key=lambda t: (t[0], t[1]))
    bars = [(s, e) for s, e, _ in finished]
    bases = {}
    for idx, x in enumerate(path):
        cols = [b.vecs[idx] for s, e, b in finished if s <= idx <= e]
        bases[x] = Matrix.from_columns(cols, v.dims[x]) if cols else Matrix.zeros(v.dims[x], 0)
    return bars, bases


def _unit(n, k, f):
    return [f.one if i == k else f.zero for i in range(n)]


def _matvec(A: Matrix, vec: list) -> list:
    f = A.field
    return [f.reduce(sum((a * b for a, b in zip(A.row(r), vec)), f.zero)) for r in range(A.rows)]


def _add_into(target: _Bar, src: _Bar, c, upto: int, f):
    """target += c * src on the overlap of their supports (ending at ``upto``)."""
    lo = max(target.start, src.start)
    for t in range(lo, upto + 1):
        tv, sv = target.vecs[t], src.vecs[t]
        target.vecs[t] = [f.reduce(a + c * b) for a, b in zip(tv, sv)]


def decompose_intervals(v: Rep) -> Counter:
    """Multiset of intervals (Interval -> multiplicity) with v ~= sum k_ab.

    Works on any quiver whose connected components are paths, with any
    orientation.  Interval ends that sit at the end of a component are flagged
    ``clipped``.
    """
    return decompose_with_bases(v)[0]


def decompose_with_bases(v: Rep) -> tuple:
    """Like decompose_intervals, also returning the adapted bases.

    Returns ``(Counter, bases, labels)``: ``bases[x]`` has one column per
    interval summand alive at x and ``labels[x]`` lists the corresponding
    Interval for each column.
    """
    comps = v.quiver.path_components()
    counts = Counter()
    bases, labels = {}, {}
    for ci, path in enumerate(comps):
        pos = _positions(path)
        bars, cb = decompose_path(v, path)
        last = len(path) - 1
        ivs = []
        for s, e in bars:
            iv = Interval(pos[s], pos[e], ci, clipped=(s == 0 or e == last))
            ivs.append(iv)
            counts[iv] += 1
        for idx, x in enumerate(path):
            bases[x] = cb[x]
            labels[x] = [iv for (s, e), iv in zip(bars, ivs) if s <= idx <= e]
    return counts, bases, labels


def check_decomposition(v: Rep, bases: dict, labels: dict) -> bool:
    """In the adapted bases every arrow is the identity between columns of the
    same interval and zero elsewhere."""
    for x in v.quiver.vertices:
        if bases[x].cols != v.dims[x] or el.rank(bases[x]) != v.dims[x]:
            return False
    for a in v.quiver.arrows:
        s, t = a.source, a.target
        M = el.coordinates(bases[t], v.maps[a.id] @ bases[s]) if v.dims[t] else Matrix.zeros(0, v.dims[s])
        # the k-th occurrence of an interval at s must go to its k-th occurrence at t
        seen_s, seen_t = Counter(), Counter()
        occ_s, occ_t = [], []
        for iv in labels[s]:
            seen_s[iv] += 1
            occ_s.append((iv, seen_s[iv]))
        for iv in labels[t]:
            seen_t[iv] += 1
            occ_t.append((iv, seen_t[iv]))
        for r in range(M.rows):
            for c in range(M.cols):
                want = 1 if occ_t[r] == occ_s[c] else 0
                if M[r, c] != el.get_field().convert(want):
                    return False
    return True


def interval_rep(quiver: Quiver, intervals: Counter) -> Rep:
    """Realize a multiset of intervals (over a single path component) as a Rep."""
    comps = quiver.path_components()
    reps = []
    for iv, mult in sorted(intervals.items()):
        path = comps[iv.component]
        pos = _positions(path)
        support = {x for x, p in zip(path, pos) if iv.a <= p <= iv.b}
        dims = {x: (1 if x in support else 0) for x in quiver.vertices}
        maps = {}
        for a in quiver.arrows:
            if a.source in support and a.target in support:
                maps[a.id] = Matrix.identity(1)
        r = Rep(quiver, dims, maps)
        reps.extend([r] * mult)
    if not reps:
        return zero_rep(quiver)
    return rep_direct_sum(*reps)


def separated_target_quiver(sq: Quiver) -> Quiver:
    """Recover the quiver Q from its separated quiver Q^s."""
    verts = [v for v in sq.vertices if not is_primed(v)]
    return Quiver.build(verts, [(a.id, a.source, unprime(a.target)) for a in sq.arrows])
