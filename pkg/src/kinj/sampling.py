"""Seeded random complexes and path representations for tests and selftest."""
from __future__ import annotations

import random

from . import exactlin as el
from .anmod import PERIODIC, ZERO, InjComplex, InjMap, pred, types_of
from .exactlin import Matrix
from .quiver import path_window
from .rep import Rep

_MULT_WEIGHTS = (50, 30, 15, 5)


def _scalar(rng: random.Random, nonzero: bool = False):
    f = el.get_field()
    while True:
        v = f.convert(rng.randint(-3, 3))
        if v != 0 or not nonzero:
            return v


def _random_radical(rng, n, src, tgt, density=0.6) -> InjMap:
    rad = {}
    for p, t in enumerate(tgt):
        for q, s in enumerate(src):
            if t == pred(s, n) and rng.random() < density:
                rad[(p, q)] = _scalar(rng)
    return InjMap.from_sparse(n, src, tgt, {}, rad)


def _random_automorphism(rng, n, types) -> tuple:
    """A random automorphism of a sum of injectives and its inverse."""
    size = len(types)
    L = {}
    R = {}
    for p in range(size):
        L[(p, p)] = _scalar(rng, nonzero=True)
        for q in range(p):
            if types[p] == types[q] and rng.random() < 0.5:
                L[(p, q)] = _scalar(rng)
        for q in range(size):
            if types[p] == pred(types[q], n) and rng.random() < 0.3:
                R[(p, q)] = _scalar(rng)
    Lm = Matrix.from_sparse(size, size, L)
    Rm = Matrix.from_sparse(size, size, R)
    Li = el.inverse(Lm) if size else Lm
    fwd = InjMap(n, types, types, Lm, Rm)
    inv = InjMap(n, types, types, Li, -(Li @ Rm @ Li))
    return fwd, inv


def random_complex(rng: random.Random, n: int, max_len: int = 6, max_mult: int = 3,
                   tail_prob: float = 0.2, contractible_prob: float = 0.5,
                   degree_range: tuple = (-3, 3)) -> InjComplex:
    """A random valid complex over A_n.

    Radical differentials with random coefficients, then contractible pairs
    0 -> I_j -> I_j -> 0 are added and every degree is conjugated by a random
    automorphism so that identity components are spread around.  Periodic
    tails are only placed where the boundary differential stays radical.
    """
    length = rng.randint(1, max_len)
    lo = rng.randint(*degree_range)
    hi = lo + length - 1
    weights = _MULT_WEIGHTS[: max_mult + 1]
    mult = {i: [rng.choices(range(len(weights)), weights)[0] for _ in range(n)] for i in range(lo, hi + 1)}
    tails = (PERIODIC if rng.random() < tail_prob else ZERO, PERIODIC if rng.random() < tail_prob else ZERO)
    # contractible pairs live on (i, i+1) away from periodic boundaries
    first = lo + 1 if tails[0] == PERIODIC else lo
    last = hi - 2 if tails[1] == PERIODIC else hi - 1
    pairs = []
    if length >= 2 and first <= last:
        while rng.random() < contractible_prob:
            i = rng.randint(first, last)
            j = rng.randint(1, n)
            if mult[i][j - 1] < max_mult and mult[i + 1][j - 1] < max_mult:
                mult[i][j - 1] += 1
                mult[i + 1][j - 1] += 1
                pairs.append((i, j))
    mult = {i: tuple(m) for i, m in mult.items()}
    types = {i: types_of(mult[i]) for i in mult}
    # radical part on everything, identity 1 on each contractible pair
    used = {i: {} for i in mult}

    def take(i, j):
        k = used[i].get(j, 0)
        used[i][j] = k + 1
        # pair summands are the last copies of their type
        idx = [p for p, t in enumerate(types[i]) if t == j]
        return idx[len(idx) - 1 - k]

    diff = {}
    pair_entries = {i: {} for i in range(lo, hi)}
    for i, j in pairs:
        pair_entries[i][(take(i + 1, j), take(i, j))] = 1
    for i in range(lo, hi):
        d = _random_radical(rng, n, types[i], types[i + 1])
        # radical entries touching pair summands must keep d^2 = 0; simplest is
        # to leave pair rows/columns radical-free
        pair_rows = {p for p, _ in pair_entries[i]}
        pair_cols = {q for _, q in pair_entries[i]}
        prev_rows = {p for p, _ in pair_entries.get(i - 1, {})}
        next_cols = {q for _, q in pair_entries.get(i + 1, {})}
        rad = {(p, q): v for (p, q), v in _sparse(d.rad)
               if p not in pair_rows and q not in pair_cols and q not in prev_rows and p not in next_cols}
        diff[i] = InjMap.from_sparse(n, types[i], types[i + 1], pair_entries[i], rad)
    x = InjComplex(n, lo, hi, mult, diff, tails)
    # conjugate, keeping tail-adjacent degrees fixed where needed
    autos = {}
    for i in range(lo, hi + 1):
        if (tails[0] == PERIODIC and i == lo) or (tails[1] == PERIODIC and i == hi):
            autos[i] = (InjMap.identity(n, types[i]),) * 2
        else:
            autos[i] = _random_automorphism(rng, n, types[i])
    new = {i: autos[i + 1][0] @ x.diff[i] @ autos[i][1] for i in range(lo, hi)}
    if tails[0] == PERIODIC and lo < hi:
        new[lo] = _assert_radical(new[lo])
    if tails[1] == PERIODIC and lo < hi:
        new[hi - 1] = _assert_radical(new[hi - 1])
    return InjComplex(n, lo, hi, mult, new, tails)


def _assert_radical(d: InjMap) -> InjMap:
    if d.is_radical():
        return d
    raise AssertionError("tail-adjacent differential picked up identity components")


def _sparse(m: Matrix):
    for p in range(m.rows):
        for q, v in enumerate(m.row(p)):
            if v != 0:
                yield (p, q), v


def random_path_rep(rng: random.Random, max_len: int = 8, max_dim: int = 4, orientation=None) -> Rep:
    """Random representation of a path quiver with random orientation; maps have
    random rank so that nontrivial intervals show up."""
    if orientation is not None:
        orient = list(orientation)
        length = len(orient) + 1
    else:
        length = rng.randint(1, max_len)
        orient = [rng.random() < 0.5 for _ in range(length - 1)]
    q = path_window(length, orient)
    dims = {v: rng.randint(0, max_dim) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        rows, cols = dims[a.target], dims[a.source]
        r = rng.randint(0, min(rows, cols))
        A = Matrix.from_rows([[_scalar(rng) for _ in range(r)] for _ in range(rows)], r)
        B = Matrix.from_rows([[_scalar(rng) for _ in range(cols)] for _ in range(r)], cols)
        maps[a.id] = A @ B
    return Rep(q, dims, maps)
