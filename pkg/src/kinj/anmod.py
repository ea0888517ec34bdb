"""The algebras A_n and windowed complexes of injective A_n-modules.

Conventions:

* The indecomposable injective I_j (j = 1..n) has basis (top, socle); its top
  lives at vertex j-1 (cyclically) and its socle at vertex j.
* ``d_j: I_j -> I_{j-1}`` sends top to socle.  Every morphism between
  indecomposable injectives is ``a*id + b*d`` where only the coefficients the
  types allow are nonzero (``id`` needs equal types, ``d`` needs target type
  one below the source type; for n = 1 both are allowed).
* Complexes are graded cohomologically, ``d^i: X^i -> X^{i+1}``.  The summands
  of X^i are ordered by type, ascending, repeated by multiplicity.
* ``X[r]^i = X^{i+r}`` with the same differentials (no sign).
* A periodic lower tail continues every summand at the lowest degree of the
  window downwards as a strand of the periodic complex; an upper tail does the
  same upwards.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from . import exactlin as el
from .exactlin import Matrix
from .quiver import cycle_quiver
from .rep import Rep, hom_space

ZERO, PERIODIC = "zero", "periodic"


class ComplexError(ValueError):
    pass


class Unstable(RuntimeError):
    """A windowed Hom computation failed to stabilize within the window cap."""


def pred(j: int, n: int) -> int:
    """Index of the cyclic predecessor: I_j --d--> I_{pred(j)}."""
    return (j - 2) % n + 1


def succ(j: int, n: int) -> int:
    return j % n + 1


def max_window() -> int:
    return int(os.environ.get("KINJ_MAX_WINDOW", "64"))


# ---------------------------------------------------------------------------
# the algebra

class AnAlgebra:
    """A_n = kC_n / (all paths of length 2), with its injectives and Hom bases.

    The Hom bases are found by solving for module homomorphisms between the
    two-dimensional representations I_j, then identified with ``id`` / ``d``.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        self.n = n
        self.quiver = cycle_quiver(n)
        self.injectives = {j: self._injective(j) for j in range(1, n + 1)}
        self.hom_dims = {}
        self.hom_basis = {}
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                basis = hom_space(self.injectives[j], self.injectives[k])
                self.hom_dims[(j, k)] = len(basis)
                self.hom_basis[(j, k)] = self._name_basis(j, k, basis)

    def _injective(self, j: int) -> Rep:
        n = self.n
        top, soc = pred(j, n), j
        if n == 1:
            return Rep(self.quiver, {1: 2}, {"a1": Matrix.from_rows([[0, 0], [1, 0]])})
        dims = {v: 0 for v in range(1, n + 1)}
        dims[top] += 1
        dims[soc] += 1
        maps = {f"a{top}": Matrix.from_rows([[1]])}
        return Rep(self.quiver, dims, maps)

    def to_top_socle(self, j: int, k: int, phi: dict) -> Matrix:
        """2x2 matrix of a module map I_j -> I_k in the (top, socle) bases."""
        n = self.n
        if n == 1:
            return phi[1]
        m = [[0, 0], [0, 0]]
        src = {"top": pred(j, n), "soc": j}
        tgt = {"top": pred(k, n), "soc": k}
        for ci, cs in enumerate(("top", "soc")):
            for ri, rs in enumerate(("top", "soc")):
                if src[cs] == tgt[rs]:
                    v = src[cs]
                    # index of the basis vector inside the vertex space
                    si = 0 if (cs == "top" or src["top"] != v) else 1
                    ti = 0 if (rs == "top" or tgt["top"] != v) else 1
                    m[ri][ci] = phi[v][ti, si]
        return Matrix.from_rows(m)

    def _name_basis(self, j: int, k: int, basis: list) -> list:
        mats = [self.to_top_socle(j, k, phi) for phi in basis]
        names = []
        if mats:
            stacked = Matrix.from_rows([[m[0, 0], m[0, 1], m[1, 0], m[1, 1]] for m in mats])
            ident = Matrix.from_rows([[1, 0, 0, 1]])
            rad = Matrix.from_rows([[0, 0, 1, 0]])
            r = el.rank(stacked)
            if el.rank(stacked.vstack(ident)) == r:
                names.append("id")
            if el.rank(stacked.vstack(rad)) == r:
                names.append("d")
            if len(names) != r:
                raise AssertionError(f"Hom(I_{j}, I_{k}) is not spanned by id / d")
        return names

    def kinds(self, j: int, k: int) -> tuple:
        """Allowed coefficient kinds for a map I_j -> I_k: subset of (0 = id, 1 = d)."""
        out = []
        if j == k:
            out.append(0)
        if k == pred(j, self.n):
            out.append(1)
        return tuple(out)

    def __repr__(self):
        return f"AnAlgebra({self.n})"


_ALGEBRAS = {}


def build_algebra(n: int) -> AnAlgebra:
    if n not in _ALGEBRAS:
        _ALGEBRAS[n] = AnAlgebra(n)
    return _ALGEBRAS[n]


ID2 = ((1, 0), (0, 1))
NIL2 = ((0, 0), (1, 0))


# ---------------------------------------------------------------------------
# morphisms between direct sums of indecomposable injectives

class InjMap:
    """A map  (+)_q I_{src[q]} -> (+)_p I_{tgt[p]}  written as ident*id + rad*d."""

    __slots__ = ("n", "src", "tgt", "ident", "rad")

    def __init__(self, n: int, src, tgt, ident: Optional[Matrix] = None, rad: Optional[Matrix] = None,
                 check: bool = True):
        self.n = n
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        shape = (len(self.tgt), len(self.src))
        self.ident = ident if ident is not None else Matrix.zeros(*shape)
        self.rad = rad if rad is not None else Matrix.zeros(*shape)
        if self.ident.shape != shape or self.rad.shape != shape:
            raise ComplexError(f"InjMap block shape mismatch, expected {shape}")
        if check:
            for p, t in enumerate(self.tgt):
                for q, s in enumerate(self.src):
                    if self.ident[p, q] != 0 and t != s:
                        raise ComplexError(f"id component between I_{s} and I_{t}")
                    if self.rad[p, q] != 0 and t != pred(s, n):
                        raise ComplexError(f"d component from I_{s} to I_{t}")

    @classmethod
    def zero(cls, n, src, tgt):
        return cls(n, src, tgt, check=False)

    @classmethod
    def identity(cls, n, types):
        return cls(n, types, types, Matrix.identity(len(types)), None, check=False)

    @classmethod
    def from_sparse(cls, n, src, tgt, ident: dict, rad: dict, check=True):
        shape = (len(tgt), len(src))
        return cls(n, src, tgt, Matrix.from_sparse(*shape, ident), Matrix.from_sparse(*shape, rad), check)

    def compose(self, other: "InjMap") -> "InjMap":
        """self o other."""
        if other.tgt != self.src:
            raise ComplexError("composing InjMaps with mismatched summands")
        ident = self.ident @ other.ident
        rad = self.ident @ other.rad + self.rad @ other.ident
        return InjMap(self.n, other.src, self.tgt, ident, rad, check=False)

    __matmul__ = compose

    def __add__(self, other):
        return InjMap(self.n, self.src, self.tgt, self.ident + other.ident, self.rad + other.rad, check=False)

    def __sub__(self, other):
        return InjMap(self.n, self.src, self.tgt, self.ident - other.ident, self.rad - other.rad, check=False)

    def __neg__(self):
        return InjMap(self.n, self.src, self.tgt, -self.ident, -self.rad, check=False)

    def scale(self, c):
        return InjMap(self.n, self.src, self.tgt, self.ident.scale(c), self.rad.scale(c), check=False)

    def is_zero(self) -> bool:
        return self.ident.is_zero() and self.rad.is_zero()

    def is_radical(self) -> bool:
        return self.ident.is_zero()

    def __eq__(self, other):
        return (isinstance(other, InjMap) and self.src == other.src and self.tgt == other.tgt
                and self.ident == other.ident and self.rad == other.rad)

    def select(self, rows, cols) -> "InjMap":
        rows, cols = list(rows), list(cols)
        return InjMap(self.n, [self.src[c] for c in cols], [self.tgt[r] for r in rows],
                      self.ident.select_rows(rows).select_columns(cols),
                      self.rad.select_rows(rows).select_columns(cols), check=False)

    def expand(self) -> Matrix:
        """k-linear matrix on the (top, socle) bases of all summands."""
        entries = {}
        for p in range(len(self.tgt)):
            for q in range(len(self.src)):
                a, b = self.ident[p, q], self.rad[p, q]
                if a != 0:
                    entries[(2 * p, 2 * q)] = a
                    entries[(2 * p + 1, 2 * q + 1)] = a
                if b != 0:
                    entries[(2 * p + 1, 2 * q)] = b
        return Matrix.from_sparse(2 * len(self.tgt), 2 * len(self.src), entries)

    def to_json(self) -> dict:
        return {"id": self.ident.to_json(), "d": self.rad.to_json()}

    def __repr__(self):
        return f"InjMap({self.src}->{self.tgt}, id={self.ident.tolist()}, d={self.rad.tolist()})"


def injmap_direct_sum(maps: list, n: int) -> InjMap:
    src = sum((m.src for m in maps), ())
    tgt = sum((m.tgt for m in maps), ())
    return InjMap(n, src, tgt, el.direct_sum(*(m.ident for m in maps)),
                  el.direct_sum(*(m.rad for m in maps)), check=False)


def _scalar_inverse(a, b, n):
    """Inverse of a*id + b*d in End(I_j) (b can be nonzero only for n = 1)."""
    f = el.get_field()
    ai = f.inv(a)
    return ai, f.reduce(-b * ai * ai)


# ---------------------------------------------------------------------------
# complexes

def types_of(mult) -> tuple:
    out = []
    for j, m in enumerate(mult, start=1):
        out.extend([j] * m)
    return tuple(out)


class InjComplex:
    """A complex of injective A_n-modules on the window [lo, hi].

    ``mult[i]`` is the multiplicity vector (m_1..m_n) at degree i and
    ``diff[i]`` the InjMap X^i -> X^{i+1} for lo <= i < hi.  ``tails`` gives
    the continuation below lo and above hi: "zero" or "periodic".
    An empty window (lo > hi) is the zero complex.
    """

    def __init__(self, n: int, lo: int, hi: int, mult: dict, diff: Optional[dict] = None,
                 tails=(ZERO, ZERO), check: bool = True):
        self.n = n
        self.algebra = build_algebra(n)
        self.lo, self.hi = lo, hi
        self.mult = {}
        for i in range(lo, hi + 1):
            m = tuple(int(x) for x in mult.get(i, (0,) * n))
            if len(m) != n or any(x < 0 for x in m):
                raise ComplexError(f"bad multiplicity vector at degree {i}: {m}")
            self.mult[i] = m
        extra = set(mult) - set(range(lo, hi + 1))
        if any(any(mult[i]) for i in extra):
            raise ComplexError("multiplicities outside the window")
        self.tails = tuple(tails)
        if any(t not in (ZERO, PERIODIC) for t in self.tails):
            raise ComplexError(f"unknown tail flags {tails}")
        diff = dict(diff or {})
        self.diff = {}
        for i in range(lo, hi):
            src, tgt = self.types(i), self.types(i + 1)
            d = diff.pop(i, None)
            if d is None:
                d = InjMap.zero(n, src, tgt)
            if d.src != src or d.tgt != tgt:
                raise ComplexError(f"differential at degree {i} does not match the terms")
            self.diff[i] = d
        if any(not d.is_zero() for d in diff.values()):
            raise ComplexError("differentials outside the window")
        if check:
            self.validate()

    def validate(self):
        for i in range(self.lo, self.hi - 1):
            if not (self.diff[i + 1] @ self.diff[i]).is_zero():
                raise ComplexError(f"d^{i + 1} d^{i} != 0")
        if self.lo <= self.hi:
            if self.tails[0] == PERIODIC and self.lo < self.hi and not self.diff[self.lo].is_radical():
                raise ComplexError("periodic lower tail needs a radical differential out of the lowest degree")
            if self.tails[1] == PERIODIC and self.lo < self.hi and not self.diff[self.hi - 1].is_radical():
                raise ComplexError("periodic upper tail needs a radical differential into the highest degree")

    # structure
    def types(self, i: int) -> tuple:
        if self.lo <= i <= self.hi:
            return types_of(self.mult[i])
        return ()

    def d(self, i: int) -> InjMap:
        if self.lo <= i < self.hi:
            return self.diff[i]
        return InjMap.zero(self.n, self.types(i), self.types(i + 1))

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi or all(sum(self.mult[i]) == 0 for i in range(self.lo, self.hi + 1))

    @property
    def bounded(self) -> bool:
        return self.tails == (ZERO, ZERO) or self.is_empty

    def support(self) -> list:
        return [i for i in range(self.lo, self.hi + 1) if sum(self.mult[i])]

    def __repr__(self):
        return (f"InjComplex(n={self.n}, [{self.lo},{self.hi}], "
                f"mult={ {i: m for i, m in self.mult.items() if any(m)} }, tails={self.tails})")

    def __eq__(self, other):
        if not isinstance(other, InjComplex):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return (a.n == b.n and a.lo == b.lo and a.hi == b.hi and a.tails == b.tails
                and a.mult == b.mult and a.diff == b.diff)

    def trimmed(self) -> "InjComplex":
        """Drop zero terms at the window ends that carry a zero tail."""
        lo, hi = self.lo, self.hi
        if self.tails[0] == ZERO:
            while lo <= hi and not any(self.mult[lo]):
                lo += 1
        if self.tails[1] == ZERO:
            while hi >= lo and not any(self.mult[hi]):
                hi -= 1
        if lo > hi:
            return zero_complex(self.n)
        return self._window(lo, hi)

    def _window(self, lo, hi) -> "InjComplex":
        return InjComplex(self.n, lo, hi, {i: self.mult[i] for i in range(lo, hi + 1)},
                          {i: self.diff[i] for i in range(lo, hi)}, self.tails, check=False)

    def expanded_d(self, i: int) -> Matrix:
        return self.d(i).expand()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "window": [self.lo, self.hi],
            "mult": {str(i): list(m) for i, m in self.mult.items()},
            "diff": {str(i): d.to_json() for i, d in self.diff.items()},
            "tails": list(self.tails),
        }

    @classmethod
    def from_json(cls, d: dict) -> "InjComplex":
        n = int(d["n"])
        lo, hi = (int(x) for x in d["window"])
        mult = {int(k): tuple(v) for k, v in d.get("mult", {}).items()}
        diff = {}
        for k, blk in d.get("diff", {}).items():
            i = int(k)
            src, tgt = types_of(mult.get(i, (0,) * n)), types_of(mult.get(i + 1, (0,) * n))
            ident = Matrix.from_json(blk.get("id", []), len(src)) if blk.get("id") else None
            rad = Matrix.from_json(blk.get("d", []), len(src)) if blk.get("d") else None
            if ident is None:
                ident = Matrix.zeros(len(tgt), len(src))
            if rad is None:
                rad = Matrix.zeros(len(tgt), len(src))
            diff[i] = InjMap(n, src, tgt, ident, rad)
        tails = tuple(d.get("tails", (ZERO, ZERO)))
        return cls(n, lo, hi, mult, diff, tails)


def zero_complex(n: int) -> InjComplex:
    return InjComplex(n, 0, -1, {})


def periodic_type(i: int, n: int, offset: int = 0) -> int:
    """Type of the periodic complex I^. (I_1 in degree 0, descending) at degree i."""
    return (-i - offset) % n + 1


def periodic_complex(n: int, lo: int = 0, hi: int = 0) -> InjComplex:
    """The periodic complex I^. viewed through the window [lo, hi], both tails periodic."""
    mult, diff = {}, {}
    for i in range(lo, hi + 1):
        m = [0] * n
        m[periodic_type(i, n) - 1] = 1
        mult[i] = tuple(m)
    for i in range(lo, hi):
        s, t = periodic_type(i, n), periodic_type(i + 1, n)
        diff[i] = InjMap(n, (s,), (t,), Matrix.zeros(1, 1), Matrix.identity(1))
    return InjComplex(n, lo, hi, mult, diff, (PERIODIC, PERIODIC))


def _rotate(mult, step, n):
    """Multiplicity vector whose type-j entry is mult's type (j - step) entry."""
    return tuple(mult[(j - 1 - step) % n] for j in range(1, n + 1))


def _tail_map(src_types, tgt_types, n, partner) -> InjMap:
    """Diagonal d-map pairing summand q of the source with summand partner[q] of the target."""
    rad = {(partner[q], q): 1 for q in range(len(src_types))}
    return InjMap.from_sparse(n, src_types, tgt_types, {}, rad)


def _pairing(src_types, tgt_types, n, down: bool) -> list:
    """partner[q] for the tail map: summands matched in order within each type."""
    used = {}
    out = []
    for s in src_types:
        want = pred(s, n)
        k = used.get(want, 0)
        used[want] = k + 1
        idx = [p for p, t in enumerate(tgt_types) if t == want][k]
        out.append(idx)
    return out


def unroll(x: InjComplex, lo: int, hi: int) -> InjComplex:
    """The same complex on a window containing [lo, hi], unrolling periodic tails."""
    if x.lo > x.hi:
        return InjComplex(x.n, lo, hi, {}, {}, (ZERO, ZERO), check=False)
    n = x.n
    mult = dict(x.mult)
    diff = dict(x.diff)
    new_lo, new_hi = min(lo, x.lo), max(hi, x.hi)
    for i in range(x.lo - 1, new_lo - 1, -1):
        if x.tails[0] == PERIODIC:
            mult[i] = _rotate(mult[i + 1], 1, n)
            src, tgt = types_of(mult[i]), types_of(mult[i + 1])
            diff[i] = _tail_map(src, tgt, n, _pairing(src, tgt, n, True))
        else:
            mult[i] = (0,) * n
            diff[i] = InjMap.zero(n, (), types_of(mult[i + 1]))
    for i in range(x.hi + 1, new_hi + 1):
        if x.tails[1] == PERIODIC:
            mult[i] = _rotate(mult[i - 1], -1, n)
            src, tgt = types_of(mult[i - 1]), types_of(mult[i])
            diff[i - 1] = _tail_map(src, tgt, n, _pairing(src, tgt, n, False))
        else:
            mult[i] = (0,) * n
            diff[i - 1] = InjMap.zero(n, types_of(mult[i - 1]), ())
    return InjComplex(n, new_lo, new_hi, mult, diff, x.tails, check=False)


def shift(x: InjComplex, r: int) -> InjComplex:
    """X[r]: degree i holds X^{i+r}."""
    return InjComplex(x.n, x.lo - r, x.hi - r, {i - r: m for i, m in x.mult.items()},
                      {i - r: d for i, d in x.diff.items()}, x.tails, check=False)


def truncate_below(x: InjComplex, l: int) -> InjComplex:
    """Brutal truncation sigma_{>= l}."""
    if x.is_empty:
        return zero_complex(x.n)
    if l > x.hi and x.tails[1] == ZERO:
        return zero_complex(x.n)
    y = unroll(x, l, l)
    hi = y.hi
    return InjComplex(x.n, l, hi, {i: y.mult[i] for i in range(l, hi + 1)},
                      {i: y.diff[i] for i in range(l, hi)}, (ZERO, x.tails[1]), check=False)


def truncate_above(x: InjComplex, m: int) -> InjComplex:
    """Brutal truncation sigma_{<= m}."""
    if x.is_empty:
        return zero_complex(x.n)
    if m < x.lo and x.tails[0] == ZERO:
        return zero_complex(x.n)
    y = unroll(x, m, m)
    lo = y.lo
    return InjComplex(x.n, lo, m, {i: y.mult[i] for i in range(lo, m + 1)},
                      {i: y.diff[i] for i in range(lo, m)}, (x.tails[0], ZERO), check=False)


def truncate(x: InjComplex, l: Optional[int], m: Optional[int]) -> InjComplex:
    """sigma_{<= m} sigma_{>= l}; None leaves that side untouched."""
    if l is not None and m is not None and l > m:
        raise ComplexError("truncation needs l <= m")
    y = x
    if l is not None:
        y = truncate_below(y, l)
    if m is not None:
        y = truncate_above(y, m)
    return y


def complex_direct_sum(*xs: InjComplex) -> InjComplex:
    return direct_sum_with_positions(*xs)[0]


def direct_sum_with_positions(*xs: InjComplex) -> tuple:
    """Direct sum, plus for each summand complex and degree the positions its
    terms occupy in the sum (terms are re-sorted by type)."""
    n = xs[0].n
    parts = [x.trimmed() for x in xs]
    live = [x for x in parts if not x.is_empty]
    if not live:
        return zero_complex(n), [dict() for _ in xs]
    lows = [x.lo for x in live]
    highs = [x.hi for x in live]
    lo, hi = min(lows), max(highs)
    if any(x.tails[0] == PERIODIC for x in live) and any(x.tails[0] == ZERO and x.lo == lo for x in live):
        lo -= 1
    if any(x.tails[1] == PERIODIC for x in live) and any(x.tails[1] == ZERO and x.hi == hi for x in live):
        hi += 1
    tails = (PERIODIC if any(x.tails[0] == PERIODIC for x in live) else ZERO,
             PERIODIC if any(x.tails[1] == PERIODIC for x in live) else ZERO)
    ups = [unroll(x, lo, hi) if not x.is_empty else None for x in parts]
    mult, positions = {}, [dict() for _ in xs]
    perm = {}
    for i in range(lo, hi + 1):
        tagged = []
        for k, u in enumerate(ups):
            if u is None:
                continue
            for q, t in enumerate(u.types(i)):
                tagged.append((t, k, q))
        order = sorted(tagged)
        perm[i] = order
        m = [0] * n
        for t, _, _ in order:
            m[t - 1] += 1
        mult[i] = tuple(m)
        for pos, (t, k, q) in enumerate(order):
            positions[k].setdefault(i, {})[q] = pos
    diff = {}
    for i in range(lo, hi):
        src, tgt = types_of(mult[i]), types_of(mult[i + 1])
        ident, rad = {}, {}
        for k, u in enumerate(ups):
            if u is None:
                continue
            d = u.d(i)
            for p in range(len(d.tgt)):
                for q in range(len(d.src)):
                    P, Q = positions[k][i + 1][p], positions[k][i][q]
                    if d.ident[p, q] != 0:
                        ident[(P, Q)] = d.ident[p, q]
                    if d.rad[p, q] != 0:
                        rad[(P, Q)] = d.rad[p, q]
        diff[i] = InjMap.from_sparse(n, src, tgt, ident, rad, check=False)
    return InjComplex(n, lo, hi, mult, diff, tails), positions


# ---------------------------------------------------------------------------
# cohomology

def cohomology_dims(x: InjComplex, lo: Optional[int] = None, hi: Optional[int] = None,
                    per_vertex: bool = False):
    """dim H^i for i in [lo, hi] (defaults to the window), from expanded ranks.

    With ``per_vertex`` each entry is the dimension vector of H^i as an
    A_n-module (a list indexed by vertex 1..n).
    """
    lo = x.lo if lo is None else lo
    hi = x.hi if hi is None else hi
    y = unroll(x, lo - 1, hi + 1)
    out = []
    for i in range(lo, hi + 1):
        if not per_vertex:
            dim = 2 * len(y.types(i))
            out.append(dim - el.rank(y.expanded_d(i)) - el.rank(y.expanded_d(i - 1)))
            continue
        vec = []
        for v in range(1, x.n + 1):
            rows_i = _vertex_coords(y.types(i), v, x.n)
            rows_next = _vertex_coords(y.types(i + 1), v, x.n)
            rows_prev = _vertex_coords(y.types(i - 1), v, x.n)
            out_m = y.expanded_d(i).select_rows(rows_next).select_columns(rows_i)
            in_m = y.expanded_d(i - 1).select_rows(rows_i).select_columns(rows_prev)
            vec.append(len(rows_i) - el.rank(out_m) - el.rank(in_m))
        out.append(vec)
    return out


def _vertex_coords(types, v, n) -> list:
    out = []
    for q, t in enumerate(types):
        if pred(t, n) == v:
            out.append(2 * q)
        if t == v:
            out.append(2 * q + 1)
    return out


# ---------------------------------------------------------------------------
# Hom in the homotopy category

def _coords(src, tgt, n) -> list:
    out = []
    for p, t in enumerate(tgt):
        for q, s in enumerate(src):
            if t == s:
                out.append((p, q, 0))
            if t == pred(s, n):
                out.append((p, q, 1))
    return out


class _Space:
    """Coordinates of a graded family of InjMaps, one block per degree."""

    def __init__(self, n, blocks: dict):
        self.n = n
        self.blocks = blocks  # degree -> (src, tgt)
        self.index = {}
        self.entries = []
        for i in sorted(blocks):
            src, tgt = blocks[i]
            for p, q, k in _coords(src, tgt, n):
                self.index[(i, p, q, k)] = len(self.entries)
                self.entries.append((i, p, q, k))

    def __len__(self):
        return len(self.entries)

    def vector(self, maps: dict) -> list:
        vec = [0] * len(self.entries)
        for idx, (i, p, q, k) in enumerate(self.entries):
            m = maps.get(i)
            if m is not None:
                vec[idx] = (m.ident if k == 0 else m.rad)[p, q]
        return vec

    def unpack(self, vec) -> dict:
        out = {}
        for i in sorted(self.blocks):
            src, tgt = self.blocks[i]
            ident, rad = {}, {}
            for p, q, k in _coords(src, tgt, self.n):
                v = vec[self.index[(i, p, q, k)]]
                if v != 0:
                    (ident if k == 0 else rad)[(p, q)] = v
            out[i] = InjMap.from_sparse(self.n, src, tgt, ident, rad, check=False)
        return out

    def degree_rows(self, degrees) -> list:
        ds = set(degrees)
        return [idx for idx, e in enumerate(self.entries) if e[0] in ds]


def _accumulate(entries: dict, col: int, space: _Space, deg: int, m: InjMap, sign=1):
    for (p, q), val in _nonzero(m.ident):
        entries[(space.index[(deg, p, q, 0)], col)] = entries.get((space.index[(deg, p, q, 0)], col), 0) + sign * val
    for (p, q), val in _nonzero(m.rad):
        entries[(space.index[(deg, p, q, 1)], col)] = entries.get((space.index[(deg, p, q, 1)], col), 0) + sign * val


def _nonzero(m: Matrix):
    for p in range(m.rows):
        row = m.row(p)
        for q, v in enumerate(row):
            if v != 0:
                yield (p, q), v


def _unit(n, src, tgt, p, q, k) -> InjMap:
    return InjMap.from_sparse(n, src, tgt, {(p, q): 1} if k == 0 else {}, {(p, q): 1} if k == 1 else {},
                              check=False)


@dataclass
class HomSystem:
    """Linear algebra of maps X -> Y on the degrees [lo, hi].

    ``F`` holds degree-0 maps f_i (i in [lo, hi]), ``H`` homotopies
    h_i: X^i -> Y^{i-1} (i in [lo, hi+1]).  ``commute`` sends f to the
    defects d_Y f_i - f_{i+1} d_X on interior squares; ``boundary`` sends h
    to d_Y h + h d_X.
    """

    x: InjComplex
    y: InjComplex
    lo: int
    hi: int
    F: _Space = field(init=False)
    H: _Space = field(init=False)
    commute: Matrix = field(init=False)
    boundary: Matrix = field(init=False)

    def __post_init__(self):
        n = self.x.n
        x = unroll(self.x, self.lo - 1, self.hi + 1)
        y = unroll(self.y, self.lo - 1, self.hi + 1)
        self.ux, self.uy = x, y
        lo, hi = self.lo, self.hi
        self.F = _Space(n, {i: (x.types(i), y.types(i)) for i in range(lo, hi + 1)})
        self.H = _Space(n, {i: (x.types(i), y.types(i - 1)) for i in range(lo, hi + 2)})
        E = _Space(n, {i: (x.types(i), y.types(i + 1)) for i in range(lo, hi)})
        entries = {}
        for col, (i, p, q, k) in enumerate(self.F.entries):
            u = _unit(n, x.types(i), y.types(i), p, q, k)
            if i < hi:
                _accumulate(entries, col, E, i, y.d(i) @ u)
            if i - 1 >= lo:
                _accumulate(entries, col, E, i - 1, u @ x.d(i - 1), -1)
        self.commute = Matrix.from_sparse(len(E), len(self.F), entries)
        entries = {}
        for col, (i, p, q, k) in enumerate(self.H.entries):
            u = _unit(n, x.types(i), y.types(i - 1), p, q, k)
            if lo <= i <= hi:
                _accumulate(entries, col, self.F, i, y.d(i - 1) @ u)
            if lo <= i - 1 <= hi:
                _accumulate(entries, col, self.F, i - 1, u @ x.d(i - 1))
        self.boundary = Matrix.from_sparse(len(self.F), len(self.H), entries)

    def cycles(self) -> Matrix:
        return el.kernel_basis(self.commute)

    def boundaries(self) -> Matrix:
        return el.column_space(self.boundary)

    def restricted_rank(self, m: Matrix, lo: int, hi: int) -> int:
        return el.rank(m.select_rows(self.F.degree_rows(range(lo, hi + 1))))


@dataclass
class ChainMap:
    """Degree-wise InjMaps between two complexes on the degrees [lo, hi]."""

    source: InjComplex
    target: InjComplex
    comps: dict
    lo: int
    hi: int

    def component(self, i: int) -> InjMap:
        if i in self.comps and self.lo <= i <= self.hi:
            return self.comps[i]
        x = unroll(self.source, i, i)
        y = unroll(self.target, i, i)
        return InjMap.zero(self.source.n, x.types(i), y.types(i))

    def is_chain_map(self) -> bool:
        x = unroll(self.source, self.lo - 1, self.hi + 1)
        y = unroll(self.target, self.lo - 1, self.hi + 1)
        lo = self.lo - 1 if self.source.bounded and self.target.bounded else self.lo
        hi = self.hi if self.source.bounded and self.target.bounded else self.hi - 1
        for i in range(lo, hi + 1):
            if not (y.d(i) @ self.component(i) - self.component(i + 1) @ x.d(i)).is_zero():
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        comps = {i: self.component(i) @ other.component(i) for i in range(lo, hi + 1)}
        return ChainMap(other.source, self.target, comps, lo, hi)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        comps = {i: self.component(i) - other.component(i) for i in range(self.lo, self.hi + 1)}
        return ChainMap(self.source, self.target, comps, self.lo, self.hi)

    def homotopy(self) -> Optional[dict]:
        """A homotopy h with self = d h + h d on [lo, hi], or None."""
        sys = HomSystem(self.source, self.target, self.lo, self.hi)
        rhs = Matrix.from_columns([sys.F.vector(self.comps)], len(sys.F))
        sol = el.solve(sys.boundary, rhs)
        if sol is None:
            return None
        return sys.H.unpack(sol.column(0))

    def is_null_homotopic(self) -> bool:
        return self.homotopy() is not None


def identity_map(x: InjComplex, lo: int, hi: int) -> ChainMap:
    y = unroll(x, lo, hi)
    return ChainMap(x, x, {i: InjMap.identity(x.n, y.types(i)) for i in range(lo, hi + 1)}, lo, hi)


def hull(x: InjComplex, y: InjComplex) -> tuple:
    wins = [(c.lo, c.hi) for c in (x, y) if c.lo <= c.hi]
    if not wins:
        return (0, 0)
    return (min(w[0] for w in wins), max(w[1] for w in wins))


def chain_map_basis(x: InjComplex, y: InjComplex, window: Optional[tuple] = None) -> list:
    lo, hi = window or hull(x, y)
    sys = HomSystem(x, y, lo, hi)
    K = sys.cycles()
    return [ChainMap(x, y, sys.F.unpack(K.column(c)), lo, hi) for c in range(K.cols)]


def null_homotopic_basis(x: InjComplex, y: InjComplex, window: Optional[tuple] = None) -> list:
    lo, hi = window or hull(x, y)
    sys = HomSystem(x, y, lo, hi)
    B = sys.boundaries()
    return [ChainMap(x, y, sys.F.unpack(B.column(c)), lo, hi) for c in range(B.cols)]


def hom_k_at(x: InjComplex, y: InjComplex, pad: int) -> int:
    """Windowed dim Hom_K(X, Y): maps on the hull padded by 2*pad, restricted to
    the hull padded by pad."""
    lo, hi = hull(x, y)
    sys = HomSystem(x, y, lo - 2 * pad, hi + 2 * pad)
    Z = sys.cycles()
    B = sys.boundaries()
    return sys.restricted_rank(Z, lo - pad, hi + pad) - sys.restricted_rank(B, lo - pad, hi + pad)


@dataclass(frozen=True)
class HomResult:
    dim: Optional[int]
    stable_at: Optional[int]
    history: tuple

    @property
    def stable(self) -> bool:
        return self.dim is not None

    def to_json(self) -> dict:
        if not self.stable:
            return {"dim": None, "stableAt": None, "unstable": True, "history": list(self.history)}
        return {"dim": self.dim, "stableAt": self.stable_at}


def hom_k_dim(x: InjComplex, y: InjComplex, cap: Optional[int] = None) -> HomResult:
    """dim_k Hom_K(X, Y) with stabilization over the padding schedule 2n, 4n, ...

    Returns the first value that repeats on two consecutive paddings; if the
    padding cap (KINJ_MAX_WINDOW) is reached first the result is unstable.
    """
    cap = max_window() if cap is None else cap
    step = 2 * x.n
    if x.bounded and y.bounded and 2 * step <= cap:
        # every map and homotopy lives on the hull, so each padding gives the
        # same value; one exact solve stands for the whole schedule
        lo, hi = hull(x, y)
        sys = HomSystem(x, y, lo, hi)
        dim = len(sys.F) - el.rank(sys.commute) - el.rank(sys.boundary)
        return HomResult(dim, 2 * step, ((step, dim), (2 * step, dim)))
    hist = []
    pad = step
    while pad <= cap:
        hist.append((pad, hom_k_at(x, y, pad)))
        if len(hist) >= 2 and hist[-1][1] == hist[-2][1]:
            return HomResult(hist[-1][1], pad, tuple(hist))
        pad += step
    return HomResult(None, None, tuple(hist))


def end_k_algebra(x: InjComplex) -> tuple:
    """Basis of End_K(X) for a bounded X, as chain maps, plus the boundary span.

    Returns (representatives, system, boundary_matrix) where representatives
    complete a basis of the boundaries to a basis of the cycles.
    """
    if not x.bounded:
        raise ComplexError("End_K is computed exactly only for bounded complexes")
    lo, hi = hull(x, x)
    sys = HomSystem(x, x, lo, hi)
    Z = sys.cycles()
    B = sys.boundaries()
    reps = []
    cur = B
    for c in range(Z.cols):
        col = Z.select_columns([c])
        trial = cur.hstack(col)
        if el.rank(trial) > el.rank(cur):
            reps.append(ChainMap(x, x, sys.F.unpack(col.column(0)), lo, hi))
            cur = trial
    return reps, sys, B


# ---------------------------------------------------------------------------
# splitting off contractible summands

@dataclass
class Splitting:
    """Result of split_contractibles.

    ``P[i]`` and ``Pinv[i]`` are mutually inverse automorphisms of X^i with
    P_{i+1} d_X P_i^{-1} equal to ``reduced`` plus contractible pairs;
    ``keep[i]`` lists the summand indices of X^i that survive.
    """

    x: InjComplex
    stripped: InjComplex
    P: dict
    Pinv: dict
    keep: dict
    pairs: list


def split_contractibles(x: InjComplex) -> Splitting:
    n = x.n
    f = el.get_field()
    lo, hi = x.lo, x.hi
    types = {i: x.types(i) for i in range(lo, hi + 1)}
    # mutable sparse copies: D[i] = (ident dict, rad dict), keyed (p, q)
    D = {i: _to_dicts(x.d(i)) for i in range(lo, hi)}
    P = {i: _to_dicts(InjMap.identity(n, types[i])) for i in range(lo, hi + 1)}
    Pinv = {i: _to_dicts(InjMap.identity(n, types[i])) for i in range(lo, hi + 1)}
    alive = {i: set(range(len(types[i]))) for i in range(lo, hi + 1)}
    pairs = []
    while True:
        found = None
        for i in range(lo, hi):
            ident = D[i][0]
            cands = sorted((q, p) for (p, q), v in ident.items()
                           if v != 0 and p in alive[i + 1] and q in alive[i])
            if cands:
                q, p = cands[0]
                found = (i, p, q)
                break
        if found is None:
            break
        i, p, q = found
        a = D[i][0][(p, q)]
        b = D[i][1].get((p, q), 0)
        ua, ub = _scalar_inverse(a, b, n)
        # row operations on degree i+1: clear column q of d^i outside row p
        rows = sorted({r for (r, c) in list(D[i][0]) + list(D[i][1]) if c == q and r != p})
        for r in rows:
            # c = -d[r,q] o u^{-1}
            ca, cb = _elem_compose((D[i][0].get((r, q), 0), D[i][1].get((r, q), 0)), (ua, ub), f)
            ca, cb = f.reduce(-ca), f.reduce(-cb)
            if ca == 0 and cb == 0:
                continue
            _row_op(D, P, Pinv, i, r, p, (ca, cb), f, lo, hi)
        cols = sorted({c for (r, c) in list(D[i][0]) + list(D[i][1]) if r == p and c != q})
        for s in cols:
            # c = -u^{-1} o d[p,s]
            ca, cb = _elem_compose((ua, ub), (D[i][0].get((p, s), 0), D[i][1].get((p, s), 0)), f)
            ca, cb = f.reduce(-ca), f.reduce(-cb)
            if ca == 0 and cb == 0:
                continue
            _col_op(D, P, Pinv, i, q, s, (ca, cb), f, lo, hi)
        alive[i].discard(q)
        alive[i + 1].discard(p)
        pairs.append((i, q, p))
    keep = {i: sorted(alive[i]) for i in range(lo, hi + 1)}
    mats = {i: _from_dicts(n, types[i], types[i + 1], D[i]) for i in range(lo, hi)}
    mult, diff = {}, {}
    for i in range(lo, hi + 1):
        m = [0] * n
        for q in keep[i]:
            m[types[i][q] - 1] += 1
        mult[i] = tuple(m)
    for i in range(lo, hi):
        diff[i] = mats[i].select(keep[i + 1], keep[i])
    stripped = InjComplex(n, lo, hi, mult, diff, x.tails)
    Pm = {i: _from_dicts(n, types[i], types[i], P[i]) for i in range(lo, hi + 1)}
    Pim = {i: _from_dicts(n, types[i], types[i], Pinv[i]) for i in range(lo, hi + 1)}
    return Splitting(x, stripped, Pm, Pim, keep, pairs)


def strip_contractibles(x: InjComplex) -> InjComplex:
    """Remove all contractible summands 0 -> I --id--> I -> 0; the result has
    purely radical differentials and is isomorphic to x in K."""
    return split_contractibles(x).stripped


def _to_dicts(m: InjMap) -> tuple:
    return (dict(_nonzero(m.ident)), dict(_nonzero(m.rad)))


def _from_dicts(n, src, tgt, dd) -> InjMap:
    return InjMap.from_sparse(n, src, tgt, dd[0], dd[1], check=False)


def _elem_compose(e1, e2, f):
    """(a1 + b1 d) o (a2 + b2 d) as coefficient pairs."""
    return f.reduce(e1[0] * e2[0]), f.reduce(e1[0] * e2[1] + e1[1] * e2[0])


def _add_scaled_row(mat, dst, src, c, f):
    """row dst += c o row src (c acting on the left)."""
    ident, rad = mat
    for (r, col), v in list(ident.items()):
        if r == src:
            a, b = _elem_compose(c, (v, 0), f)
            _bump(ident, (dst, col), a, f)
            _bump(rad, (dst, col), b, f)
    for (r, col), v in list(rad.items()):
        if r == src:
            a, b = _elem_compose(c, (0, v), f)
            _bump(rad, (dst, col), b, f)


def _add_scaled_col(mat, dst, src, c, f):
    """column dst += column src o c."""
    ident, rad = mat
    for (r, col), v in list(ident.items()):
        if col == src:
            a, b = _elem_compose((v, 0), c, f)
            _bump(ident, (r, dst), a, f)
            _bump(rad, (r, dst), b, f)
    for (r, col), v in list(rad.items()):
        if col == src:
            a, b = _elem_compose((0, v), c, f)
            _bump(rad, (r, dst), b, f)


def _bump(d, key, val, f):
    if val == 0:
        return
    nv = f.reduce(d.get(key, 0) + val)
    if nv == 0:
        d.pop(key, None)
    else:
        d[key] = nv


def _row_op(D, P, Pinv, i, r, p, c, f, lo, hi):
    """Base change E = 1 + c e_{rp} on degree i+1."""
    neg = (f.reduce(-c[0]), f.reduce(-c[1]))
    _add_scaled_row(D[i], r, p, c, f)
    if i + 1 < hi:
        _add_scaled_col(D[i + 1], p, r, neg, f)
    _add_scaled_row(P[i + 1], r, p, c, f)
    _add_scaled_col(Pinv[i + 1], p, r, neg, f)


def _col_op(D, P, Pinv, i, q, s, c, f, lo, hi):
    """Base change with d <- d F, F = 1 + c e_{qs} on degree i."""
    neg = (f.reduce(-c[0]), f.reduce(-c[1]))
    _add_scaled_col(D[i], s, q, c, f)
    if i - 1 >= lo:
        _add_scaled_row(D[i - 1], q, s, neg, f)
    _add_scaled_col(Pinv[i], s, q, c, f)
    _add_scaled_row(P[i], q, s, neg, f)


def _combine_maps(basis: list, coeffs) -> dict:
    out = {}
    for cm, c in zip(basis, coeffs):
        if c == 0:
            continue
        for i in range(cm.lo, cm.hi + 1):
            term = cm.comps[i].scale(c)
            out[i] = out[i] + term if i in out else term
    return out


def _solves_identity(z: InjComplex, products: list, lo: int, hi: int) -> Optional[list]:
    """Coefficients c with sum c_k products_k - id_Z null-homotopic on [lo, hi]."""
    sys = HomSystem(z, z, lo, hi)
    cols = [sys.F.vector(p.comps) for p in products]
    A = Matrix.from_columns(cols, len(sys.F)) if cols else Matrix.zeros(len(sys.F), 0)
    A = A.hstack(sys.boundary.scale(-1))
    rhs = Matrix.from_columns([sys.F.vector(identity_map(z, lo, hi).comps)], len(sys.F))
    sol = el.solve(A, rhs)
    return None if sol is None else list(sol.column(0)[: len(products)])


def _full_map(x, y, comps, lo, hi) -> ChainMap:
    ux, uy = unroll(x, lo, hi), unroll(y, lo, hi)
    for i in range(lo, hi + 1):
        comps.setdefault(i, InjMap.zero(x.n, ux.types(i), uy.types(i)))
    return ChainMap(x, y, comps, lo, hi)


def find_k_isomorphism(x: InjComplex, y: InjComplex, rng=None, tries: int = 3) -> Optional[tuple]:
    """Mutually inverse maps (f, g) in K between bounded complexes, or None.

    A random chain map f: X -> Y is tested by solving linearly for a left and
    a right homotopy inverse; both exist exactly when f is an isomorphism in
    K.  A false negative needs every sampled f to be a non-isomorphism.
    """
    import random as _random

    if not (x.bounded and y.bounded):
        raise ComplexError("isomorphism search needs bounded complexes")
    rng = rng or _random.Random(0)
    f_field = el.get_field()
    lo, hi = hull(x, y)
    fwd = chain_map_basis(x, y, (lo, hi))
    back = chain_map_basis(y, x, (lo, hi))
    for _ in range(max(tries, 1)):
        coeffs = [f_field.convert(rng.randint(-1000, 1000)) for _ in fwd]
        f = _full_map(x, y, _combine_maps(fwd, coeffs), lo, hi)
        left = _solves_identity(x, [g.compose(f) for g in back], lo, hi)
        if left is None:
            continue
        if _solves_identity(y, [f.compose(g) for g in back], lo, hi) is not None:
            return f, _full_map(y, x, _combine_maps(back, left), lo, hi)
    return None
