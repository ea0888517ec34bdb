"""Decomposition of complexes of injective A_n-modules into the indecomposables
I_{l,m}[r] = (sigma_{<=m} sigma_{>=l} I.)[r].

A label is stored in normal form ``(start, end, anchor)``: the support of the
complex is [start, end] and ``anchor`` is the index of the injective sitting
in degree ``start`` (in degree 0 when start = -inf).  Along the support the
injective index drops by one per degree.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Optional

from . import exactlin as el
from .anmod import (PERIODIC, ZERO, ChainMap, ComplexError, InjComplex, InjMap, cohomology_dims,
                    direct_sum_with_positions, pred, split_contractibles, unroll, zero_complex)
from .exactlin import Matrix
from .quiver import path_window
from .rep import Rep, decompose_with_bases

NEG_INF = -math.inf
POS_INF = math.inf


def _end(v):
    if v in ("-inf", "-infinity"):
        return NEG_INF
    if v in ("+inf", "inf", "+infinity"):
        return POS_INF
    if isinstance(v, float) and math.isinf(v):
        return v
    return int(v)


def _end_json(v):
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "+inf"
    return int(v)


@total_ordering
@dataclass(frozen=True)
class CanonLabel:
    start: float
    end: float
    anchor: int
    n: int = 1

    def __post_init__(self):
        if self.start == POS_INF or self.end == NEG_INF or self.start > self.end:
            raise ValueError(f"bad label support [{self.start}, {self.end}]")
        if not 1 <= self.anchor <= self.n:
            raise ValueError(f"anchor {self.anchor} outside 1..{self.n}")

    def _key(self):
        return (self.start, self.end, self.anchor, self.n)

    def __lt__(self, other):
        return self._key() < other._key()

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.start) or math.isinf(self.end))

    def type_at(self, i: int) -> int:
        base = 0 if self.start == NEG_INF else self.start
        return (self.anchor - 1 - (i - base)) % self.n + 1

    def shifted(self, r: int) -> "CanonLabel":
        """Label of X[r] (degrees move by -r)."""
        anchor = self.anchor if self.start != NEG_INF else self.type_at(r)
        return CanonLabel(self.start - r, self.end - r, anchor, self.n)

    def to_json(self, mult: Optional[int] = None) -> dict:
        d = {"start": _end_json(self.start), "end": _end_json(self.end), "anchor": self.anchor}
        if mult is not None:
            d["mult"] = mult
        return d

    @classmethod
    def from_json(cls, d: dict, n: int) -> "CanonLabel":
        return cls(_end(d["start"]), _end(d["end"]), int(d["anchor"]), n)

    def __str__(self):
        return f"{_end_json(self.start)},{_end_json(self.end)},{self.anchor}"

    @classmethod
    def parse(cls, s: str, n: int) -> "CanonLabel":
        parts = [p.strip() for p in s.split(",")]
        if len(parts) != 3:
            raise ValueError(f"label needs start,end,anchor: {s!r}")
        return cls(_end(parts[0]), _end(parts[1]), int(parts[2]), n)


def normalize(l, m, r: int, n: int) -> CanonLabel:
    """Normal form of I_{l,m}[r]; l may be -inf and m may be +inf."""
    l, m = _end(l), _end(m)
    if l > m:
        raise ValueError("I_{l,m} needs l <= m")
    if l == NEG_INF:
        anchor = (-r) % n + 1
    else:
        anchor = (-l) % n + 1
    return CanonLabel(l - r, m - r, anchor, n)


def labels_equivalent(t1, t2, n: int) -> bool:
    return normalize(*t1, n) == normalize(*t2, n)


def realize_label(label: CanonLabel, window: Optional[tuple] = None) -> InjComplex:
    """The indecomposable complex with the given label.

    Finite ends are always realized exactly.  Infinite ends become periodic
    tails, unrolled at least to the edge of ``window``.  A window missing the
    support gives the zero complex.
    """
    n = label.n
    s, e = label.start, label.end
    if window is not None:
        wlo, whi = window
        if wlo > whi:
            raise ValueError("empty window")
        if e < wlo or s > whi:
            return zero_complex(n)
    else:
        wlo = whi = None
    if s != NEG_INF:
        lo = s
    else:
        lo = min(wlo, e if e != POS_INF else wlo) if wlo is not None else (e if e != POS_INF else 0)
    if e != POS_INF:
        hi = e
    else:
        hi = max(whi, lo) if whi is not None else lo
    lo = int(lo)
    hi = int(hi)
    mult, diff = {}, {}
    for i in range(lo, hi + 1):
        m = [0] * n
        m[label.type_at(i) - 1] = 1
        mult[i] = tuple(m)
    for i in range(lo, hi):
        diff[i] = InjMap(n, (label.type_at(i),), (label.type_at(i + 1),), Matrix.zeros(1, 1), Matrix.identity(1))
    tails = (PERIODIC if s == NEG_INF else ZERO, PERIODIC if e == POS_INF else ZERO)
    return InjComplex(n, lo, hi, mult, diff, tails)


# ---------------------------------------------------------------------------
# strands

@dataclass
class Strand:
    residue: int
    rep: Rep
    # degree -> summand indices (in the complex) of the strand's vertex space
    members: dict


def strand_type(residue: int, degree: int, n: int) -> int:
    return (residue - degree - 1) % n + 1


def strands(x: InjComplex) -> list:
    """Split a complex with radical differentials into n path representations.

    Strand c collects the summands I_j in degree i with i + j = c (mod n); its
    arrow i -> i+1 is the d-coefficient block of the differential.
    """
    n = x.n
    for i in range(x.lo, x.hi):
        if not x.diff[i].is_radical():
            raise ComplexError(f"differential at degree {i} has identity components; strip first")
    out = []
    if x.lo > x.hi:
        return out
    q = path_window(x.hi - x.lo + 1, [True] * (x.hi - x.lo), x.lo)
    for c in range(n):
        members = {}
        for i in range(x.lo, x.hi + 1):
            j = strand_type(c, i, n)
            members[i] = [p for p, t in enumerate(x.types(i)) if t == j]
        dims = {i: len(members[i]) for i in members}
        maps = {f"e{i}": x.diff[i].rad.select_rows(members[i + 1]).select_columns(members[i])
                for i in range(x.lo, x.hi)}
        out.append(Strand(c, Rep(q, dims, maps), members))
    return out


# ---------------------------------------------------------------------------
# classification

@dataclass
class Classification:
    labels: Counter
    reduced: InjComplex
    realized: Optional[InjComplex] = None
    to_realized: Optional[ChainMap] = None
    from_realized: Optional[ChainMap] = None

    def to_json(self) -> dict:
        return {"labels": labels_to_json(self.labels)}


def labels_to_json(labels: Counter) -> list:
    return [lab.to_json(m) for lab, m in sorted(labels.items())]


def _interval_label(x: InjComplex, residue: int, a: int, b: int) -> CanonLabel:
    n = x.n
    start = NEG_INF if (a == x.lo and x.tails[0] == PERIODIC) else a
    end = POS_INF if (b == x.hi and x.tails[1] == PERIODIC) else b
    ref = 0 if start == NEG_INF else a
    return CanonLabel(start, end, strand_type(residue, ref, n), n)


def classify_complex(x: InjComplex) -> Counter:
    return classify(x, witness=False).labels


def classify(x: InjComplex, witness: bool = True) -> Classification:
    """Labels of the indecomposable summands of x, optionally with an explicit
    isomorphism in K to the direct sum of their realizations."""
    n = x.n
    if x.lo > x.hi:
        z = zero_complex(n)
        return Classification(Counter(), z, z)
    split = split_contractibles(x)
    y = split.stripped
    labels = Counter()
    parts = []  # (residue, Interval, occurrence) per realized summand
    decomp = []
    for st in strands(y):
        counts, bases, ivlabels = decompose_with_bases(st.rep)
        decomp.append((st, bases, ivlabels))
        for iv, mult in sorted(counts.items()):
            lab = _interval_label(y, st.residue, int(iv.a), int(iv.b))
            labels[lab] += mult
            for k in range(mult):
                parts.append((st.residue, iv, k + 1, lab))
    result = Classification(labels, y)
    if not witness:
        return result

    comps = [realize_label(lab, (x.lo, x.hi)) for _, _, _, lab in parts]
    z, positions = direct_sum_with_positions(*comps) if comps else (zero_complex(n), [])
    zu = unroll(z, x.lo, x.hi)
    index = {(c, iv, k): idx for idx, (c, iv, k, _) in enumerate(parts)}
    f_comps, g_comps = {}, {}
    for i in range(x.lo, x.hi + 1):
        xt, yt, zt = x.types(i), y.types(i), zu.types(i)
        keep = split.keep[i]
        f1 = split.P[i].select(keep, range(len(xt)))
        g1 = split.Pinv[i].select(range(len(xt)), keep)
        f2 = {}
        g2 = {}
        for st, bases, ivlabels in decomp:
            mem = st.members[i]
            if not mem:
                continue
            B = bases[i]
            Binv = el.inverse(B)
            seen = Counter()
            for t, iv in enumerate(ivlabels[i]):
                seen[iv] += 1
                part = index[(st.residue, iv, seen[iv])]
                zpos = positions[part][i][0]
                for r, ypos in enumerate(mem):
                    if Binv[t, r] != 0:
                        f2[(zpos, ypos)] = Binv[t, r]
                    if B[r, t] != 0:
                        g2[(ypos, zpos)] = B[r, t]
        f2m = InjMap.from_sparse(n, yt, zt, f2, {})
        g2m = InjMap.from_sparse(n, zt, yt, g2, {})
        f_comps[i] = f2m @ f1
        g_comps[i] = g1 @ g2m
    result.realized = zu
    result.to_realized = ChainMap(x, zu, f_comps, x.lo, x.hi)
    result.from_realized = ChainMap(zu, x, g_comps, x.lo, x.hi)
    return result


def realize_labels(labels: Counter, n: int, window: Optional[tuple] = None) -> InjComplex:
    comps = []
    for lab, mult in sorted(labels.items()):
        comps.extend([realize_label(lab, window)] * mult)
    if not comps:
        return zero_complex(n)
    return direct_sum_with_positions(*comps)[0]


def shift_labels(labels: Counter, r: int) -> Counter:
    return Counter({lab.shifted(r): m for lab, m in labels.items()})


# ---------------------------------------------------------------------------
# push-down along C_n -> C_1

def pushdown(x: InjComplex) -> InjComplex:
    """Forget the vertex grading: every I_j becomes Lambda = k[x]/(x^2), id stays
    id and d becomes multiplication by x."""
    mult = {i: (sum(m),) for i, m in x.mult.items()}
    diff = {}
    for i, d in x.diff.items():
        diff[i] = InjMap(1, (1,) * len(d.src), (1,) * len(d.tgt), d.ident, d.rad, check=False)
    return InjComplex(1, x.lo, x.hi, mult, diff, x.tails)


def pushdown_labels(labels: Counter) -> Counter:
    out = Counter()
    for lab, m in labels.items():
        out[CanonLabel(lab.start, lab.end, 1, 1)] += m
    return out


# ---------------------------------------------------------------------------
# counting by cohomology dimensions

def label_hdim(label: CanonLabel) -> dict:
    """Nonzero total cohomology dimensions of a bounded label."""
    if not label.bounded:
        raise ValueError("only bounded labels have finite cohomology")
    s, e = int(label.start), int(label.end)
    if s == e:
        return {s: 2}
    return {s: 1, e: 1}


@lru_cache(maxsize=None)
def _label_cohomology_cached(label: CanonLabel, field_name: str) -> tuple:
    x = realize_label(label)
    dims = cohomology_dims(x, x.lo - 1, x.hi + 1)
    return tuple((x.lo - 1 + k, v) for k, v in enumerate(dims) if v)


def _label_cohomology(label: CanonLabel) -> dict:
    """Nonzero dim H^i of a bounded label, computed from its realization."""
    return dict(_label_cohomology_cached(label, repr(el.get_field())))


def count_indecomposables_with_hdim(n: int, hdim, start: int = 0, margin: int = 2) -> tuple:
    """Bounded indecomposables X over A_n with dim H^i(X) = hdim[i - start].

    Degrees outside the given range must have zero cohomology.  Candidates are
    enumerated on the range widened by ``margin`` and each is filtered by its
    computed cohomology.  Returns (count, sorted labels).
    """
    vec = list(hdim)
    if any(v < 0 for v in vec):
        raise ValueError("cohomology dimensions must be non-negative")
    lo, hi = start, start + len(vec) - 1
    want = {start + k: v for k, v in enumerate(vec) if v}
    found = []
    for s in range(lo - margin, hi + margin + 1):
        for e in range(s, hi + margin + 1):
            for j in range(1, n + 1):
                lab = CanonLabel(s, e, j, n)
                if _label_cohomology(lab) == want:
                    found.append(lab)
    return len(found), sorted(found)
