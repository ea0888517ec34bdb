"""Hom tables, endofiniteness certificates and Ziegler open sets, with points
of the spectrum represented by labels of indecomposable complexes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .anmod import HomResult, Unstable, hom_k_dim
from .classify import CanonLabel, realize_label


def label_hom(c: CanonLabel, m: CanonLabel, cap: Optional[int] = None) -> HomResult:
    return hom_k_dim(realize_label(c), realize_label(m), cap)


def hom_table(labels: list, cap: Optional[int] = None) -> list:
    """table[i][j] = stabilized dim Hom_K(label_i, label_j)."""
    return [[label_hom(a, b, cap) for b in labels] for a in labels]


def hom_table_json(labels: list, table: list) -> dict:
    return {
        "labels": [str(l) for l in labels],
        "table": [[cell.to_json() for cell in row] for row in table],
    }


def format_table(labels: list, table: list) -> str:
    names = [str(l) for l in labels]
    width = max([len(s) for s in names] + [4])
    lines = [" " * width + " | " + " ".join(s.rjust(width) for s in names)]
    lines.append("-" * len(lines[0]))
    for name, row in zip(names, table):
        cells = [(str(c.dim) if c.stable else "?").rjust(width) for c in row]
        lines.append(name.rjust(width) + " | " + " ".join(cells))
    return "\n".join(lines)


@dataclass
class Certificate:
    label: CanonLabel
    entries: list = field(default_factory=list)  # (probe, HomResult)

    @property
    def ok(self) -> bool:
        return all(r.stable for _, r in self.entries)

    def to_json(self) -> dict:
        return {
            "label": str(self.label),
            "ok": self.ok,
            "probes": [{"probe": str(p), **r.to_json(), "history": [list(h) for h in r.history]}
                       for p, r in self.entries],
        }


def bounded_probe_grid(n: int, lo: int, hi: int) -> list:
    return [CanonLabel(s, e, j, n) for s in range(lo, hi + 1) for e in range(s, hi + 1)
            for j in range(1, n + 1)]


def endofinite_certificate(label: CanonLabel, probes: Iterable[CanonLabel],
                           cap: Optional[int] = None) -> Certificate:
    """dim Hom_K(C, E) for every compact probe C, each with its stabilization
    history.  The certificate fails if any value does not stabilize."""
    cert = Certificate(label)
    for c in probes:
        if not c.bounded:
            raise ValueError(f"probe {c} is not a compact (bounded) label")
        cert.entries.append((c, label_hom(c, label, cap)))
    return cert


def open_set_membership(c: CanonLabel, m: CanonLabel, cap: Optional[int] = None) -> bool:
    """Is the point m in the open set attached to the compact object c?"""
    if not c.bounded:
        raise ValueError("open sets are attached to bounded labels")
    r = label_hom(c, m, cap)
    if not r.stable:
        raise Unstable(f"Hom_K({c}, {m}) did not stabilize: {r.history}")
    return r.dim > 0


def _generated_member(g: CanonLabel, m: CanonLabel, cap) -> bool:
    r = label_hom(g, m, cap)
    if not r.stable:
        raise Unstable(f"Hom_K({g}, {m}) did not stabilize: {r.history}")
    return r.dim > 0


def cover_analysis(opens: list, pool: list, subfamilies: Optional[list] = None,
                   cap: Optional[int] = None) -> dict:
    """Coverage of a pool of points by the open sets generated by ``opens``
    (membership of m in the set of g means Hom_K(g, m) != 0).

    Reports (a) which pool points are covered, (b) for every maximal proper
    subfamily a pool point it misses, and (c) for each finite subfamily in
    ``subfamilies`` (default: the whole list and the empty family) a point
    strictly to the left of all its generators that escapes every member.
    """
    member = {(g, m): _generated_member(g, m, cap) for g in opens for m in pool}
    uncovered = [m for m in pool if not any(member[(g, m)] for g in opens)]

    proper = []
    for k, g in enumerate(opens):
        rest = opens[:k] + opens[k + 1:]
        escape = next((m for m in pool if not any(member[(h, m)] for h in rest)), None)
        proper.append({"dropped": str(g), "escaping_point": None if escape is None else str(escape)})

    if subfamilies is None:
        subfamilies = [list(opens), []]
    finite = []
    for fam in subfamilies:
        n = opens[0].n if opens else (pool[0].n if pool else 1)
        left = min((int(g.start) for g in fam), default=0)
        point = CanonLabel(left - 3, left - 2, 1, n)
        escapes = not any(_generated_member(g, point, cap) for g in fam)
        finite.append({"family": [str(g) for g in fam], "point": str(point), "escapes": escapes})

    return {
        "covered": not uncovered,
        "uncovered": [str(m) for m in uncovered],
        "members": {str(g): [str(m) for m in pool if member[(g, m)]] for g in opens},
        "maximal_proper_subfamilies": proper,
        "finite_subfamilies": finite,
        "no_finite_subcover": all(p["escaping_point"] is not None for p in proper)
        and all(f["escapes"] for f in finite),
    }
