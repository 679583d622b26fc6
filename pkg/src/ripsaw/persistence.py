"""Desk-scale persistent homology over prime fields.

``build_filtration`` enumerates the flag filtration of a (sparse or full)
length matrix up to a simplex-dimension cap; ``reduce`` runs the textbook
boundary-matrix column reduction and reports one diagram entry per
persistence pair.  ``normal_form`` decomposes an explicitly given persistence
module into intervals, and ``ranks_from_barcode`` / ``barcode_from_ranks``
convert between interval multiplicities and the rank table.

Conventions: a simplex of diameter w enters the filtration at scales r > w,
so entries mean "feature present for r in (birth, death]".  Vertices are
born at 0.  Zero-length pairs (birth == death) are dropped.  Homology is
reported for dimensions strictly below the enumerated simplex-dimension cap
(computing dimension k needs the k+1 simplices as killers); dimension 0 is
always reported.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ResourceGuardError
from .sparsify import SparseLengthMatrix

INF = math.inf

MAX_SIMPLICES_ENV = "RIPSAW_MAX_SIMPLICES"
DEFAULT_MAX_SIMPLICES = 2_000_000


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _simplex_budget(max_simplices):
    if max_simplices is not None:
        return max_simplices
    env = os.environ.get(MAX_SIMPLICES_ENV)
    return int(env) if env else DEFAULT_MAX_SIMPLICES


@dataclass
class Filtration:
    """Simplices as (vertex tuple, diameter), sorted by
    (diameter, dimension, vertex order); every face precedes its cofaces."""

    simplices: list
    dim_cap: int
    n: int


def _edge_data(lengths, threshold):
    """Normalize input to (point count, {(i, j): length} with i < j)."""
    if isinstance(lengths, SparseLengthMatrix):
        n = lengths.size
        pairs = {(i, j): w for i, j, w in lengths.edges}
    else:
        arr = np.asarray(lengths, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputError("expected a square matrix or SparseLengthMatrix")
        n = arr.shape[0]
        pairs = {
            (i, j): float(arr[i, j])
            for i in range(n)
            for j in range(i + 1, n)
            if math.isfinite(arr[i, j])
        }
    if threshold is not None:
        pairs = {e: w for e, w in pairs.items() if w <= threshold}
    return n, pairs


def build_filtration(lengths, dim_cap, threshold=None, max_simplices=None) -> Filtration:
    """Enumerate all cliques with at most dim_cap+1 vertices.

    Missing (infinite) edges block cliques.  Refuses with
    ``ResourceGuardError`` once the enumeration exceeds the cap given by
    ``max_simplices`` or the RIPSAW_MAX_SIMPLICES environment variable.
    """
    if dim_cap < 0:
        raise InputError("dim_cap must be nonnegative")
    budget = _simplex_budget(max_simplices)
    n, weight = _edge_data(lengths, threshold)
    above = [[] for _ in range(n)]
    for (i, j) in weight:
        above[i].append(j)
    for nbrs in above:
        nbrs.sort()

    simplices = [((v,), 0.0) for v in range(n)]
    count = n
    if count > budget:
        raise ResourceGuardError(
            f"simplex count exceeds cap {budget} at {count} vertices", count=count)

    def grow(verts, diam, cands):
        nonlocal count
        for v in cands:
            d2 = diam
            for u in verts:
                w = weight[(u, v)]
                if w > d2:
                    d2 = w
            count += 1
            if count > budget:
                raise ResourceGuardError(
                    f"simplex count exceeds cap {budget} "
                    f"(aborted after {count} simplices)", count=count)
            new = verts + (v,)
            simplices.append((new, d2))
            if len(new) <= dim_cap:
                grow(new, d2, [u for u in cands if u > v and (v, u) in weight])

    if dim_cap >= 1:
        for v in range(n):
            grow((v,), 0.0, above[v])
    simplices.sort(key=lambda sd: (sd[1], len(sd[0]), sd[0]))
    return Filtration(simplices=simplices, dim_cap=dim_cap, n=n)


@dataclass(frozen=True)
class DiagramEntry:
    dim: int
    birth: float
    death: float


@dataclass
class PersistenceDiagram:
    """Per-dimension multiset of (birth, death] entries over Z_p."""

    field_char: int
    entries: list

    def dims(self):
        return sorted({e.dim for e in self.entries})

    def pairs(self, dim):
        """The (birth, death) pairs of one homological dimension."""
        return [(e.birth, e.death) for e in self.entries if e.dim == dim]

    def to_json_dict(self, meta=None):
        return {
            "field": self.field_char,
            "entries": [
                {
                    "dim": e.dim,
                    "birth": e.birth,
                    "death": "inf" if e.death == INF else e.death,
                }
                for e in self.entries
            ],
            "meta": meta if meta is not None else {},
        }

    @classmethod
    def from_json_dict(cls, data):
        entries = [
            DiagramEntry(
                dim=int(e["dim"]),
                birth=float(e["birth"]),
                death=INF if e["death"] == "inf" else float(e["death"]),
            )
            for e in data["entries"]
        ]
        return cls(field_char=int(data["field"]), entries=entries)

    def to_text(self):
        lines = []
        for e in self.entries:
            death = "inf" if e.death == INF else repr(e.death)
            lines.append(f"{e.dim} {e.birth!r} {death}")
        return "\n".join(lines) + "\n"


def dump_diagram(path, diagram: PersistenceDiagram, meta=None):
    with open(path, "w") as fh:
        json.dump(diagram.to_json_dict(meta), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_diagram(path):
    with open(path) as fh:
        data = json.load(fh)
    return PersistenceDiagram.from_json_dict(data), data.get("meta", {})


def _sorted_entries(entries):
    return sorted(entries, key=lambda e: (e.dim, e.birth, e.death))


def reduce(filtration: Filtration, p: int) -> PersistenceDiagram:
    """Column-reduce the boundary matrix over Z_p.

    Emits (diameter of creator, diameter of killer] per finite pair and
    death = inf for essential classes, for dimensions up to
    ``filtration.dim_cap - 1`` (dimension 0 when the cap is 0).
    """
    if not is_prime(p):
        raise InputError(f"field characteristic {p} is not prime")
    simplices = filtration.simplices
    report_cap = max(0, filtration.dim_cap - 1)
    index = {verts: k for k, (verts, _d) in enumerate(simplices)}
    if p == 2:
        cols = [
            {index[verts[:k] + verts[k + 1:]] for k in range(len(verts))}
            if len(verts) > 1 else set()
            for verts, _d in simplices
        ]
        pivots = _reduce_mod2(cols)
        empties = [j for j, col in enumerate(cols) if not col]
    else:
        cols = []
        for verts, _d in simplices:
            col = {}
            if len(verts) > 1:
                for k in range(len(verts)):
                    col[index[verts[:k] + verts[k + 1:]]] = (-1) ** k % p
            cols.append(col)
        pivots = _reduce_modp(cols, p)
        empties = [j for j, col in enumerate(cols) if not col]

    entries = []
    killed = set()
    for low, j in pivots.items():
        killed.add(low)
        verts, birth = simplices[low]
        death = simplices[j][1]
        dim = len(verts) - 1
        if birth != death and dim <= report_cap:
            entries.append(DiagramEntry(dim=dim, birth=birth, death=death))
    for j in empties:
        if j in killed:
            continue
        verts, birth = simplices[j]
        dim = len(verts) - 1
        if dim <= report_cap:
            entries.append(DiagramEntry(dim=dim, birth=birth, death=INF))
    return PersistenceDiagram(field_char=p, entries=_sorted_entries(entries))


def _reduce_mod2(cols):
    pivots = {}
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            k = pivots.get(low)
            if k is None:
                pivots[low] = j
                break
            col ^= cols[k]
    return pivots


def _reduce_modp(cols, p):
    pivots = {}
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            k = pivots.get(low)
            if k is None:
                pivots[low] = j
                break
            other = cols[k]
            factor = col[low] * pow(other[low], -1, p) % p
            for row, c in other.items():
                v = (col.get(row, 0) - factor * c) % p
                if v:
                    col[row] = v
                else:
                    col.pop(row, None)
    return pivots


# --- explicit persistence modules -----------------------------------------

@dataclass
class ExplicitModule:
    """Spaces V(0..L) over Z_p given by dims, with maps[c]: V(c) -> V(c+1)."""

    dims: list
    maps: list
    p: int

    def __post_init__(self):
        if len(self.maps) != len(self.dims) - 1:
            raise InputError("need one map per consecutive pair of spaces")
        for c, m in enumerate(self.maps):
            m = np.asarray(m, dtype=np.int64) % self.p
            if m.shape != (self.dims[c + 1], self.dims[c]):
                raise InputError(f"map {c} has shape {m.shape}, "
                                 f"expected {(self.dims[c + 1], self.dims[c])}")
            self.maps[c] = m

    @property
    def length(self):
        return len(self.dims) - 1


def rref_mod(mat, p):
    """Row-reduced echelon form over Z_p; returns (matrix, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        sel = None
        for i in range(r, rows):
            if a[i, c] % p:
                sel = i
                break
        if sel is None:
            continue
        a[[r, sel]] = a[[sel, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(mat, p):
    a = np.asarray(mat)
    if a.size == 0:
        return 0
    _, pivots = rref_mod(a, p)
    return len(pivots)


def kernel_mod(mat, p):
    """Basis vectors (as rows) of the kernel of ``mat`` over Z_p."""
    a = np.asarray(mat, dtype=np.int64)
    cols = a.shape[1]
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    red, pivots = rref_mod(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, fc]) % p
    return basis


class _Span:
    """Incremental span membership over Z_p via a growing echelon basis."""

    def __init__(self, dim, p):
        self.p = p
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots = []

    def add_if_independent(self, vec):
        v = np.array(vec, dtype=np.int64) % self.p
        for row, piv in zip(self.rows, self.pivots):
            if v[piv]:
                v = (v - v[piv] * row) % self.p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = v * pow(int(v[piv]), -1, self.p) % self.p
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(piv)
        return True


def normal_form(module: ExplicitModule):
    """Interval multiplicities N[(b, d)] of an explicit module.

    Sweeps births b ascending (b = -1 is "present from the start") and
    deaths d ascending; at (b, d) it extracts vectors of V(b+1) that die
    after step d (kernel of the composed map into V(d+1), everything when
    d is the final index), are independent of the vectors already collected
    in V(b+1), and records their forward orbits.
    """
    p = module.p
    length = module.length
    spans = [_Span(dim, p) for dim in module.dims]
    counts = {}
    for b in range(-1, length):
        start = b + 1
        dim_start = module.dims[start]
        if dim_start == 0:
            continue
        # composed[c] = map from V(start) to V(c), c >= start
        composed = {start: np.eye(dim_start, dtype=np.int64)}
        for c in range(start + 1, length + 1):
            composed[c] = module.maps[c - 1] @ composed[c - 1] % p
        for d in range(start, length + 1):
            if d < length:
                killer = module.maps[d] @ composed[d] % p
                candidates = kernel_mod(killer, p)
            else:
                candidates = np.eye(dim_start, dtype=np.int64)
            for vec in candidates:
                if not spans[start].add_if_independent(vec):
                    continue
                counts[(b, d)] = counts.get((b, d), 0) + 1
                for c in range(start + 1, d + 1):
                    spans[c].add_if_independent(composed[c] @ vec % p)
    return counts


def ranks_from_barcode(intervals, length):
    """Rank table r[s, t] = number of intervals with b < s <= t <= d,
    for 0 <= s <= t <= length.  ``intervals`` maps (b, d) to multiplicity."""
    r = np.zeros((length + 1, length + 1), dtype=np.int64)
    for (b, d), mult in intervals.items():
        for s in range(max(b + 1, 0), min(d, length) + 1):
            for t in range(s, min(d, length) + 1):
                r[s, t] += mult
    return r


def barcode_from_ranks(ranks):
    """Invert the rank table by inclusion-exclusion:
    N[b, d] = r[b+1, d] - r[b+1, d+1] - r[b, d] + r[b, d+1]."""
    ranks = np.asarray(ranks)
    length = ranks.shape[0] - 1

    def get(s, t):
        if s < 0 or t > length or s > t:
            return 0
        return int(ranks[s, t])

    intervals = {}
    for b in range(-1, length):
        for d in range(b + 1, length + 1):
            n = get(b + 1, d) - get(b + 1, d + 1) - get(b, d) + get(b, d + 1)
            if n < 0:
                raise InputError(f"inconsistent rank table at interval ({b}, {d}]")
            if n:
                intervals[(b, d)] = n
    return intervals
