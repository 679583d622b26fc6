"""Sparse length matrices from contraction trees.

A precision profile fixes the interleaving budget: a relative error ``eps1``,
an absolute error ``eps0`` induced by truncating to the N most significant
points, and the radius cap R.  The induced shift map is

    psi(r) = min(R, r + max(eps0, eps1 * r))

and the per-point edge cutoffs are the contraction times scaled by
``q(r) = (2 + 2/eps1) * r`` (infinite when eps1 == 0, i.e. keep everything).

The sparsifier walks the pair tree rooted at (0, 0) whose nodes are index
pairs (a, b), a <= b; the parent of a pair is obtained by replacing its
larger member with that member's tree parent.  At pair (i, j) with the
parent pair known non-missing, with dd = d(x_i, x_j), dp = d(x_i, parent x_j)
and t = cutoff of x_j, the cases are

  (d) t >= max(dd,dp): edge kept at its true length dd, recurse
  (b) t <= dp:         edge missing, implied length dp, subtree pruned
  (c) dp < t < dd:     edge missing, implied length t, subtree pruned

with (d) deciding the measure-zero tie t == dp >= dd toward keeping (this
is what guarantees that parent edges, where dp == 0, are never missing).
With a missing parent pair, case (a), the whole subtree is missing and is
never visited.  Implied lengths exist only as a quadratic-memory test
oracle; the production path never materializes them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .covertree import ContractionTree
from .errors import InputError

INF = math.inf


@dataclass
class PrecisionProfile:
    """Interleaving budget plus the evaluable maps psi, psi_inv, q, q_inv.

    ``times`` holds the per-retained-point edge cutoffs (index 0 is the
    root's, always infinite); ``n`` is the original point count and ``N``
    the retained count.
    """

    R: float
    eps0: float
    eps1: float
    N: int
    n: int
    T: float | None = None
    times: list = field(default=None, repr=False, compare=False)

    def psi(self, r):
        """Shift map: how far scales may move under sparsification."""
        if r == INF:
            return INF
        if self.T is not None and r > self.T:
            return self.R
        return min(self.R, r + max(self.eps0, self.eps1 * r))

    def psi_inv(self, x):
        """Smallest preimage of x under the uncapped shift map (0 below eps0)."""
        if x == INF:
            return INF
        if x <= self.eps0:
            return 0.0
        if self.eps1 == 0.0 or x <= (1.0 + 1.0 / self.eps1) * self.eps0:
            return x - self.eps0
        return x / (1.0 + self.eps1)

    def q(self, r):
        """Cutoff scaling applied to contraction times."""
        if self.eps1 == 0.0:
            return INF if r > 0 else 0.0
        if r == INF:
            return INF
        return (2.0 + 2.0 / self.eps1) * r

    def q_inv(self, r):
        """Projection-error bound at scale r for the truncated, scaled tree."""
        if r == INF:
            return INF
        half_eps0 = self.eps0 / 2.0
        if self.eps1 == 0.0:
            return min(r, half_eps0)
        factor = 2.0 + 2.0 / self.eps1
        if r >= factor * half_eps0:
            return r / factor
        if r >= half_eps0:
            return half_eps0
        return r

    def as_meta(self):
        return {
            "n": self.n,
            "N": self.N,
            "eps0": self.eps0,
            "eps1": self.eps1,
            "R": self.R,
            "T": self.T,
        }

    @classmethod
    def from_meta(cls, meta):
        return cls(
            R=float(meta["R"]),
            eps0=float(meta["eps0"]),
            eps1=float(meta["eps1"]),
            N=int(meta["N"]),
            n=int(meta["n"]),
            T=None if meta.get("T") is None else float(meta["T"]),
        )


def make_profile(ctree: ContractionTree, keep=None, eps1=0.0, threshold=None):
    """Profile for retaining the ``keep`` most significant points of a tree.

    Returns (profile, cutoffs).  ``eps0`` is twice the contraction time of
    the first discarded point (0 when nothing is discarded); cutoffs are the
    scaled times of the retained points, all infinite when eps1 == 0 so that
    every retained pair stays connected.
    """
    size = ctree.size
    n_keep = size if keep is None else int(keep)
    if not 1 <= n_keep <= size:
        raise InputError(f"keep = {n_keep} out of range 1..{size}")
    if eps1 < 0:
        raise InputError("eps1 must be nonnegative")
    radius = ctree.times[1] if size > 1 else 0.0
    eps0 = 2.0 * ctree.times[n_keep] if n_keep < size else 0.0
    profile = PrecisionProfile(R=radius, eps0=eps0, eps1=float(eps1),
                               N=n_keep, n=size, T=threshold)
    if eps1 == 0.0:
        cutoffs = [INF] * n_keep
    else:
        cutoffs = [profile.q(t) for t in ctree.times[:n_keep]]
    profile.times = cutoffs
    return profile, cutoffs


@dataclass
class SparseLengthMatrix:
    """Symmetric edge list over the retained points, stored once with i < j.

    Every listed edge carries the exact oracle distance; absent pairs are
    implicitly missing (infinite length).
    """

    size: int
    edges: list
    profile: PrecisionProfile

    def full_edge_count(self):
        return self.size * (self.size - 1) // 2


def _check_profile(ctree, profile):
    if profile.n != ctree.size:
        raise InputError("profile was built for a different tree")
    if profile.times is None or len(profile.times) != profile.N:
        raise InputError("profile is missing its cutoff times")


def sparsify(ctree: ContractionTree, oracle, profile: PrecisionProfile) -> SparseLengthMatrix:
    """Emit the kept edges of the pair-tree traversal, sorted by (i, j)."""
    _check_profile(ctree, profile)
    cutoff = profile.times
    n_keep = profile.N
    order = ctree.order
    parent = ctree.parent
    children = ctree.children
    edges = []
    # stack entries: a pair (a, b) with non-missing edge and its length
    stack = [(0, 0, 0.0)]
    while stack:
        a, b, dab = stack.pop()
        if a != b and parent[b] == a:
            stack.append((b, b, 0.0))
        for c in children[b]:
            if c >= n_keep:
                continue
            _consider(a, c, dab, cutoff, order, oracle, edges, stack)
        if a != b:
            for c in children[a]:
                if b < c < n_keep:
                    _consider(b, c, dab, cutoff, order, oracle, edges, stack)
    if profile.T is not None:
        edges = [e for e in edges if e[2] <= profile.T]
    edges.sort()
    return SparseLengthMatrix(size=n_keep, edges=edges, profile=profile)


def _consider(u, v, dp, cutoff, order, oracle, edges, stack):
    # u < v; v is the tree child; dp is the parent pair's length
    t = cutoff[v]
    if t >= dp:
        dd = oracle.eval(order[u], order[v])
        if t >= dd:  # case (d)
            edges.append((u, v, dd))
            stack.append((u, v, dd))
    # cases (b) and (c): edge missing, subtree pruned


@dataclass
class ImpliedLengths:
    """Full implied-length matrix (test oracle; quadratic memory)."""

    lbar: np.ndarray
    missing: np.ndarray

    def kept_edges(self):
        n = self.lbar.shape[0]
        return [
            (i, j, float(self.lbar[i, j]))
            for i in range(n)
            for j in range(i + 1, n)
            if not self.missing[i, j]
        ]


def implied_lengths(ctree: ContractionTree, oracle, profile: PrecisionProfile) -> ImpliedLengths:
    """Implied lengths for every retained pair via the unpruned recursion."""
    _check_profile(ctree, profile)
    cutoff = profile.times
    n_keep = profile.N
    order = ctree.order
    lbar = np.zeros((n_keep, n_keep))
    missing = np.zeros((n_keep, n_keep), dtype=bool)
    for j in range(1, n_keep):
        pj = ctree.parent[j]
        tj = cutoff[j]
        for i in range(j):
            if i == pj:
                pp_missing, pp_lbar, dp = False, 0.0, 0.0
            else:
                a, b = (i, pj) if i < pj else (pj, i)
                pp_missing, pp_lbar = missing[a, b], lbar[a, b]
                dp = oracle.eval(order[i], order[pj])
            dd = oracle.eval(order[i], order[j])
            if pp_missing:                  # case (a)
                miss, val = True, pp_lbar
            elif tj >= dp and tj >= dd:     # case (d), wins the t == dp tie
                miss, val = False, dd
            elif tj <= dp:                  # case (b)
                miss, val = True, dp
            else:                           # case (c): dp < t < dd
                miss, val = True, tj
            missing[i, j] = missing[j, i] = miss
            lbar[i, j] = lbar[j, i] = val
    return ImpliedLengths(lbar=lbar, missing=missing)


def count_simplices(matrix: SparseLengthMatrix, dim_cap: int):
    """Clique counts of the edge graph, per dimension 0..dim_cap."""
    if dim_cap < 0:
        raise InputError("dim_cap must be nonnegative")
    above = [set() for _ in range(matrix.size)]
    for i, j, _w in matrix.edges:
        above[i].add(j)
    counts = [matrix.size] + [0] * dim_cap

    def grow(cands, dim):
        for v in cands:
            counts[dim] += 1
            if dim < dim_cap:
                grow(cands & above[v], dim + 1)

    for v in range(matrix.size):
        if dim_cap >= 1:
            grow(above[v], 1)
    return counts


def _meta_path(path):
    return Path(path).with_suffix(".meta.json")


def write_sparse(path, matrix: SparseLengthMatrix, config=None):
    """Write "i j d" lines plus the {n, N, eps0, eps1, R, T} sidecar."""
    with open(path, "w") as fh:
        for i, j, w in matrix.edges:
            fh.write(f"{i} {j} {w!r}\n")
    meta = matrix.profile.as_meta()
    if config is not None:
        meta["config"] = config
    with open(_meta_path(path), "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_sparse(path) -> SparseLengthMatrix:
    meta_path = _meta_path(path)
    if not meta_path.exists():
        raise InputError(f"missing metadata sidecar {meta_path}")
    with open(meta_path) as fh:
        meta = json.load(fh)
    profile = PrecisionProfile.from_meta(meta)
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            toks = text.split()
            if len(toks) != 3:
                raise InputError(f"{path}:{lineno}: expected 'i j d'")
            try:
                i, j, w = int(toks[0]), int(toks[1]), float(toks[2])
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            if not 0 <= i < j < profile.N:
                raise InputError(f"{path}:{lineno}: edge ({i}, {j}) out of range")
            edges.append((i, j, w))
    edges.sort()
    return SparseLengthMatrix(size=profile.N, edges=edges, profile=profile)
