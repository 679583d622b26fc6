"""Independent test oracles, deliberately written from scratch so they share
no code path with the implementations they check."""

import itertools
import math

import numpy as np

from ripsaw.persistence import barcode_from_ranks

INF = math.inf


# --- cover tree: exhaustive parent search ------------------------------------

def brute_force_parent(tree, oracle, x):
    """Scan every node; valid candidates satisfy 2 d(x, y) <= d(y, parent y).
    Ties in distance go to the lowest node index."""
    best, best_d = -1, INF
    for y in range(tree.size):
        d = oracle.eval(x, y)
        if 2.0 * d <= tree.parent_dist[y] and d < best_d:
            best, best_d = y, d
    return best, best_d


# --- mod-p linear algebra (fresh implementation) ------------------------------

def _eliminate(rows, p):
    """Forward elimination over Z_p; returns (echelon matrix, pivot columns)."""
    a = np.array(rows, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def gauss_rank(rows, p):
    if not len(rows):
        return 0
    _, pivots = _eliminate(rows, p)
    return len(pivots)


def gauss_kernel(rows, p):
    """Kernel basis (as rows) of the matrix whose rows are given."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if ncols == 0:
        return []
    if nrows == 0:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    work, pivots = _eliminate(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for rr, pc in enumerate(pivots):
            vec[pc] = int(-work[rr, fc]) % p
        basis.append(vec)
    return basis


def random_invertible(rng, n, p):
    while True:
        a = rng.integers(0, p, size=(n, n))
        if gauss_rank(a.tolist(), p) == n:
            return a


# --- brute-force persistence oracle -------------------------------------------

def brute_force_diagram(dist, hom_cap, p):
    """Diagram of a full distance matrix via chain-level ranks.

    For every pair of critical scales the persistent rank of the map on
    homology is computed directly as rank([Z_s | B_t]) - rank(B_t) over Z_p;
    the rank tables are then inverted by inclusion-exclusion.  No column
    reduction, no shared filtration code.

    Returns {dim: sorted list of (birth, death)} with death = inf for
    essential classes.
    """
    dist = np.asarray(dist, dtype=float)
    n = dist.shape[0]
    scales = sorted({0.0} | {float(dist[i, j]) for i in range(n) for j in range(i + 1, n)})
    last = len(scales) - 1

    def diameter(verts):
        if len(verts) == 1:
            return 0.0
        return max(float(dist[a, b]) for a, b in itertools.combinations(verts, 2))

    simplices = {}
    for k in range(hom_cap + 2):
        simplices[k] = [(verts, diameter(verts))
                        for verts in itertools.combinations(range(n), k + 1)]
    index = {k: {verts: i for i, (verts, _d) in enumerate(simplices[k])}
             for k in simplices}

    def boundary(k):
        """Rows: (k-1)-simplices of the full complex, columns: k-simplices."""
        mat = [[0] * len(simplices[k]) for _ in simplices[k - 1]]
        for j, (verts, _d) in enumerate(simplices[k]):
            for drop in range(len(verts)):
                face = verts[:drop] + verts[drop + 1:]
                mat[index[k - 1][face]][j] = (-1) ** drop % p
        return mat

    result = {}
    for k in range(hom_cap + 1):
        diam_k = [d for (_v, d) in simplices[k]]
        diam_k1 = [d for (_v, d) in simplices[k + 1]]
        bd_k = boundary(k) if k > 0 else None
        bd_k1 = boundary(k + 1)
        nk = len(simplices[k])

        cycles = []
        for s in scales:
            present = [j for j, d in enumerate(diam_k) if d <= s]
            if k == 0:
                basis = [[1 if j == c else 0 for j in range(nk)] for c in present]
            else:
                sub = [[row[j] for j in present] for row in bd_k]
                basis = []
                for vec in gauss_kernel(sub, p):
                    full = [0] * nk
                    for pos, j in enumerate(present):
                        full[j] = vec[pos]
                    basis.append(full)
            cycles.append(basis)

        images = []
        for t in scales:
            cols = [j for j, d in enumerate(diam_k1) if d <= t]
            images.append([[bd_k1[r][j] for r in range(nk)] for j in cols])
        rank_b = [gauss_rank(img, p) if img else 0 for img in images]

        table = np.zeros((last + 1, last + 1), dtype=np.int64)
        for si in range(last + 1):
            for ti in range(si, last + 1):
                stacked = cycles[si] + images[ti]
                r = gauss_rank(stacked, p) if stacked else 0
                table[si, ti] = r - rank_b[ti]
        intervals = barcode_from_ranks(table)
        pairs = []
        for (b, d), mult in intervals.items():
            birth = scales[b + 1]
            death = INF if d == last else scales[d + 1]
            pairs.extend([(birth, death)] * mult)
        result[k] = sorted(pairs)
    return result


def diagram_to_multisets(diagram, hom_cap):
    out = {k: [] for k in range(hom_cap + 1)}
    for e in diagram.entries:
        if e.dim <= hom_cap:
            out[e.dim].append((e.birth, e.death))
    return {k: sorted(v) for k, v in out.items()}


def full_distance_matrix(oracle):
    n = oracle.size
    return np.array([[oracle.eval(i, j) for j in range(n)] for i in range(n)])
