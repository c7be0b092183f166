"""Pure-Python kernels over integer bitmasks.

Every set (hyperedge, pool, response vector) is a Python ``int`` whose bit
``j - 1`` stands for element ``j``.  The compiled backend exposes the same
functions with the same signatures and results.
"""


def clean_masks(rows, edges, n):
    """For each candidate defective edge, OR of the rows that avoid it."""
    out = []
    for e in edges:
        acc = 0
        for r in rows:
            if not r & e:
                acc |= r
        out.append(acc)
    return out


def first_discard_violation(rows, edges, p, n):
    """First ordered pair ``(i, j)`` such that ``|e_i \\ e_j| >= p`` and no row
    hits ``e_i \\ e_j`` while avoiding ``e_j``.

    Pairs are scanned with ``j`` (the hypothetical defective edge) in the
    outer loop.  Returns ``None`` if the p-discard property holds.
    """
    clean = clean_masks(rows, edges, n)
    for j, estar in enumerate(edges):
        cj = clean[j]
        for i, e in enumerate(edges):
            if i == j:
                continue
            if (e & ~estar).bit_count() >= p and not e & cj:
                return i, j
    return None


def response_masks(rows, edges, n):
    """Response vector of each edge as a t-bit mask (bit i <=> row i hits it)."""
    out = []
    for e in edges:
        acc = 0
        for i, r in enumerate(rows):
            if r & e:
                acc |= 1 << i
        out.append(acc)
    return out


def prune_keep(edges, b, n):
    """Keep flag for each edge: no other edge has ``b`` or more vertices outside it."""
    keep = []
    for i, e in enumerate(edges):
        ok = True
        for j, f in enumerate(edges):
            if i != j and (f & ~e).bit_count() >= b:
                ok = False
                break
        keep.append(ok)
    return keep


def pair_stats(edges, n):
    """``(min_diff, max_diff, max_intersection, nested)`` over distinct pairs.

    ``min_diff`` skips ordered pairs where the first edge is contained in the
    second; it is ``None`` when no such pair exists.  The other two are
    ``None`` for fewer than two edges.
    """
    m = len(edges)
    if m < 2:
        return None, None, None, False
    min_diff = None
    max_diff = 0
    max_inter = 0
    nested = False
    for i in range(m):
        e = edges[i]
        for j in range(m):
            if i == j:
                continue
            f = edges[j]
            diff = (f & ~e).bit_count()
            if diff > max_diff:
                max_diff = diff
            if diff == 0:
                nested = True
            elif min_diff is None or diff < min_diff:
                min_diff = diff
            if j > i:
                inter = (e & f).bit_count()
                if inter > max_inter:
                    max_inter = inter
    return min_diff, max_diff, max_inter, nested


def separable_search(edges, n, t):
    """Columns (t-bit ints, one per vertex) of some separable t x n matrix, or None.

    Depth-first over vertices.  Once every vertex of an edge has a column,
    its OR is fixed, so a collision with an already completed edge prunes
    the whole subtree.  Row permutations preserve separability, so the
    first used vertex only tries the t + 1 columns of the form ``2**w - 1``.
    """
    if len(edges) <= 1:
        return [0] * n
    by_last = [[] for _ in range(n)]
    used = 0
    for e in edges:
        if e == 0:
            continue
        by_last[e.bit_length() - 1].append(e)
        used |= e
    has_empty = any(e == 0 for e in edges)
    first = (used & -used).bit_length() - 1
    full = 1 << t
    cols = [0] * n
    done = {0} if has_empty else set()

    def orof(e):
        acc = 0
        k = 0
        while e:
            if e & 1:
                acc |= cols[k]
            e >>= 1
            k += 1
        return acc

    def rec(k):
        if k == n:
            return True
        if not (used >> k) & 1:
            cols[k] = 0
            return rec(k + 1)
        if k == first:
            candidates = [(1 << w) - 1 for w in range(t + 1)]
        else:
            candidates = range(full)
        closing = by_last[k]
        for c in candidates:
            cols[k] = c
            added = []
            ok = True
            for e in closing:
                r = orof(e)
                if r in done:
                    ok = False
                    break
                done.add(r)
                added.append(r)
            if ok and rec(k + 1):
                return True
            for r in added:
                done.discard(r)
        cols[k] = 0
        return False

    if rec(0):
        return list(cols)
    return None
