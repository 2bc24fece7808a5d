"""Pure-Python sparse Smith elimination kernel.

The matrix is a list of row dictionaries ``{column: value}``. Elimination
records every unimodular operation as a 6-tuple ``(i, j, a, b, c, d)``
meaning ``(x_i, x_j) <- (a*x_i + b*x_j, c*x_i + d*x_j)`` on rows (or
columns). ``i == j`` encodes negation of a single row/column.

After replaying ``row_ops`` on the rows and ``col_ops`` on the columns the
matrix is ``diag(d_0, ..., d_{k-1}, 0, ...)`` with ``d_0 | d_1 | ...`` and
all ``d_t > 0``.
"""


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_sparse(rows, ncols, track_rows=True, track_cols=True):
    """Diagonalise ``rows`` in place; return ``(diag, row_ops, col_ops)``."""
    nrows = len(rows)
    colrows = [set() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j in r:
            colrows[j].add(i)
    row_ops = []
    col_ops = []
    active = [i for i in range(nrows) if rows[i]]
    pivots = []

    while True:
        best = None
        best_abs = 0
        alive = []
        for i in active:
            r = rows[i]
            if not r:
                continue
            alive.append(i)
            if best_abs == 1:
                continue
            for j, v in r.items():
                av = v if v > 0 else -v
                if best is None or av < best_abs:
                    best = (i, j)
                    best_abs = av
                    if av == 1:
                        break
        active = alive
        if best is None:
            break
        pr, pc = best

        while True:
            a = rows[pr][pc]
            restart = False
            # clear the pivot column with row operations
            for i in list(colrows[pc]):
                if i == pr:
                    continue
                ri = rows[i]
                v = ri[pc]
                q = v // a
                rem = v - q * a
                if 2 * abs(rem) > abs(a):
                    q += 1
                    rem -= a
                if q:
                    c = -q
                    for j, pv in rows[pr].items():
                        nv = ri.get(j, 0) + c * pv
                        if nv:
                            if j not in ri:
                                colrows[j].add(i)
                            ri[j] = nv
                        elif j in ri:
                            del ri[j]
                            colrows[j].discard(i)
                    if track_rows:
                        row_ops.append((i, pr, 1, c, 0, 1))
                if rem:
                    pr = i
                    restart = True
                    break
            if restart:
                continue
            # the column is clear, so column operations only touch row pr
            rp = rows[pr]
            for j in list(rp):
                if j == pc:
                    continue
                v = rp[j]
                q = v // a
                rem = v - q * a
                if 2 * abs(rem) > abs(a):
                    q += 1
                    rem -= a
                if q and track_cols:
                    col_ops.append((j, pc, 1, -q, 0, 1))
                if rem:
                    rp[j] = rem
                    pc = j
                    restart = True
                    break
                del rp[j]
                colrows[j].discard(pr)
            if restart:
                continue
            break

        pivots.append((pr, pc, rows[pr][pc]))
        del rows[pr][pc]
        colrows[pc].discard(pr)
        active = [i for i in active if i != pr]

    k = len(pivots)
    # move pivots onto the leading diagonal
    for ops, track, size, key in ((row_ops, track_rows, nrows, 0), (col_ops, track_cols, ncols, 1)):
        if not track:
            continue
        at = list(range(size))
        where = list(range(size))
        for t, piv in enumerate(pivots):
            src = where[piv[key]]
            if src != t:
                ops.append((t, src, 0, 1, 1, 0))
                ot = at[t]
                at[t], at[src] = piv[key], ot
                where[piv[key]], where[ot] = t, src

    d = [p[2] for p in pivots]
    for t in range(k):
        if d[t] < 0:
            d[t] = -d[t]
            if track_rows:
                row_ops.append((t, t, -1, 0, 0, -1))
    for i in range(k):
        for j in range(i + 1, k):
            a, b = d[i], d[j]
            if b % a == 0:
                continue
            g, x, y = _xgcd(a, b)
            if track_cols:
                col_ops.append((i, j, 1, 1, 0, 1))
            if track_rows:
                row_ops.append((i, j, x, y, -(b // g), a // g))
            if track_cols:
                col_ops.append((j, i, 1, -(y * b // g), 0, 1))
            d[i], d[j] = g, a * b // g
    return d, row_ops, col_ops


def replay_rows(ops, v):
    """Apply ``U`` (the recorded row transform) to the vector ``v`` in place."""
    for i, j, a, b, c, d in ops:
        if i == j:
            v[i] = -v[i]
        else:
            x, y = v[i], v[j]
            v[i] = a * x + b * y
            v[j] = c * x + d * y
    return v


def replay_rows_inverse(ops, v):
    """Apply ``U^-1`` to ``v`` in place."""
    for i, j, a, b, c, d in reversed(ops):
        if i == j:
            v[i] = -v[i]
        else:
            det = a * d - b * c
            x, y = v[i], v[j]
            v[i] = det * (d * x - b * y)
            v[j] = det * (a * y - c * x)
    return v


def replay_cols(ops, v):
    """Apply ``V`` (the recorded column transform) to ``v`` in place."""
    for i, j, a, b, c, d in reversed(ops):
        if i == j:
            v[i] = -v[i]
        else:
            x, y = v[i], v[j]
            v[i] = a * x + c * y
            v[j] = b * x + d * y
    return v


def replay_cols_inverse(ops, v):
    """Apply ``V^-1`` to ``v`` in place."""
    for i, j, a, b, c, d in ops:
        if i == j:
            v[i] = -v[i]
        else:
            det = a * d - b * c
            x, y = v[i], v[j]
            v[i] = det * (d * x - c * y)
            v[j] = det * (a * y - b * x)
    return v
