# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse Smith elimination kernel.

Same algorithm and operation log as ``_smith_py``; indices are C integers
while matrix entries stay Python integers so nothing can overflow.
"""


cdef tuple _xgcd(object a, object b):
    cdef object x0 = 1, x1 = 0, y0 = 0, y1 = 1, q
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


cdef inline object _absv(object v):
    return v if v > 0 else -v


def smith_sparse(list rows, Py_ssize_t ncols, bint track_rows=True, bint track_cols=True):
    """Diagonalise ``rows`` in place; return ``(diag, row_ops, col_ops)``."""
    cdef Py_ssize_t nrows = len(rows)
    cdef list colrows = [set() for _ in range(ncols)]
    cdef Py_ssize_t i, j, pr, pc, t, k, src, ot
    cdef dict r, ri, rp
    cdef object v, av, a, q, rem, c, pv, nv, best_abs, b, g, x, y
    cdef bint restart, have_best
    for i in range(nrows):
        for j in rows[i]:
            (<set>colrows[j]).add(i)
    cdef list row_ops = []
    cdef list col_ops = []
    cdef list active = [i for i in range(nrows) if rows[i]]
    cdef list pivots = []
    cdef list alive

    while True:
        have_best = False
        best_abs = 0
        pr = pc = -1
        alive = []
        for i in active:
            r = <dict>rows[i]
            if not r:
                continue
            alive.append(i)
            if have_best and best_abs == 1:
                continue
            for j, v in r.items():
                av = _absv(v)
                if not have_best or av < best_abs:
                    have_best = True
                    pr, pc = i, j
                    best_abs = av
                    if av == 1:
                        break
        active = alive
        if not have_best:
            break

        while True:
            a = (<dict>rows[pr])[pc]
            restart = False
            for i in list(colrows[pc]):
                if i == pr:
                    continue
                ri = <dict>rows[i]
                v = ri[pc]
                q = v // a
                rem = v - q * a
                if 2 * _absv(rem) > _absv(a):
                    q += 1
                    rem -= a
                if q:
                    c = -q
                    for j, pv in (<dict>rows[pr]).items():
                        nv = ri.get(j, 0) + c * pv
                        if nv:
                            if j not in ri:
                                (<set>colrows[j]).add(i)
                            ri[j] = nv
                        elif j in ri:
                            del ri[j]
                            (<set>colrows[j]).discard(i)
                    if track_rows:
                        row_ops.append((i, pr, 1, c, 0, 1))
                if rem:
                    pr = i
                    restart = True
                    break
            if restart:
                continue
            rp = <dict>rows[pr]
            for j in list(rp):
                if j == pc:
                    continue
                v = rp[j]
                q = v // a
                rem = v - q * a
                if 2 * _absv(rem) > _absv(a):
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
                (<set>colrows[j]).discard(pr)
            if restart:
                continue
            break

        pivots.append((pr, pc, (<dict>rows[pr])[pc]))
        del (<dict>rows[pr])[pc]
        (<set>colrows[pc]).discard(pr)
        active = [i for i in active if i != pr]

    k = len(pivots)
    cdef list at, where, ops
    cdef Py_ssize_t size, key
    for ops, track, size, key in ((row_ops, track_rows, nrows, 0), (col_ops, track_cols, ncols, 1)):
        if not track:
            continue
        at = list(range(size))
        where = list(range(size))
        for t in range(k):
            piv = pivots[t]
            src = where[piv[key]]
            if src != t:
                ops.append((t, src, 0, 1, 1, 0))
                ot = at[t]
                at[t], at[src] = piv[key], ot
                where[piv[key]], where[ot] = t, src

    cdef list d = [p[2] for p in pivots]
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


def replay_rows(list ops, list v):
    """Apply ``U`` to ``v`` in place."""
    cdef Py_ssize_t i, j
    cdef object a, b, c, d, x, y
    for i, j, a, b, c, d in ops:
        if i == j:
            v[i] = -v[i]
        else:
            x, y = v[i], v[j]
            v[i] = a * x + b * y
            v[j] = c * x + d * y
    return v


def replay_rows_inverse(list ops, list v):
    """Apply ``U^-1`` to ``v`` in place."""
    cdef Py_ssize_t i, j
    cdef object a, b, c, d, x, y, det
    for i, j, a, b, c, d in reversed(ops):
        if i == j:
            v[i] = -v[i]
        else:
            det = a * d - b * c
            x, y = v[i], v[j]
            v[i] = det * (d * x - b * y)
            v[j] = det * (a * y - c * x)
    return v


def replay_cols(list ops, list v):
    """Apply ``V`` to ``v`` in place."""
    cdef Py_ssize_t i, j
    cdef object a, b, c, d, x, y
    for i, j, a, b, c, d in reversed(ops):
        if i == j:
            v[i] = -v[i]
        else:
            x, y = v[i], v[j]
            v[i] = a * x + c * y
            v[j] = b * x + d * y
    return v


def replay_cols_inverse(list ops, list v):
    """Apply ``V^-1`` to ``v`` in place."""
    cdef Py_ssize_t i, j
    cdef object a, b, c, d, x, y, det
    for i, j, a, b, c, d in ops:
        if i == j:
            v[i] = -v[i]
        else:
            det = a * d - b * c
            x, y = v[i], v[j]
            v[i] = det * (d * x - c * y)
            v[j] = det * (a * y - b * x)
    return v
