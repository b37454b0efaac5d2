"""Pure-Python reference kernels.

Same algorithms, visit orders and summation orders as ``_ckernels.pyx`` so
both backends produce bit-identical results. Arrays are converted to flat
Python lists up front; per-element numpy indexing is far slower.
"""
import heapq
import math

import numpy as np

from .errors import HydrologyError

# E, SE, S, SW, W, NW, N, NE
DR = (0, 1, 1, 1, 0, -1, -1, -1)
DC = (1, 1, 0, -1, -1, -1, 0, 1)
OUTLET = 8
NODIR = -1
_UNRESOLVED = -2


def fill_depressions(z, valid):
    nrows, ncols = z.shape
    out = np.ascontiguousarray(z, dtype=np.float64).ravel().tolist()
    ok = np.ascontiguousarray(valid, dtype=bool).ravel().tolist()
    closed = [False] * (nrows * ncols)
    heap = []
    for r in range(nrows):
        for c in range(ncols):
            i = r * ncols + c
            if not ok[i]:
                continue
            for k in range(8):
                rr = r + DR[k]
                cc = c + DC[k]
                if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols or not ok[rr * ncols + cc]:
                    closed[i] = True
                    heap.append((out[i], i))
                    break
    heapq.heapify(heap)
    while heap:
        e, i = heapq.heappop(heap)
        r, c = divmod(i, ncols)
        for k in range(8):
            rr = r + DR[k]
            cc = c + DC[k]
            if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
                continue
            j = rr * ncols + cc
            if closed[j] or not ok[j]:
                continue
            closed[j] = True
            if out[j] < e:
                out[j] = e
            heapq.heappush(heap, (out[j], j))
    return np.array(out, dtype=np.float64).reshape(nrows, ncols)


def d8_directions(z, valid, cellsize):
    nrows, ncols = z.shape
    zs = np.ascontiguousarray(z, dtype=np.float64).ravel().tolist()
    ok = np.ascontiguousarray(valid, dtype=bool).ravel().tolist()
    diag = cellsize * math.sqrt(2.0)
    dirs = [NODIR] * (nrows * ncols)
    for r in range(nrows):
        for c in range(ncols):
            i = r * ncols + c
            if not ok[i]:
                continue
            best = -1
            best_slope = 0.0
            boundary = False
            for k in range(8):
                rr = r + DR[k]
                cc = c + DC[k]
                if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
                    boundary = True
                    continue
                j = rr * ncols + cc
                if not ok[j]:
                    boundary = True
                    continue
                drop = zs[i] - zs[j]
                if drop > 0.0:
                    s = drop / (diag if k & 1 else cellsize)
                    if s > best_slope:
                        best_slope = s
                        best = k
            if best >= 0:
                dirs[i] = best
            elif boundary:
                dirs[i] = OUTLET
            else:
                dirs[i] = _UNRESOLVED

    # flats drain toward the nearest equal-elevation cell that already has an exit
    queue = [i for i in range(nrows * ncols) if dirs[i] >= 0]
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        r, c = divmod(i, ncols)
        for k in range(8):
            rr = r + DR[k]
            cc = c + DC[k]
            if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
                continue
            j = rr * ncols + cc
            if dirs[j] == _UNRESOLVED and zs[j] == zs[i]:
                dirs[j] = (k + 4) % 8
                queue.append(j)
    for i in range(nrows * ncols):
        if dirs[i] == _UNRESOLVED:
            r, c = divmod(i, ncols)
            raise HydrologyError(f"unresolved flat at cell ({r}, {c})")
    return np.array(dirs, dtype=np.int8).reshape(nrows, ncols)


def flow_graph(dirs):
    """Topological order (upstream first) and downstream index per cell.

    ``down[i]`` is ``-1`` for outlets and nodata cells.
    """
    nrows, ncols = dirs.shape
    n = nrows * ncols
    d = np.ascontiguousarray(dirs, dtype=np.int8).ravel().tolist()
    down = [-1] * n
    indeg = [0] * n
    nvalid = 0
    for i in range(n):
        k = d[i]
        if k == NODIR:
            continue
        nvalid += 1
        if k == OUTLET:
            continue
        if k < 0 or k > 8:
            raise HydrologyError(f"invalid direction code {k} at index {i}")
        r, c = divmod(i, ncols)
        rr = r + DR[k]
        cc = c + DC[k]
        if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
            raise HydrologyError(f"cell ({r}, {c}) drains off the grid without an outlet marker")
        j = rr * ncols + cc
        if d[j] == NODIR:
            raise HydrologyError(f"cell ({r}, {c}) drains into a nodata cell")
        down[i] = j
        indeg[j] += 1
    order = [i for i in range(n) if d[i] != NODIR and indeg[i] == 0]
    head = 0
    while head < len(order):
        j = down[order[head]]
        head += 1
        if j >= 0:
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
    if len(order) != nvalid:
        raise HydrologyError(f"flow directions contain a cycle ({nvalid - len(order)} cells unreachable)")
    return np.array(order, dtype=np.int64), np.array(down, dtype=np.int64)


def accumulate(weights, order, down):
    acc = np.ascontiguousarray(weights, dtype=np.float64).ravel().tolist()
    dn = down.tolist()
    for i in order.tolist():
        j = dn[i]
        if j >= 0:
            acc[j] += acc[i]
    return np.array(acc, dtype=np.float64)


def route(loss, eff, order, down):
    """Cascade routing; returns ``(trapped, exported)`` over flat indices."""
    gen = np.ascontiguousarray(loss, dtype=np.float64).ravel().tolist()
    e = np.ascontiguousarray(eff, dtype=np.float64).ravel().tolist()
    dn = down.tolist()
    incoming = [0.0] * len(gen)
    trapped = [0.0] * len(gen)
    exported = 0.0
    for i in order.tolist():
        inc = incoming[i]
        trapped[i] = inc * e[i]
        out = gen[i] + inc * (1.0 - e[i])
        j = dn[i]
        if j >= 0:
            incoming[j] += out
        else:
            exported += out
    return np.array(trapped, dtype=np.float64), exported
