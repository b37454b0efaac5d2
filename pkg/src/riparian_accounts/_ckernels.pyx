# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: priority-flood fill, D8 directions, flow graph,
accumulation and cascade sediment routing.

Mirrors ``_pykernels`` exactly (visit and summation order included).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue

from .errors import HydrologyError

cnp.import_array()

cdef int[8] DR = [0, 1, 1, 1, 0, -1, -1, -1]
cdef int[8] DC = [1, 1, 0, -1, -1, -1, 0, 1]
cdef signed char OUTLET = 8
cdef signed char NODIR = -1
cdef signed char UNRESOLVED = -2


def fill_depressions(z, valid):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_a = np.array(z, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok_a = np.ascontiguousarray(valid, dtype=np.uint8).ravel()
    cdef Py_ssize_t nrows = z.shape[0], ncols = z.shape[1]
    cdef double[::1] out = out_a
    cdef const unsigned char[::1] ok = ok_a
    cdef unsigned char[::1] closed = np.zeros(nrows * ncols, dtype=np.uint8)
    # max-heap on (-elevation, -index) pops lowest elevation, then lowest index
    cdef priority_queue[pair[double, Py_ssize_t]] heap
    cdef pair[double, Py_ssize_t] top
    cdef Py_ssize_t r, c, rr, cc, i, j
    cdef int k
    cdef double e
    for r in range(nrows):
        for c in range(ncols):
            i = r * ncols + c
            if not ok[i]:
                continue
            for k in range(8):
                rr = r + DR[k]
                cc = c + DC[k]
                if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols or not ok[rr * ncols + cc]:
                    closed[i] = 1
                    heap.push(pair[double, Py_ssize_t](-out[i], -i))
                    break
    while not heap.empty():
        top = heap.top()
        heap.pop()
        e = -top.first
        i = -top.second
        r = i // ncols
        c = i - r * ncols
        for k in range(8):
            rr = r + DR[k]
            cc = c + DC[k]
            if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
                continue
            j = rr * ncols + cc
            if closed[j] or not ok[j]:
                continue
            closed[j] = 1
            if out[j] < e:
                out[j] = e
            heap.push(pair[double, Py_ssize_t](-out[j], -j))
    return out_a.reshape(nrows, ncols)


def d8_directions(z, valid, double cellsize):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] z_a = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok_a = np.ascontiguousarray(valid, dtype=np.uint8).ravel()
    cdef Py_ssize_t nrows = z.shape[0], ncols = z.shape[1], n = nrows * ncols
    cdef const double[::1] zs = z_a
    cdef const unsigned char[::1] ok = ok_a
    cdef cnp.ndarray[cnp.int8_t, ndim=1] dirs_a = np.full(n, NODIR, dtype=np.int8)
    cdef signed char[::1] dirs = dirs_a
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_a = np.empty(n, dtype=np.int64)
    cdef long long[::1] queue = queue_a
    cdef double diag = cellsize * sqrt(2.0)
    cdef double drop, s, best_slope
    cdef Py_ssize_t r, c, rr, cc, i, j, head, tail
    cdef int k, best
    cdef bint boundary
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
                dirs[i] = UNRESOLVED

    tail = 0
    for i in range(n):
        if dirs[i] >= 0:
            queue[tail] = i
            tail += 1
    head = 0
    while head < tail:
        i = queue[head]
        head += 1
        r = i // ncols
        c = i - r * ncols
        for k in range(8):
            rr = r + DR[k]
            cc = c + DC[k]
            if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
                continue
            j = rr * ncols + cc
            if dirs[j] == UNRESOLVED and zs[j] == zs[i]:
                dirs[j] = (k + 4) % 8
                queue[tail] = j
                tail += 1
    for i in range(n):
        if dirs[i] == UNRESOLVED:
            raise HydrologyError(f"unresolved flat at cell ({i // ncols}, {i % ncols})")
    return dirs_a.reshape(nrows, ncols)


def flow_graph(dirs_in):
    cdef cnp.ndarray[cnp.int8_t, ndim=1] d_a = np.ascontiguousarray(dirs_in, dtype=np.int8).ravel()
    cdef Py_ssize_t nrows = dirs_in.shape[0], ncols = dirs_in.shape[1], n = nrows * ncols
    cdef const signed char[::1] d = d_a
    cdef cnp.ndarray[cnp.int64_t, ndim=1] down_a = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] down = down_a
    cdef long long[::1] indeg = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order_a = np.empty(n, dtype=np.int64)
    cdef long long[::1] order = order_a
    cdef Py_ssize_t i, j, r, c, rr, cc, nvalid = 0, head, tail
    cdef int k
    for i in range(n):
        k = d[i]
        if k == NODIR:
            continue
        nvalid += 1
        if k == OUTLET:
            continue
        if k < 0 or k > 8:
            raise HydrologyError(f"invalid direction code {k} at index {i}")
        r = i // ncols
        c = i - r * ncols
        rr = r + DR[k]
        cc = c + DC[k]
        if rr < 0 or rr >= nrows or cc < 0 or cc >= ncols:
            raise HydrologyError(f"cell ({r}, {c}) drains off the grid without an outlet marker")
        j = rr * ncols + cc
        if d[j] == NODIR:
            raise HydrologyError(f"cell ({r}, {c}) drains into a nodata cell")
        down[i] = j
        indeg[j] += 1
    tail = 0
    for i in range(n):
        if d[i] != NODIR and indeg[i] == 0:
            order[tail] = i
            tail += 1
    head = 0
    while head < tail:
        j = down[order[head]]
        head += 1
        if j >= 0:
            indeg[j] -= 1
            if indeg[j] == 0:
                order[tail] = j
                tail += 1
    if tail != nvalid:
        raise HydrologyError(f"flow directions contain a cycle ({nvalid - tail} cells unreachable)")
    return order_a[:tail].copy(), down_a


def accumulate(weights, cnp.ndarray order_in, cnp.ndarray down_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] acc_a = np.array(weights, dtype=np.float64).ravel()
    cdef double[::1] acc = acc_a
    cdef const long long[::1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef const long long[::1] down = np.ascontiguousarray(down_in, dtype=np.int64)
    cdef Py_ssize_t t, i, j
    for t in range(order.shape[0]):
        i = order[t]
        j = down[i]
        if j >= 0:
            acc[j] += acc[i]
    return acc_a


def route(loss, eff, cnp.ndarray order_in, cnp.ndarray down_in):
    cdef const double[::1] gen = np.ascontiguousarray(loss, dtype=np.float64).ravel()
    cdef const double[::1] e = np.ascontiguousarray(eff, dtype=np.float64).ravel()
    cdef const long long[::1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef const long long[::1] down = np.ascontiguousarray(down_in, dtype=np.int64)
    cdef Py_ssize_t n = gen.shape[0]
    cdef double[::1] incoming = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] trapped_a = np.zeros(n, dtype=np.float64)
    cdef double[::1] trapped = trapped_a
    cdef double exported = 0.0, inc, out
    cdef Py_ssize_t t, i, j
    for t in range(order.shape[0]):
        i = order[t]
        inc = incoming[i]
        trapped[i] = inc * e[i]
        out = gen[i] + inc * (1.0 - e[i])
        j = down[i]
        if j >= 0:
            incoming[j] += out
        else:
            exported += out
    return trapped_a, exported
