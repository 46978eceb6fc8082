# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; same contract as _scan_py.scan."""

from libc.stdlib cimport malloc, free as cfree

NONEMPTY = 1
EF = 2
EF1 = 4
ALPHA_EF1 = 8
TS = 16
WTS = 32

cdef long long _BIG = 1 << 60


def scan(
    int num_vertices,
    int n,
    indptr_obj,
    indices_obj,
    degrees_obj,
    fixed_obj,
    int require_mask,
    long long alpha_num,
    long long alpha_den,
    bint first_only,
    bint collect_vectors,
    long long start,
    long long stop,
    int shift,
):
    cdef int m = num_vertices
    cdef int i, j, k, b, d, nd, v, u, p, deg
    cdef long long r, gain, key, index, rem
    cdef bint ok

    cdef int *indptr = <int *> malloc((m + 1) * sizeof(int))
    cdef int num_arcs = int(indptr_obj[m])
    cdef int *indices = <int *> malloc(max(num_arcs, 1) * sizeof(int))
    cdef int *degrees = <int *> malloc(max(m, 1) * sizeof(int))
    cdef int *assign = <int *> malloc(max(m, 1) * sizeof(int))
    cdef int *freev = <int *> malloc(max(m, 1) * sizeof(int))
    cdef int *digits = <int *> malloc(max(m, 1) * sizeof(int))
    cdef long long *cnt = <long long *> malloc(max(m * n, 1) * sizeof(long long))
    cdef long long *values = <long long *> malloc(n * sizeof(long long))
    cdef long long *sizes = <long long *> malloc(n * sizeof(long long))
    cdef long long *minrem = <long long *> malloc(n * sizeof(long long))
    cdef long long *sortbuf = <long long *> malloc(n * sizeof(long long))
    if (indptr is NULL or indices is NULL or degrees is NULL or assign is NULL
            or freev is NULL or digits is NULL or cnt is NULL or values is NULL
            or sizes is NULL or minrem is NULL or sortbuf is NULL):
        raise MemoryError()

    all_vectors = {} if collect_vectors else None
    matched_first = {} if collect_vectors else None
    matched_count = {} if collect_vectors else None

    cdef long long states = 0, matched = 0, first_index = -1
    cdef int f = 0
    cdef long long vmin, vmax, tmp

    try:
        for i in range(m + 1):
            indptr[i] = indptr_obj[i]
        for i in range(num_arcs):
            indices[i] = indices_obj[i]
        for i in range(m):
            degrees[i] = degrees_obj[i]
            assign[i] = fixed_obj[i]
            if assign[i] < 0:
                freev[f] = i
                f += 1

        rem = start
        for k in range(f - 1, -1, -1):
            digits[k] = <int> (rem % n)
            rem //= n
        if rem != 0:
            raise ValueError("start outside the enumeration range")
        for k in range(f):
            assign[freev[k]] = digits[k]

        for i in range(m * n):
            cnt[i] = 0
        for v in range(m):
            for p in range(indptr[v], indptr[v + 1]):
                cnt[v * n + assign[indices[p]]] += 1
        for b in range(n):
            values[b] = 0
            sizes[b] = 0
        for v in range(m):
            b = assign[v]
            values[b] += degrees[v] - cnt[v * n + b]
            sizes[b] += 1

        index = start
        while index < stop:
            states += 1
            ok = True
            if require_mask & NONEMPTY:
                for b in range(n):
                    if sizes[b] == 0:
                        ok = False
                        break
            if ok and require_mask & EF:
                vmin = values[0]
                vmax = values[0]
                for b in range(1, n):
                    if values[b] < vmin:
                        vmin = values[b]
                    if values[b] > vmax:
                        vmax = values[b]
                ok = vmin == vmax
            if ok and require_mask & (EF1 | ALPHA_EF1):
                for b in range(n):
                    minrem[b] = _BIG
                for v in range(m):
                    b = assign[v]
                    r = 2 * cnt[v * n + b] - degrees[v]
                    if r < minrem[b]:
                        minrem[b] = r
                vmin = values[0]
                for b in range(1, n):
                    if values[b] < vmin:
                        vmin = values[b]
                if require_mask & EF1:
                    for b in range(n):
                        if values[b] > vmin and values[b] + minrem[b] > vmin:
                            ok = False
                            break
                if ok and require_mask & ALPHA_EF1:
                    for b in range(n):
                        if values[b] > vmin and alpha_num * (values[b] + minrem[b]) > alpha_den * vmin:
                            ok = False
                            break
            if ok and require_mask & (TS | WTS):
                for v in range(m):
                    b = assign[v]
                    deg = degrees[v]
                    r = 2 * cnt[v * n + b] - deg
                    if r < 0:
                        continue
                    if require_mask & TS:
                        for j in range(n):
                            if j == b:
                                continue
                            gain = deg - 2 * cnt[v * n + j]
                            if gain >= 0 and (r > 0 or gain > 0):
                                ok = False
                                break
                    elif r > 0:
                        for j in range(n):
                            if j != b and deg - 2 * cnt[v * n + j] > 0:
                                ok = False
                                break
                    if not ok:
                        break

            if collect_vectors:
                for b in range(n):
                    sortbuf[b] = values[b]
                for i in range(1, n):  # insertion sort, n is tiny
                    tmp = sortbuf[i]
                    j = i - 1
                    while j >= 0 and sortbuf[j] > tmp:
                        sortbuf[j + 1] = sortbuf[j]
                        j -= 1
                    sortbuf[j + 1] = tmp
                key = 0
                for b in range(n):
                    key = (key << shift) | sortbuf[b]
                if key not in all_vectors:
                    all_vectors[key] = index
                if ok:
                    if key not in matched_first:
                        matched_first[key] = index
                        matched_count[key] = 1
                    else:
                        matched_count[key] = matched_count[key] + 1
            if ok:
                matched += 1
                if first_index < 0:
                    first_index = index
                if first_only and not collect_vectors:
                    break

            index += 1
            if index >= stop:
                break
            k = f - 1
            while True:
                d = digits[k]
                v = freev[k]
                nd = d + 1 if d + 1 < n else 0
                values[d] += 2 * cnt[v * n + d] - degrees[v]
                sizes[d] -= 1
                for p in range(indptr[v], indptr[v + 1]):
                    u = indices[p]
                    cnt[u * n + d] -= 1
                    cnt[u * n + nd] += 1
                values[nd] += degrees[v] - 2 * cnt[v * n + nd]
                sizes[nd] += 1
                assign[v] = nd
                digits[k] = nd
                if nd != 0:
                    break
                k -= 1
    finally:
        cfree(indptr)
        cfree(indices)
        cfree(degrees)
        cfree(assign)
        cfree(freev)
        cfree(digits)
        cfree(cnt)
        cfree(values)
        cfree(sizes)
        cfree(minrem)
        cfree(sortbuf)

    return {
        "states": states,
        "matched": matched,
        "first_index": first_index,
        "all_vectors": all_vectors,
        "matched_first": matched_first,
        "matched_count": matched_count,
    }
