# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled metric inner loops; drop-in for ``_kernels_py``."""

from libc.stdlib cimport malloc, free

# Longer sentences take the hash-based pure path; the quadratic scans here
# only pay off on ordinary sentence lengths.
cdef enum:
    QUADRATIC_LIMIT = 512


cdef int* _intern(seq, dict vocab, Py_ssize_t n) except NULL:
    cdef int* ids = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if ids == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef object v
    for i in range(n):
        tok = seq[i]
        v = vocab.get(tok)
        if v is None:
            v = len(vocab)
            vocab[tok] = v
        ids[i] = <int> v
    return ids


cdef inline bint _same(const int* a, Py_ssize_t i, const int* b, Py_ssize_t j, int n) nogil:
    cdef int k
    for k in range(n):
        if a[i + k] != b[j + k]:
            return False
    return True


def ngram_matches(hyp, ref, int max_n=4):
    cdef Py_ssize_t lh = len(hyp), lr = len(ref)
    if lh > QUADRATIC_LIMIT or lr > QUADRATIC_LIMIT:
        from ._kernels_py import ngram_matches as slow
        return slow(hyp, ref, max_n)
    cdef dict vocab = {}
    cdef int* h = _intern(hyp, vocab, lh)
    cdef int* r
    try:
        r = _intern(ref, vocab, lr)
    except BaseException:
        free(h)
        raise
    cdef list matched = []
    cdef list totals = []
    cdef int n
    cdef Py_ssize_t th, tr, i, j
    cdef long m, ch, cr
    cdef bint seen
    try:
        for n in range(1, max_n + 1):
            th = lh - n + 1
            tr = lr - n + 1
            if th <= 0:
                matched.append(0)
                totals.append(0)
                continue
            m = 0
            if tr > 0:
                with nogil:
                    for i in range(th):
                        seen = False
                        for j in range(i):
                            if _same(h, i, h, j, n):
                                seen = True
                                break
                        if seen:
                            continue
                        ch = 1
                        for j in range(i + 1, th):
                            if _same(h, i, h, j, n):
                                ch += 1
                        cr = 0
                        for j in range(tr):
                            if _same(h, i, r, j, n):
                                cr += 1
                        m += ch if ch < cr else cr
            matched.append(m)
            totals.append(th)
    finally:
        free(h)
        free(r)
    return matched, totals


def align_nearest(hyp, ref):
    cdef Py_ssize_t lh = len(hyp), lr = len(ref)
    cdef dict vocab = {}
    cdef int* r = _intern(ref, vocab, lr)
    cdef char* used = <char*> malloc(lr if lr > 0 else 1)
    if used == NULL:
        free(r)
        raise MemoryError()
    cdef Py_ssize_t i, j, best, d, best_dist
    cdef int tid
    cdef list out = []
    try:
        for j in range(lr):
            used[j] = 0
        for i in range(lh):
            v = vocab.get(hyp[i])
            best = -1
            if v is not None:
                tid = <int> v
                best_dist = 0
                for j in range(lr):
                    if r[j] != tid or used[j]:
                        continue
                    d = j - i if j >= i else i - j
                    if best < 0 or d < best_dist:
                        best = j
                        best_dist = d
                if best >= 0:
                    used[best] = 1
            out.append(best)
    finally:
        free(r)
        free(used)
    return out


def kendall_counts(seq):
    cdef Py_ssize_t k = len(seq), a, b
    cdef long* xs = <long*> malloc((k if k > 0 else 1) * sizeof(long))
    if xs == NULL:
        raise MemoryError()
    cdef long conc = 0, disc = 0
    try:
        for a in range(k):
            xs[a] = seq[a]
        with nogil:
            for a in range(k):
                for b in range(a + 1, k):
                    if xs[b] > xs[a]:
                        conc += 1
                    else:
                        disc += 1
    finally:
        free(xs)
    return conc, disc
