# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the period-coefficient enumeration hot loop.

Twin of ``_coeff_kernel_py.coefficient_terms``: same enumeration order, same
output, with the exponent bookkeeping in C integers.  Numerators and
factorials stay Python ints (they outgrow machine words).
"""

from libc.stdlib cimport free, malloc


cdef class _Enum:
    cdef int m, nv, half, d
    cdef int* a
    cdef long* bc
    cdef int* alf
    cdef list dpow
    cdef list out

    def __cinit__(self, beta, int d, alphas, list dpow):
        cdef int i, j
        self.m = len(alphas)
        self.nv = len(beta)
        self.half = self.nv // 2
        self.d = d
        self.dpow = dpow
        self.out = []
        self.a = <int*> malloc(self.m * sizeof(int))
        self.bc = <long*> malloc(self.nv * sizeof(long))
        self.alf = <int*> malloc(self.m * self.nv * sizeof(int))
        if self.a == NULL or self.bc == NULL or self.alf == NULL:
            raise MemoryError()
        for i in range(self.m):
            self.a[i] = 0
        for j in range(self.nv):
            self.bc[j] = beta[j] + 1
        for i in range(self.m):
            for j in range(self.nv):
                self.alf[i * self.nv + j] = alphas[i][j]

    def __dealloc__(self):
        free(self.a)
        free(self.bc)
        free(self.alf)

    cdef void emit(self, object afact):
        cdef int e, j, q, t, qsum = 0, esum = 0
        cdef long bj, r
        for e in range(self.half):
            if self.bc[2 * e] % self.d + self.bc[2 * e + 1] % self.d != self.d:
                return
        num = 1
        for j in range(self.nv):
            bj = self.bc[j]
            q = <int> (bj // self.d)
            r = bj - q * self.d
            qsum += q
            if not (j & 1):
                esum += q
            for t in range(q):
                num = num * (r + t * self.d)
        exps = tuple([self.a[j] for j in range(self.m)])
        self.out.append((exps, -num if esum & 1 else num, self.dpow[qsum] * afact))

    cdef void descend(self, int idx, int rem, object afact):
        cdef int v, j
        cdef int* alpha
        if idx == self.m:
            self.emit(afact)
            return
        alpha = self.alf + idx * self.nv
        for v in range(rem + 1):
            if v:
                afact = afact * v
                for j in range(self.nv):
                    self.bc[j] += alpha[j]
            self.a[idx] = v
            self.descend(idx + 1, rem - v, afact)
        for j in range(self.nv):
            self.bc[j] -= rem * alpha[j]
        self.a[idx] = 0


def coefficient_terms(beta, int d, alphas, int trunc):
    cdef int i
    k = (sum(beta) + len(beta)) // d
    dpow = [1] * (k + trunc + 1)
    for i in range(1, k + trunc + 1):
        dpow[i] = dpow[i - 1] * d
    cdef _Enum st = _Enum(beta, d, [tuple(a) for a in alphas], dpow)
    st.descend(0, trunc, 1)
    return st.out
