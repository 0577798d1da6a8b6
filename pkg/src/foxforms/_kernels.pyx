# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: free reduction and word evaluation with tangent pushforward."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def reduce_letters(letters):
    cdef Py_ssize_t n = len(letters), top = 0, k
    cdef long a
    cdef long[::1] buf = np.empty(n, dtype=np.int_)
    for k in range(n):
        a = letters[k]
        if top > 0 and buf[top - 1] == -a:
            top -= 1
        else:
            buf[top] = a
            top += 1
    return [buf[k] for k in range(top)]


cdef inline void _matmul(double complex[:, ::1] A, double complex[:, ::1] B,
                         double complex[:, ::1] out, Py_ssize_t n) nogil:
    cdef Py_ssize_t r, c, k
    cdef double complex s
    for r in range(n):
        for c in range(n):
            s = 0
            for k in range(n):
                s = s + A[r, k] * B[k, c]
            out[r, c] = s


def word_eval_diff(letters, double complex[:, :, ::1] X, double complex[:, :, ::1] Xinv,
                   double complex[:, :, :, ::1] V):
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1], nb = V.shape[0]
    cdef Py_ssize_t L = len(letters), p, b, r, c, k
    cdef long[::1] lets = np.asarray(letters, dtype=np.int_).reshape(-1)
    E_arr = np.eye(n, dtype=np.complex128)
    acc_arr = np.zeros((nb, n, n), dtype=np.complex128)
    cdef double complex[:, ::1] E = E_arr
    cdef double complex[:, :, ::1] acc = acc_arr
    cdef double complex[:, ::1] t1 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] t2 = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] Y, Yinv
    cdef long a, i
    with nogil:
        for p in range(L):
            a = lets[p]
            i = (a if a > 0 else -a) - 1
            if a > 0:
                Y = X[i]
                Yinv = Xinv[i]
            else:
                Y = Xinv[i]
                Yinv = X[i]
            for b in range(nb):
                # acc <- Yinv acc Y
                _matmul(Yinv, acc[b], t1, n)
                _matmul(t1, Y, acc[b], n)
                if a > 0:
                    for r in range(n):
                        for c in range(n):
                            acc[b, r, c] = acc[b, r, c] + V[b, i, r, c]
                else:
                    # acc -= X v Xinv
                    _matmul(X[i], V[b, i], t1, n)
                    _matmul(t1, Xinv[i], t2, n)
                    for r in range(n):
                        for c in range(n):
                            acc[b, r, c] = acc[b, r, c] - t2[r, c]
            _matmul(E, Y, t1, n)
            for r in range(n):
                for c in range(n):
                    E[r, c] = t1[r, c]
    return E_arr, acc_arr
