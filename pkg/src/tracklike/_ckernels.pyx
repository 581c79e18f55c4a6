# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled twin of _pykernels.py; see that module for the contract.

Keep the arithmetic (operation order, parenthesisation, branch structure)
in lockstep with the pure-Python twin: the backends must stay bit-identical.
"""

from libc.math cimport exp, isfinite, sqrt

NAME = "c"


def matmul(const double[::1] a, const double[::1] b, double[::1] out,
           Py_ssize_t n, Py_ssize_t m, Py_ssize_t p):
    cdef Py_ssize_t i, j, k, ia, io
    cdef double acc
    for i in range(n):
        ia = i * m
        io = i * p
        for j in range(p):
            acc = 0.0
            for k in range(m):
                acc = acc + a[ia + k] * b[k * p + j]
            out[io + j] = acc


def matmul_tn(const double[::1] a, const double[::1] b, double[::1] out,
              Py_ssize_t n, Py_ssize_t m, Py_ssize_t p):
    cdef Py_ssize_t i, j, k, ko
    cdef double acc
    for k in range(m):
        ko = k * p
        for j in range(p):
            acc = 0.0
            for i in range(n):
                acc = acc + a[i * m + k] * b[i * p + j]
            out[ko + j] = acc


def affine_nt(const double[::1] x, const double[::1] w, const double[::1] bias,
              double[::1] out, Py_ssize_t n, Py_ssize_t m, Py_ssize_t p):
    cdef Py_ssize_t i, j, k, ix, io, jw
    cdef double acc
    for i in range(n):
        ix = i * m
        io = i * p
        for j in range(p):
            jw = j * m
            acc = bias[j]
            for k in range(m):
                acc = acc + x[ix + k] * w[jw + k]
            out[io + j] = acc


def relu_inplace(double[::1] a, Py_ssize_t count):
    cdef Py_ssize_t i
    for i in range(count):
        if a[i] < 0.0:
            a[i] = 0.0


def sigmoid_inplace(double[::1] a, Py_ssize_t count):
    cdef Py_ssize_t i
    cdef double x, e
    for i in range(count):
        x = a[i]
        if x >= 0.0:
            a[i] = 1.0 / (1.0 + exp(-x))
        else:
            e = exp(x)
            a[i] = e / (1.0 + e)


def act_backward_inplace(double[::1] delta, const double[::1] act_out,
                         Py_ssize_t count, int kind):
    cdef Py_ssize_t i
    cdef double v
    if kind == 0:
        return
    if kind == 1:
        for i in range(count):
            if act_out[i] <= 0.0:
                delta[i] = 0.0
    else:
        for i in range(count):
            v = act_out[i]
            delta[i] = delta[i] * (v * (1.0 - v))


def col_sums(const double[::1] a, double[::1] out, Py_ssize_t n, Py_ssize_t m):
    cdef Py_ssize_t i, j
    cdef double acc
    for j in range(m):
        acc = 0.0
        for i in range(n):
            acc = acc + a[i * m + j]
        out[j] = acc


def all_finite(const double[::1] a, Py_ssize_t count):
    cdef Py_ssize_t i
    for i in range(count):
        if not isfinite(a[i]):
            return False
    return True


def adam_update(double[::1] w, const double[::1] g, double[::1] m0, double[::1] m1,
                Py_ssize_t count, double alpha, double beta1, double beta2,
                double eps, double corr0, double corr1):
    cdef Py_ssize_t i
    cdef double gi, m0i, m1i, mh0, mh1
    cdef double om1 = 1.0 - beta1
    cdef double om2 = 1.0 - beta2
    for i in range(count):
        gi = g[i]
        m0i = beta1 * m0[i] + om1 * gi
        m1i = beta2 * m1[i] + om2 * (gi * gi)
        m0[i] = m0i
        m1[i] = m1i
        mh0 = m0i / corr0
        mh1 = m1i / corr1
        w[i] = w[i] - alpha * (mh0 / sqrt(mh1 + eps))
