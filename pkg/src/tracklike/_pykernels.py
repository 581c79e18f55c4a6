"""Pure-Python twin of the compiled kernels in _ckernels.pyx.

Both twins perform the same floating-point operations in the same order,
so a given training run produces bit-identical results on either backend
(the extension is compiled with FP contraction disabled). Keep any change
here in lockstep with the .pyx file.

Buffers are flat row-major float64 sequences (array('d')).
"""

from __future__ import annotations

from math import exp, isfinite, sqrt

NAME = "python"


def matmul(a, b, out, n, m, p):
    # out[n x p] = A[n x m] . B[m x p], accumulating over k ascending
    for i in range(n):
        ia = i * m
        io = i * p
        for j in range(p):
            acc = 0.0
            for k in range(m):
                acc = acc + a[ia + k] * b[k * p + j]
            out[io + j] = acc


def matmul_tn(a, b, out, n, m, p):
    # out[m x p] = A[n x m]^T . B[n x p], accumulating over i ascending
    for k in range(m):
        ko = k * p
        for j in range(p):
            acc = 0.0
            for i in range(n):
                acc = acc + a[i * m + k] * b[i * p + j]
            out[ko + j] = acc


def affine_nt(x, w, bias, out, n, m, p):
    # out[n x p] = X[n x m] . W[p x m]^T + bias[p]
    for i in range(n):
        ix = i * m
        io = i * p
        for j in range(p):
            jw = j * m
            acc = bias[j]
            for k in range(m):
                acc = acc + x[ix + k] * w[jw + k]
            out[io + j] = acc


def relu_inplace(a, count):
    for i in range(count):
        if a[i] < 0.0:
            a[i] = 0.0


def sigmoid_inplace(a, count):
    for i in range(count):
        x = a[i]
        if x >= 0.0:
            a[i] = 1.0 / (1.0 + exp(-x))
        else:
            e = exp(x)
            a[i] = e / (1.0 + e)


def act_backward_inplace(delta, act_out, count, kind):
    # kind: 0 identity, 1 relu (subgradient 0 at 0), 2 sigmoid
    if kind == 0:
        return
    if kind == 1:
        for i in range(count):
            if act_out[i] <= 0.0:
                delta[i] = 0.0
    else:
        for i in range(count):
            a = act_out[i]
            delta[i] = delta[i] * (a * (1.0 - a))


def col_sums(a, out, n, m):
    # out[j] = sum over rows of A[n x m], row index ascending
    for j in range(m):
        acc = 0.0
        for i in range(n):
            acc = acc + a[i * m + j]
        out[j] = acc


def all_finite(a, count):
    for i in range(count):
        if not isfinite(a[i]):
            return False
    return True


def adam_update(w, g, m0, m1, count, alpha, beta1, beta2, eps, corr0, corr1):
    # corr0/corr1 are the bias-correction divisors (1.0 when correction is off);
    # eps sits inside the square root.
    om1 = 1.0 - beta1
    om2 = 1.0 - beta2
    for i in range(count):
        gi = g[i]
        m0i = beta1 * m0[i] + om1 * gi
        m1i = beta2 * m1[i] + om2 * (gi * gi)
        m0[i] = m0i
        m1[i] = m1i
        mh0 = m0i / corr0
        mh1 = m1i / corr1
        w[i] = w[i] - alpha * (mh0 / sqrt(mh1 + eps))
