# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Fused float64 kernels for the tensor hot path.

Mirrors the numpy backend function-for-function; each kernel makes a
single pass (or the minimum number of passes) over its operands instead
of the several temporaries the numpy compositions allocate.
"""

import numpy as np

from libc.math cimport exp, fabs, sqrt

NAME = "cython"


cdef void _softmax_rows(double[:, ::1] x, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t r, i
    cdef Py_ssize_t rows = x.shape[0], n = x.shape[1]
    cdef double mx, total
    for r in range(rows):
        mx = x[r, 0]
        for i in range(1, n):
            if x[r, i] > mx:
                mx = x[r, i]
        total = 0.0
        for i in range(n):
            out[r, i] = exp(x[r, i] - mx)
            total += out[r, i]
        for i in range(n):
            out[r, i] /= total


cdef void _softmax_rows_grad(double[:, ::1] y, double[:, ::1] gy,
                             double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t r, i
    cdef Py_ssize_t rows = y.shape[0], n = y.shape[1]
    cdef double inner
    for r in range(rows):
        inner = 0.0
        for i in range(n):
            inner += y[r, i] * gy[r, i]
        for i in range(n):
            out[r, i] = y[r, i] * (gy[r, i] - inner)


cdef void _layernorm_rows(double[:, ::1] x, double eps,
                          double[:, ::1] out, double[::1] rstd) noexcept nogil:
    cdef Py_ssize_t r, i
    cdef Py_ssize_t rows = x.shape[0], n = x.shape[1]
    cdef double mean, var, d, rs
    for r in range(rows):
        mean = 0.0
        for i in range(n):
            mean += x[r, i]
        mean /= n
        var = 0.0
        for i in range(n):
            d = x[r, i] - mean
            var += d * d
        var /= n
        rs = 1.0 / sqrt(var + eps)
        rstd[r] = rs
        for i in range(n):
            out[r, i] = (x[r, i] - mean) * rs


cdef void _layernorm_rows_grad(double[:, ::1] y, double[::1] rstd,
                               double[:, ::1] gy, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t r, i
    cdef Py_ssize_t rows = y.shape[0], n = y.shape[1]
    cdef double mean_gy, mean_gy_y
    for r in range(rows):
        mean_gy = 0.0
        mean_gy_y = 0.0
        for i in range(n):
            mean_gy += gy[r, i]
            mean_gy_y += gy[r, i] * y[r, i]
        mean_gy /= n
        mean_gy_y /= n
        for i in range(n):
            out[r, i] = rstd[r] * (gy[r, i] - mean_gy - y[r, i] * mean_gy_y)


def _rows(x):
    a = np.ascontiguousarray(x, dtype=np.float64)
    if a.ndim == 2:
        return a
    last = a.shape[a.ndim - 1]
    return a.reshape(-1, last)


def softmax_lastdim(x):
    x2 = _rows(x)
    out = np.empty_like(x2)
    _softmax_rows(x2, out)
    return out.reshape(np.shape(x))


def softmax_lastdim_grad(y, gy):
    y2 = _rows(y)
    gy2 = _rows(gy)
    out = np.empty_like(y2)
    _softmax_rows_grad(y2, gy2, out)
    return out.reshape(np.shape(y))


def layernorm_lastdim(x, eps):
    x2 = _rows(x)
    out = np.empty_like(x2)
    rstd = np.empty(x2.shape[0], dtype=np.float64)
    _layernorm_rows(x2, eps, out, rstd)
    shape = np.shape(x)
    return out.reshape(shape), rstd.reshape(shape[:-1] + (1,))


def layernorm_lastdim_grad(y, rstd, gy):
    y2 = _rows(y)
    gy2 = _rows(gy)
    r1 = np.ascontiguousarray(rstd, dtype=np.float64).reshape(-1)
    out = np.empty_like(y2)
    _layernorm_rows_grad(y2, r1, gy2, out)
    return out.reshape(np.shape(y))


def smooth_l1_mean(diff):
    cdef double[::1] d = np.ascontiguousarray(diff, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t i, n = d.shape[0]
    cdef double total = 0.0, a
    for i in range(n):
        a = fabs(d[i])
        if a < 1.0:
            total += 0.5 * d[i] * d[i]
        else:
            total += a - 0.5
    return total / n


def smooth_l1_mean_grad(diff, double gscale):
    flat = np.ascontiguousarray(diff, dtype=np.float64).reshape(-1)
    cdef double[::1] d = flat
    out = np.empty_like(flat)
    cdef double[::1] o = out
    cdef Py_ssize_t i, n = d.shape[0]
    cdef double scale = gscale / n
    for i in range(n):
        if fabs(d[i]) < 1.0:
            o[i] = d[i] * scale
        elif d[i] > 0.0:
            o[i] = scale
        else:
            o[i] = -scale
    return out.reshape(np.shape(diff))


def adam_update(param, grad, m, v, Py_ssize_t step,
                double lr, double beta1, double beta2, double eps):
    cdef double[::1] p = param.reshape(-1)
    cdef double[::1] g = np.ascontiguousarray(grad, dtype=np.float64).reshape(-1)
    cdef double[::1] mm = m.reshape(-1)
    cdef double[::1] vv = v.reshape(-1)
    cdef Py_ssize_t i, n = p.shape[0]
    cdef double c1 = 1.0 - beta1 ** step
    cdef double c2 = 1.0 - beta2 ** step
    for i in range(n):
        mm[i] = beta1 * mm[i] + (1.0 - beta1) * g[i]
        vv[i] = beta2 * vv[i] + (1.0 - beta2) * g[i] * g[i]
        p[i] -= lr * (mm[i] / c1) / (sqrt(vv[i] / c2) + eps)
