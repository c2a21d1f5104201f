# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled batch encode/decode kernels.

Byte-for-byte identical semantics to flow2img._kernels_py; the benchmark in
benchmarks/bench_kernels.py compares the two.
"""

import numpy as np

BACKEND = "cython"


def encode_batch(z, idx, cont_flat, cat_flat, widths, int side):
    z = np.ascontiguousarray(np.asarray(z).astype("<f4", copy=False))
    cdef int n = z.shape[0]
    zb_arr = z.view(np.uint8).reshape(n, -1)
    out_arr = np.zeros((n, side * side * 3), dtype=np.uint8)

    cdef unsigned char[:, ::1] zb = zb_arr
    cdef unsigned char[:, ::1] out = out_arr
    cdef const int[:, :] ix = np.ascontiguousarray(idx, dtype=np.int32)
    cdef const long long[::1] cf = np.ascontiguousarray(cont_flat, dtype=np.int64)
    cdef const long long[::1] kf = np.ascontiguousarray(cat_flat, dtype=np.int64)
    cdef const long long[::1] w = np.ascontiguousarray(widths, dtype=np.int64)

    cdef Py_ssize_t i, b, j, pos
    cdef int v
    cdef Py_ssize_t nb = cf.shape[0], k = w.shape[0]
    with nogil:
        for i in range(n):
            for b in range(nb):
                out[i, cf[b]] = zb[i, b]
            pos = 0
            for j in range(k):
                v = ix[i, j]
                out[i, kf[pos]] = v & 0xFF
                pos += 1
                if w[j] == 2:
                    out[i, kf[pos]] = (v >> 8) & 0xFF
                    pos += 1
    return out_arr


def decode_batch(images, cont_flat, cat_flat, outside_flat, widths):
    images = np.ascontiguousarray(images, dtype=np.uint8)
    cdef int n = images.shape[0]
    cdef const long long[::1] cf = np.ascontiguousarray(cont_flat, dtype=np.int64)
    cdef const long long[::1] kf = np.ascontiguousarray(cat_flat, dtype=np.int64)
    cdef const long long[::1] of = np.ascontiguousarray(outside_flat, dtype=np.int64)
    cdef const long long[::1] w = np.ascontiguousarray(widths, dtype=np.int64)
    cdef Py_ssize_t nb = cf.shape[0], k = w.shape[0], no = of.shape[0]

    zb_arr = np.empty((n, nb), dtype=np.uint8)
    idx_arr = np.zeros((n, k), dtype=np.int32)
    stray_arr = np.zeros(n, dtype=np.uint8)

    cdef const unsigned char[:, ::1] img = images
    cdef unsigned char[:, ::1] zb = zb_arr
    cdef int[:, ::1] ix = idx_arr
    cdef unsigned char[::1] stray = stray_arr

    cdef Py_ssize_t i, b, j, pos
    cdef int v
    with nogil:
        for i in range(n):
            for b in range(nb):
                zb[i, b] = img[i, cf[b]]
            pos = 0
            for j in range(k):
                v = img[i, kf[pos]]
                pos += 1
                if w[j] == 2:
                    v = v | (img[i, kf[pos]] << 8)
                    pos += 1
                ix[i, j] = v
            for b in range(no):
                if img[i, of[b]] != 0:
                    stray[i] = 1
                    break
    z = zb_arr.view("<f4").reshape(n, -1)
    return z, idx_arr, stray_arr.astype(bool)
