"""Numpy implementations of the kernels in ``_kernels.pyx`` (same signatures and semantics)."""

import numpy as np


def liouvillian_rhs(a, rho, dv, gamma, out):
    comm = a.conj().T - a + dv * rho
    np.multiply(comm, -1j, out=out)
    out -= gamma * rho


def rk4_stage(a, r, dv, gamma, acc, weight, base, alpha, write_next):
    k = np.empty_like(r)
    liouvillian_rhs(a, r, dv, gamma, k)
    acc += weight * k
    if write_next:
        np.multiply(k, alpha, out=r)
        r += base


def hermiticity_error(rho):
    return float(np.max(np.abs(rho - rho.conj().T)))
