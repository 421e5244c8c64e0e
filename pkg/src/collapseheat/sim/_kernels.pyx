# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Fused elementwise kernels for the density-matrix RK4 integrator.

Each RK4 stage evaluates k = -i([T, r] + [V, r]) - gamma * r, folds it into
the accumulator and writes the next stage input, in a single pass.
"""

ctypedef double complex cplx


def liouvillian_rhs(const cplx[:, ::1] a, const cplx[:, ::1] rho, const double[:, ::1] dv,
                    const double[:, ::1] gamma, cplx[:, ::1] out):
    """out = -i([T, rho] + [V, rho]) - gamma * rho, given a = rho @ T."""
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t i, j
    cdef cplx r, c
    cdef double g
    for i in range(n):
        for j in range(n):
            r = rho[i, j]
            g = gamma[i, j]
            # (T rho)_ij = conj(a_ji) since rho is Hermitian and T real symmetric
            c = a[j, i].conjugate() - a[i, j] + dv[i, j] * r
            out[i, j] = (c.imag - g * r.real) + 1j * (-c.real - g * r.imag)


def rk4_stage(const cplx[:, ::1] a, cplx[:, ::1] r, const double[:, ::1] dv, const double[:, ::1] gamma,
              cplx[:, ::1] acc, double weight, const cplx[:, ::1] base, double alpha, bint write_next):
    """acc += weight * k(r); then, if write_next, r = base + alpha * k(r) in place.

    Overwriting r is safe: element (i, j) of k depends on r only through r[i, j]
    and on the precomputed a.
    """
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t i, j
    cdef cplx x, c, k
    cdef double g
    for i in range(n):
        for j in range(n):
            x = r[i, j]
            g = gamma[i, j]
            c = a[j, i].conjugate() - a[i, j] + dv[i, j] * x
            k = (c.imag - g * x.real) + 1j * (-c.real - g * x.imag)
            acc[i, j] = acc[i, j] + weight * k
            if write_next:
                r[i, j] = base[i, j] + alpha * k


def hermiticity_error(const cplx[:, ::1] rho):
    """max |rho_ij - conj(rho_ji)|."""
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t i, j
    cdef double worst = 0.0, d
    cdef cplx diff
    for i in range(n):
        for j in range(i, n):
            diff = rho[i, j] - rho[j, i].conjugate()
            d = diff.real * diff.real + diff.imag * diff.imag
            if d > worst:
                worst = d
    return worst ** 0.5
