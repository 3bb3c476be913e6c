# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels.

Same algorithm and call signatures as ``_kernels_py``; the integrands are
evaluated in C without Python calls.
"""
from libc.math cimport sin, cos, exp, fabs
from libc.stdlib cimport malloc, free

cdef enum:
    INITIAL_PANELS = 16

cdef struct Params:
    int kind
    double area[3]
    double k[3]
    double cphi[3]
    double sphi[3]


cdef inline double _integrand(double rho, Params* p) nogil:
    cdef double r2 = rho * rho
    cdef double s, half, a, sn, br, bi
    cdef double c1r = 1.0, c1i = 0.0, c2r = 0.0, c2i = 0.0
    cdef double n1r, n1i, n2r, n2i
    cdef int i
    if p.kind == 0:
        s = sin(0.5 * p.area[0] * exp(-p.k[0] * r2))
        return rho * exp(-0.5 * r2) * s * s
    for i in range(3):
        half = 0.5 * p.area[i] * exp(-p.k[i] * r2)
        a = cos(half)
        sn = sin(half)
        br = sn * p.cphi[i]
        bi = sn * p.sphi[i]
        n1r = a * c1r + (br * c2i + bi * c2r)
        n1i = a * c1i - (br * c2r - bi * c2i)
        n2r = a * c2r + (br * c1i - bi * c1r)
        n2i = a * c2i - (br * c1r + bi * c1i)
        c1r = n1r
        c1i = n1i
        c2r = n2r
        c2i = n2i
    return rho * exp(-0.5 * r2) * (c2r * c2r + c2i * c2i)


cdef tuple _simpson(Params* p, double a, double b, double tol, int max_subdivisions):
    cdef double length = b - a
    cdef double h, x0, x1, xm, xl, xr, f0, fm, f1, fl, fr
    cdef double whole, left, right, diff, local_tol
    cdef double total = 0.0, error = 0.0
    cdef int nsub = 0, top = 0, i
    cdef bint converged = True
    cdef int cap = INITIAL_PANELS + max_subdivisions + 4
    cdef double* st
    if b <= a:
        return 0.0, 0.0, 0, True
    st = <double*> malloc(7 * cap * sizeof(double))
    if st == NULL:
        raise MemoryError()
    try:
        h = length / INITIAL_PANELS
        for i in range(INITIAL_PANELS - 1, -1, -1):
            x0 = a + i * h
            x1 = b if i == INITIAL_PANELS - 1 else a + (i + 1) * h
            xm = 0.5 * (x0 + x1)
            f0 = _integrand(x0, p)
            fm = _integrand(xm, p)
            f1 = _integrand(x1, p)
            st[7 * top + 0] = x0
            st[7 * top + 1] = x1
            st[7 * top + 2] = f0
            st[7 * top + 3] = fm
            st[7 * top + 4] = f1
            st[7 * top + 5] = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1)
            st[7 * top + 6] = tol * (x1 - x0) / length
            top += 1
        while top > 0:
            top -= 1
            x0 = st[7 * top + 0]
            x1 = st[7 * top + 1]
            f0 = st[7 * top + 2]
            fm = st[7 * top + 3]
            f1 = st[7 * top + 4]
            whole = st[7 * top + 5]
            local_tol = st[7 * top + 6]
            xm = 0.5 * (x0 + x1)
            xl = 0.5 * (x0 + xm)
            xr = 0.5 * (xm + x1)
            fl = _integrand(xl, p)
            fr = _integrand(xr, p)
            left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + fm)
            right = (x1 - xm) / 6.0 * (fm + 4.0 * fr + f1)
            diff = left + right - whole
            if fabs(diff) <= 15.0 * local_tol or xm <= x0 or x1 <= xm:
                total += left + right + diff / 15.0
                error += fabs(diff) / 15.0
            elif nsub >= max_subdivisions:
                converged = False
                total += left + right + diff / 15.0
                error += fabs(diff) / 15.0
            else:
                nsub += 1
                st[7 * top + 0] = xm
                st[7 * top + 1] = x1
                st[7 * top + 2] = fm
                st[7 * top + 3] = fr
                st[7 * top + 4] = f1
                st[7 * top + 5] = right
                st[7 * top + 6] = 0.5 * local_tol
                top += 1
                st[7 * top + 0] = x0
                st[7 * top + 1] = xm
                st[7 * top + 2] = f0
                st[7 * top + 3] = fl
                st[7 * top + 4] = fm
                st[7 * top + 5] = left
                st[7 * top + 6] = 0.5 * local_tol
                top += 1
    finally:
        free(st)
    return total, error, nsub, converged


def simpson_single(double area, double k, double upper, double tol, int max_subdivisions):
    cdef Params p
    p.kind = 0
    p.area[0] = area
    p.k[0] = k
    return _simpson(&p, 0.0, upper, tol, max_subdivisions)


def simpson_three(areas, ks, phases, double upper, double tol, int max_subdivisions):
    cdef Params p
    cdef int i
    p.kind = 1
    for i in range(3):
        p.area[i] = areas[i]
        p.k[i] = ks[i]
        p.cphi[i] = cos(phases[i])
        p.sphi[i] = sin(phases[i])
    return _simpson(&p, 0.0, upper, tol, max_subdivisions)
