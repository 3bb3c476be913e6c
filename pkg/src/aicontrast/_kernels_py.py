"""Pure-Python quadrature kernels.

Mirrors ``_kernels.pyx`` step for step so both backends return the same
estimates up to floating-point rounding. Used when the compiled extension is
missing or ``AICONTRAST_PURE_PYTHON`` is set.
"""
import math

INITIAL_PANELS = 16


def adaptive_simpson(f, a, b, tol, max_subdivisions):
    """Adaptive Simpson integration of ``f`` over ``[a, b]``.

    The interval is first cut into a fixed number of panels so that an
    oscillatory integrand cannot fool the first Richardson test. Each panel
    then bisects until ``|S2 - S1| <= 15 * local_tol``, where the local
    tolerance is the absolute tolerance ``tol`` shared in proportion to panel
    width.

    Returns
    -------
    value, error, subdivisions, converged
    """
    if b <= a:
        return 0.0, 0.0, 0, True
    length = b - a
    h = length / INITIAL_PANELS
    stack = []
    # push in reverse so panels pop left to right
    for i in range(INITIAL_PANELS - 1, -1, -1):
        x0 = a + i * h
        x1 = b if i == INITIAL_PANELS - 1 else a + (i + 1) * h
        xm = 0.5 * (x0 + x1)
        f0, fm, f1 = f(x0), f(xm), f(x1)
        whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1)
        stack.append((x0, x1, f0, fm, f1, whole, tol * (x1 - x0) / length))

    total = 0.0
    error = 0.0
    nsub = 0
    converged = True
    while stack:
        x0, x1, f0, fm, f1, whole, local_tol = stack.pop()
        xm = 0.5 * (x0 + x1)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x1)
        fl, fr = f(xl), f(xr)
        left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + fm)
        right = (x1 - xm) / 6.0 * (fm + 4.0 * fr + f1)
        diff = left + right - whole
        if abs(diff) <= 15.0 * local_tol or xm <= x0 or x1 <= xm:
            total += left + right + diff / 15.0
            error += abs(diff) / 15.0
        elif nsub >= max_subdivisions:
            converged = False
            total += left + right + diff / 15.0
            error += abs(diff) / 15.0
        else:
            nsub += 1
            half_tol = 0.5 * local_tol
            stack.append((xm, x1, fm, fr, f1, right, half_tol))
            stack.append((x0, xm, f0, fl, fm, left, half_tol))
    return total, error, nsub, converged


def single_pulse_integrand(rho, area, k):
    """Radial weight times ``sin^2`` of half the local pulse area."""
    r2 = rho * rho
    s = math.sin(0.5 * area * math.exp(-k * r2))
    return rho * math.exp(-0.5 * r2) * s * s


def three_pulse_p2_at(rho, areas, ks, phases):
    """Upper-state population after three resonant pulses at one radius.

    Returns ``(p1, p2)`` so callers can check conservation.
    """
    r2 = rho * rho
    # state (c1, c2) as real/imag pairs, starting in the lower state
    c1r, c1i, c2r, c2i = 1.0, 0.0, 0.0, 0.0
    for area, k, phi in zip(areas, ks, phases):
        half = 0.5 * area * math.exp(-k * r2)
        a = math.cos(half)
        sn = math.sin(half)
        br = sn * math.cos(phi)
        bi = sn * math.sin(phi)
        # c1' = a c1 - i b c2 ; c2' = -i conj(b) c1 + a c2
        n1r = a * c1r + (br * c2i + bi * c2r)
        n1i = a * c1i - (br * c2r - bi * c2i)
        n2r = a * c2r + (br * c1i - bi * c1r)
        n2i = a * c2i - (br * c1r + bi * c1i)
        c1r, c1i, c2r, c2i = n1r, n1i, n2r, n2i
    return c1r * c1r + c1i * c1i, c2r * c2r + c2i * c2i


def three_pulse_integrand(rho, areas, ks, phases):
    return rho * math.exp(-0.5 * rho * rho) * three_pulse_p2_at(rho, areas, ks, phases)[1]


def simpson_single(area, k, upper, tol, max_subdivisions):
    return adaptive_simpson(lambda x: single_pulse_integrand(x, area, k),
                            0.0, upper, tol, max_subdivisions)


def simpson_three(areas, ks, phases, upper, tol, max_subdivisions):
    areas, ks, phases = tuple(areas), tuple(ks), tuple(phases)
    return adaptive_simpson(lambda x: three_pulse_integrand(x, areas, ks, phases),
                            0.0, upper, tol, max_subdivisions)
