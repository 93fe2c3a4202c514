# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Green-tensor quadrature kernel.

Same algorithm and return values as ``molheat._core_py``; see that module
for the conventions.
"""

import numpy as np
cimport numpy as cnp

from libc.math cimport exp, fabs, sqrt

cnp.import_array()

cdef extern from "<complex.h>" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double cimag(double complex)
    double creal(double complex)

cdef double ROUNDOFF = 50.0 * 2.220446049250313e-16

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]

XGK[:] = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
          0.207784955007898467600689403773245, 0.0]
WGK[:] = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
          0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
WG[:] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
         0.381830050505118944950369775488975, 0.417959183673469387755102040816327]


ctypedef struct Params:
    int kind
    double zeta
    double complex eps, mu, eps_s, mu_s
    double kd


cdef inline double complex _sqrt_up(double complex z) noexcept nogil:
    cdef double complex r = csqrt(z)
    if cimag(r) < 0:
        return -r
    return r


cdef inline double complex _ratio(double complex num, double complex den) noexcept nogil:
    if den == 0:
        return 0
    return num / den


cdef void _reflect(const Params* p, double x, double complex* rs,
                   double complex* rp) noexcept nogil:
    cdef double b2
    cdef double complex bet, b1sq, b1, bssq, bs, ph, r12s, r12p, s, t
    if p.kind == 0:
        b2 = x * x
        bet = x
    else:
        b2 = -x * x
        bet = 1j * x
    # beta1^2 = (eps mu - 1) + beta^2, exact when the medium is vacuum
    b1sq = (p.eps * p.mu - 1.0) + b2
    b1 = _sqrt_up(b1sq)
    s = _ratio(p.mu * p.mu * b2 - b1sq, (p.mu * bet + b1) * (p.mu * bet + b1))
    t = _ratio(p.eps * p.eps * b2 - b1sq, (p.eps * bet + b1) * (p.eps * bet + b1))
    if p.kd > 0:
        bssq = (p.eps_s * p.mu_s - 1.0) + b2
        bs = _sqrt_up(bssq)
        ph = cexp(2j * b1 * p.kd)
        r12s = _ratio(p.mu_s * p.mu_s * b1sq - p.mu * p.mu * bssq,
                      (p.mu_s * b1 + p.mu * bs) * (p.mu_s * b1 + p.mu * bs))
        r12p = _ratio(p.eps_s * p.eps_s * b1sq - p.eps * p.eps * bssq,
                      (p.eps_s * b1 + p.eps * bs) * (p.eps_s * b1 + p.eps * bs))
        s = (s + r12s * ph) / (1.0 + s * r12s * ph)
        t = (t + r12p * ph) / (1.0 + t * r12p * ph)
    rs[0] = s
    rp[0] = t


cdef void _integrand(const Params* p, double x, double complex* fxx,
                     double complex* fzz) noexcept nogil:
    cdef double complex rs, rp, ph
    cdef double x2 = x * x
    _reflect(p, x, &rs, &rp)
    if p.kind == 0:
        ph = 1j * cexp(2j * p.zeta * x)
        fxx[0] = ph * (rs - x2 * rp)
        fzz[0] = ph * 2.0 * (1.0 - x2) * rp
    else:
        ph = exp(-2.0 * p.zeta * x)
        fxx[0] = ph * (rs + x2 * rp)
        fzz[0] = ph * 2.0 * (1.0 + x2) * rp


cdef void _panel(const Params* p, double a, double b, double* val, double* err) noexcept nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef double k[4]
    cdef double g[4]
    cdef double f[4]
    cdef double s[4]
    cdef double complex fxx, fzz
    cdef int j, c, sgn
    for c in range(4):
        k[c] = 0.0
        g[c] = 0.0
        s[c] = 0.0
    # centre node
    _integrand(p, mid, &fxx, &fzz)
    f[0] = creal(fxx); f[1] = cimag(fxx); f[2] = creal(fzz); f[3] = cimag(fzz)
    for c in range(4):
        k[c] += WGK[7] * f[c]
        g[c] += WG[3] * f[c]
        s[c] += WGK[7] * fabs(f[c])
    for j in range(7):
        for sgn in range(2):
            _integrand(p, mid + (1 - 2 * sgn) * half * XGK[j], &fxx, &fzz)
            f[0] = creal(fxx); f[1] = cimag(fxx); f[2] = creal(fzz); f[3] = cimag(fzz)
            for c in range(4):
                k[c] += WGK[j] * f[c]
                s[c] += WGK[j] * fabs(f[c])
                if j % 2 == 1:
                    g[c] += WG[j // 2] * f[c]
    for c in range(4):
        val[c] = k[c] * half
        # error estimate with a rounding floor from the integral of |f|
        err[c] = fabs(k[c] * half - g[c] * half)
        if err[c] < ROUNDOFF * s[c] * half:
            err[c] = ROUNDOFF * s[c] * half


def reflection_coefficients(int kind, x, eps, mu, eps_s, mu_s, double kd):
    """(r_s, r_p) at normalised integration variable ``x``."""
    cdef Params p
    p.kind = kind
    p.eps = eps; p.mu = mu; p.eps_s = eps_s; p.mu_s = mu_s
    p.kd = kd
    p.zeta = 0.0
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(np.ravel(x), dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], i
    cdef cnp.ndarray[double complex, ndim=1] rs = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[double complex, ndim=1] rp = np.empty(n, dtype=np.complex128)
    cdef double complex s, t
    for i in range(n):
        _reflect(&p, xs[i], &s, &t)
        rs[i] = s
        rp[i] = t
    shape = np.shape(x)
    return rs.reshape(shape), rp.reshape(shape)


def integrate(int kind, edges, double zeta, eps, mu, eps_s, mu_s, double kd,
              double rel_tol, double abs_tol, long max_bisections):
    """Globally adaptive Gauss-Kronrod integration over consecutive panels.

    Returns ``(I_xx, I_zz, err[4], n_panels, bisections, converged)``.
    """
    cdef Params p
    p.kind = kind
    p.zeta = zeta
    p.eps = eps; p.mu = mu; p.eps_s = eps_s; p.mu_s = mu_s
    p.kd = kd

    cdef cnp.ndarray[double, ndim=1] e = np.ascontiguousarray(edges, dtype=np.float64)
    cdef Py_ssize_t n0 = e.shape[0] - 1
    cdef Py_ssize_t cap = n0 + max_bisections
    cdef cnp.ndarray[double, ndim=1] A = np.empty(cap)
    cdef cnp.ndarray[double, ndim=1] B = np.empty(cap)
    cdef cnp.ndarray[double, ndim=2] V = np.empty((cap, 4))
    cdef cnp.ndarray[double, ndim=2] E = np.empty((cap, 4))
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mark = np.zeros(cap, dtype=np.uint8)
    cdef double[::1] a = A
    cdef double[::1] b = B
    cdef double[:, ::1] v = V
    cdef double[:, ::1] er = E
    cdef cnp.uint8_t[::1] mk = mark
    cdef Py_ssize_t n = n0, i, m, nm
    cdef long bisections = 0
    cdef bint converged = False, anyfail
    cdef double tot[4]
    cdef double etot[4]
    cdef double tol[4]
    cdef double thresh[4]
    cdef double mid
    cdef int c

    with nogil:
        for i in range(n0):
            a[i] = e[i]
            b[i] = e[i + 1]
            _panel(&p, a[i], b[i], &v[i, 0], &er[i, 0])
        while True:
            for c in range(4):
                tot[c] = 0.0
                etot[c] = 0.0
            for i in range(n):
                for c in range(4):
                    tot[c] += v[i, c]
                    etot[c] += er[i, c]
            anyfail = False
            for c in range(4):
                # Re and Im of one component share the modulus of that component
                tol[c] = rel_tol * sqrt(tot[c - c % 2] ** 2 + tot[c - c % 2 + 1] ** 2)
                if tol[c] < abs_tol:
                    tol[c] = abs_tol
                if etot[c] > tol[c]:
                    anyfail = True
                    thresh[c] = tol[c] / n
                else:
                    thresh[c] = -1.0
            if not anyfail:
                converged = True
                break
            if bisections >= max_bisections:
                break
            nm = 0
            for i in range(n):
                mk[i] = 0
                for c in range(4):
                    if thresh[c] >= 0 and er[i, c] > thresh[c]:
                        mk[i] = 1
                        nm += 1
                        break
            # respect the panel capacity when close to the limit
            if n + nm > cap:
                break
            m = n
            for i in range(n):
                if mk[i]:
                    mid = 0.5 * (a[i] + b[i])
                    a[m] = mid
                    b[m] = b[i]
                    b[i] = mid
                    _panel(&p, a[i], b[i], &v[i, 0], &er[i, 0])
                    _panel(&p, a[m], b[m], &v[m, 0], &er[m, 0])
                    m += 1
            n = m
            bisections += nm

    for c in range(4):
        tot[c] = 0.0
        etot[c] = 0.0
    for i in range(n):
        for c in range(4):
            tot[c] += v[i, c]
            etot[c] += er[i, c]
    return (complex(tot[0], tot[1]), complex(tot[2], tot[3]),
            np.array([etot[0], etot[1], etot[2], etot[3]]), int(n), int(bisections),
            bool(converged))
