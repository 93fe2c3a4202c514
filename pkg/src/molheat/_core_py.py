"""Pure-Python (numpy) implementation of the Green-tensor quadrature kernel.

Mirrors ``_core.pyx`` step for step so both backends return the same
numbers to rounding.  Integration variables are normalised by k = w/c:
``kind == 0`` integrates t = beta/k over propagating waves, ``kind == 1``
integrates x = b/k over evanescent ones.
"""

import numpy as np

# 15-point Kronrod nodes (non-negative half) and weights, 7-point Gauss weights
XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000])
WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

ROUNDOFF = 50.0 * np.finfo(float).eps

_NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
_WK = np.concatenate([WGK[:-1], WGK[::-1]])
_WG = np.zeros(15)
_WG[1:7:2] = WG[:3]
_WG[7] = WG[3]
_WG[9:14:2] = WG[2::-1]


def _sqrt_up(z):
    r = np.sqrt(z)
    return np.where(r.imag < 0, -r, r)


def _ratio(num, den):
    safe = den != 0
    return np.where(safe, num / np.where(safe, den, 1.0), 0.0)


def reflection_coefficients(kind, x, eps, mu, eps_s, mu_s, kd):
    """(r_s, r_p) at normalised integration variable ``x``.

    ``kd <= 0`` selects a half-space, otherwise a slab of optical
    thickness ``kd`` on the substrate (eps_s, mu_s).
    """
    x = np.asarray(x, dtype=float)
    if kind == 0:
        b2 = x * x
        bet = x + 0j
    else:
        b2 = -x * x
        bet = 1j * x
    # beta1^2 = (eps mu - 1) + beta^2, exact when the medium is vacuum
    b1sq = (eps * mu - 1.0) + b2
    b1 = _sqrt_up(b1sq + 0j)
    rs = _ratio(mu * mu * b2 - b1sq, (mu * bet + b1) ** 2)
    rp = _ratio(eps * eps * b2 - b1sq, (eps * bet + b1) ** 2)
    if kd <= 0:
        return rs, rp
    bssq = (eps_s * mu_s - 1.0) + b2
    bs = _sqrt_up(bssq + 0j)
    ph = np.exp(2j * b1 * kd)
    r12s = _ratio(mu_s * mu_s * b1sq - mu * mu * bssq, (mu_s * b1 + mu * bs) ** 2)
    r12p = _ratio(eps_s * eps_s * b1sq - eps * eps * bssq, (eps_s * b1 + eps * bs) ** 2)
    rs = (rs + r12s * ph) / (1.0 + rs * r12s * ph)
    rp = (rp + r12p * ph) / (1.0 + rp * r12p * ph)
    return rs, rp


def integrand(kind, x, zeta, eps, mu, eps_s, mu_s, kd):
    """(f_xx, f_zz) integrand values; the 1/(8 pi) prefactor is left out."""
    rs, rp = reflection_coefficients(kind, x, eps, mu, eps_s, mu_s, kd)
    x2 = np.asarray(x, dtype=float) ** 2
    if kind == 0:
        ph = 1j * np.exp(2j * zeta * x)
        return ph * (rs - x2 * rp), ph * 2.0 * (1.0 - x2) * rp
    ph = np.exp(-2.0 * zeta * x)
    return ph * (rs + x2 * rp), ph * 2.0 * (1.0 + x2) * rp


def _panels(kind, a, b, args):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fxx, fzz = integrand(kind, x, *args)
    f = np.stack([fxx.real, fxx.imag, fzz.real, fzz.imag], axis=-1)
    k = np.einsum("pnc,n->pc", f, _WK) * half[:, None]
    g = np.einsum("pnc,n->pc", f, _WG) * half[:, None]
    # error estimate with a rounding floor from the integral of |f|
    return k, np.maximum(np.abs(k - g), ROUNDOFF * np.einsum("pnc,n->pc", np.abs(f), _WK) * half[:, None])


def integrate(kind, edges, zeta, eps, mu, eps_s, mu_s, kd,
              rel_tol, abs_tol, max_bisections):
    """Globally adaptive Gauss-Kronrod integration over consecutive panels.

    Returns ``(I_xx, I_zz, err[4], n_panels, bisections, converged)`` where
    ``err`` holds the error estimates of Re/Im of the two components.
    """
    edges = np.asarray(edges, dtype=float)
    args = (zeta, complex(eps), complex(mu), complex(eps_s), complex(mu_s), float(kd))
    a, b = edges[:-1].copy(), edges[1:].copy()
    val, err = _panels(kind, a, b, args)
    bisections = 0
    converged = False
    while True:
        tot = val.sum(axis=0)
        etot = err.sum(axis=0)
        # Re and Im of one component share the modulus of that component
        mod = np.repeat(np.hypot(tot[0::2], tot[1::2]), 2)
        tol = np.maximum(abs_tol, rel_tol * mod)
        fail = etot > tol
        if not fail.any():
            converged = True
            break
        if bisections >= max_bisections:
            break
        thresh = np.where(fail, tol / len(a), np.inf)
        mark = np.any(err > thresh[None, :], axis=1)
        idx = np.nonzero(mark)[0]
        if bisections + len(idx) > max_bisections:
            break
        m = 0.5 * (a[idx] + b[idx])
        la, lb = a[idx], m
        ra, rb = m, b[idx]
        lv, le = _panels(kind, la, lb, args)
        rv, re_ = _panels(kind, ra, rb, args)
        b[idx] = m
        val[idx], err[idx] = lv, le
        a = np.concatenate([a, ra])
        b = np.concatenate([b, rb])
        val = np.concatenate([val, rv])
        err = np.concatenate([err, re_])
        bisections += len(idx)
    tot = val.sum(axis=0)
    etot = err.sum(axis=0)
    return (complex(tot[0], tot[1]), complex(tot[2], tot[3]), etot,
            len(a), bisections, converged)
