"""Analytic building blocks of the closed-form density-matrix expressions.

The perturbative integrals all reduce to exponential difference quotients
and window integrals over the correlation time of the light.  Everything
here works in "phase units": a frequency argument x is in cm^-1 and the
window length theta = 2*pi*c*T is in cm, so x*theta is a radian phase.

All helpers accept complex arguments (detunings carry +/- i*gamma) and are
series-stabilised near their removable singularities.
"""

import numpy as np

from .errors import DegenerateInputError

_DENOM_GUARD = 1e-9


def guarded_reciprocal(z):
    """1/z, raising if any |z| falls below the guard threshold.

    With strictly positive linewidths the guard can only trip on corrupt
    input, so failing loudly beats silent regularisation.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < _DENOM_GUARD):
        raise DegenerateInputError(
            "resonance denominator below %.0e; zero-width input?" % _DENOM_GUARD
        )
    return 1.0 / z


def phi1(z):
    """(exp(z) - 1)/z, series near z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    direct = (np.exp(zs) - 1.0) / zs
    series = sum(z**n / _factorial(n + 1) for n in range(9))
    return np.where(small, series, direct)


def psi2(z):
    """(exp(z) - 1 - z)/z^2, series near z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    direct = (np.exp(zs) - 1.0 - zs) / zs**2
    series = sum(z**n / _factorial(n + 2) for n in range(9))
    return np.where(small, series, direct)


def _factorial(n):
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def diff_quotient(x, theta):
    """(exp(i*x*theta) - 1)/x, the exponential-difference factor.

    This is the exact finite-window integral int_0^theta exp(i*x*s) ds up
    to a factor i; the widely quoted sinc approximation is
    diff_quotient ~ i*theta*exp(i*x*theta/2)*sinc(x*theta/2).
    """
    x = np.asarray(x, dtype=complex)
    return 1j * theta * phi1(1j * x * theta)


def lorentzian_quotient(x):
    """1/x for complex detunings, guarded against vanishing denominators."""
    return guarded_reciprocal(x)


def tri_overlap(alpha, beta, theta):
    """Two-sided triangular-window overlap integral.

    J(alpha, beta) = int_0^inf du int_0^inf dv exp(i*alpha*u - i*beta*v)
                     * tri((u - v)/theta)

    Requires Im(alpha) > 0 and Im(beta) < 0 for convergence.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    pref = 1j * guarded_reciprocal(alpha - beta)
    return pref * theta * (psi2(1j * alpha * theta) + psi2(-1j * beta * theta))


def rect_strip(alpha, beta, theta):
    """Two-sided rectangular-strip integral.

    G(alpha, beta) = int_0^inf dw int_0^inf dv exp(i*alpha*w - i*beta*v)
                     restricted to |w - v| < theta.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    pref = 1j * guarded_reciprocal(alpha - beta)
    return pref * theta * (phi1(1j * alpha * theta) + phi1(-1j * beta * theta))


def _dd_exp(x, y, theta):
    """First divided difference of f(t) = exp(i*theta*t) at nodes x, y."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    d = x - y
    small = np.abs(d) * theta < 0.1
    ds = np.where(small, 1.0, d)
    direct = (np.exp(1j * theta * x) - np.exp(1j * theta * y)) / ds
    series = np.exp(1j * theta * y) * 1j * theta * phi1(1j * theta * d)
    return np.where(small, series, direct)


def dd2_exp(a, b, theta):
    """Second divided difference f[a, b, 0] of f(t) = exp(i*theta*t).

    Evaluated through the Hermite-Genocchi simplex series when all nodes
    cluster near zero, otherwise by divided differences with the widest
    node pair taken last (minimises cancellation).
    """
    a, b = np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    )
    sa, sb = np.abs(a) * theta, np.abs(b) * theta
    small = (sa < 0.15) & (sb < 0.15)

    # series: (i theta)^2 sum_{m,n} (i theta a)^m (i theta b)^n / (m+n+2)!
    pa, pb = 1j * theta * a, 1j * theta * b
    series = np.zeros_like(a)
    for m in range(12):
        for n in range(12 - m):
            series = series + pa**m * pb**n / _factorial(m + n + 2)
    series = series * (1j * theta) ** 2

    # direct, three permutations keyed on the largest outer spread
    with np.errstate(divide="ignore", invalid="ignore"):
        da, db, dab = np.abs(a), np.abs(b), np.abs(a - b)
        f_ab = _dd_exp(a, b, theta)
        f_a0 = _dd_exp(a, np.zeros_like(a), theta)
        f_b0 = _dd_exp(b, np.zeros_like(b), theta)
        via_a = (f_ab - f_b0) / np.where(da == 0, 1.0, a)
        via_b = (f_ab - f_a0) / np.where(db == 0, 1.0, b)
        via_ab = (f_a0 - f_b0) / np.where(dab == 0, 1.0, a - b)
    direct = np.where(
        (da >= db) & (da >= dab), via_a, np.where(db >= dab, via_b, via_ab)
    )
    out = np.where(small, series, direct)
    if out.ndim == 0:
        return out[()]
    return out


def triangle_double(P, z, theta):
    """Ordered triangle integral with two phases.

    R(P, z) = int_0^theta du1 int_0^{theta-u1} du2 exp(i*P*u1 + i*z*u2)

    Equals -f[P, z, 0] for f(t) = exp(i*theta*t); symmetric in (P, z).
    """
    return -dd2_exp(P, z, theta)
