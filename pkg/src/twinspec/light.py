"""Field correlation functions for twin photons, stochastic light, cw pairs.

The twin-photon state of a cw-pumped type-II down-converter is summarised
by its two-photon amplitude: a rectangular correlation window of length T
(the entanglement time) times two phase terms in which the photons at
omega_1 and omega_2 arrive in either order.  The matched stochastic field
reproduces the same power spectrum; being a stationary Gaussian process its
four-point function factorises into sums of two-point products instead of
a single amplitude product.

All dropped constants (pump amplitude, quantization volume, normalisations)
are absorbed into the single `amplitude` parameter: twin four-point values
scale as amplitude^2, stochastic ones as amplitude^4.

Times are fs; frequencies cm^-1.  The rect window is one-sided, rect(x)=1
on [0, 1): the two-photon amplitude is time-ordered in its arguments, with
the later time first.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import LightKindError, TwinspecError
from .units import radian_phase, sinc, theta_cm

KINDS = ("twin", "stochastic", "cw_pair")


@dataclass(frozen=True)
class LightSpec:
    """Excitation field parameters; `entanglement_time_fs` is the window T."""

    kind: str
    omega1_cm1: float
    omega2_cm1: float
    entanglement_time_fs: float = None
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TwinspecError("unknown light kind %r (expected %s)" % (self.kind, KINDS))
        if self.omega1_cm1 <= 0 or self.omega2_cm1 <= 0:
            raise TwinspecError("beam frequencies must be positive")
        if self.amplitude <= 0:
            raise TwinspecError("amplitude must be positive")
        if self.kind in ("twin", "stochastic"):
            if self.entanglement_time_fs is None or self.entanglement_time_fs <= 0:
                raise TwinspecError("entanglement_time_fs must be positive for %s light" % self.kind)

    @property
    def omega_p(self):
        """Pump frequency omega_1 + omega_2 (cm^-1)."""
        return self.omega1_cm1 + self.omega2_cm1

    def with_pump(self, omega_p_cm1, omega2_cm1=None):
        """Same light, retuned so omega_1 = omega_p - omega_2."""
        w2 = self.omega2_cm1 if omega2_cm1 is None else omega2_cm1
        w1 = omega_p_cm1 - w2
        if w1 <= 0:
            raise TwinspecError("omega_1 = %.1f cm^-1 not positive at omega_p = %.1f" % (w1, omega_p_cm1))
        return replace(self, omega1_cm1=w1, omega2_cm1=w2)


def _require(spec, *kinds):
    if spec.kind not in kinds:
        raise LightKindError("operation needs %s light, got %r" % (" or ".join(kinds), spec.kind))


def rect(x):
    """One-sided unit window: 1 on [0, 1), 0 elsewhere (incl. negative x)."""
    x = np.asarray(x)
    out = np.where((x >= 0) & (x < 1.0), 1.0, 0.0)
    return out[()] if out.ndim == 0 else out


def tri(x):
    """Triangular window: 1 - |x| for |x| < 1, else 0."""
    x = np.asarray(x)
    out = np.where(np.abs(x) < 1.0, 1.0 - np.abs(x), 0.0)
    return out[()] if out.ndim == 0 else out


def _two_point(tau2_fs, tau1_fs, spec):
    d = np.asarray(tau1_fs) - np.asarray(tau2_fs)
    env = tri((np.asarray(tau2_fs) - np.asarray(tau1_fs)) / spec.entanglement_time_fs)
    phases = np.exp(-1j * radian_phase(spec.omega1_cm1, d)) + np.exp(
        -1j * radian_phase(spec.omega2_cm1, d)
    )
    return spec.amplitude**2 * env * phases


def twin_two_point(tau2_fs, tau1_fs, spec):
    """<E+(tau2) E(tau1)> for twin photons (constants absorbed in amplitude^2)."""
    _require(spec, "twin")
    return _two_point(tau2_fs, tau1_fs, spec)


def stochastic_two_point(tau2_fs, tau1_fs, spec):
    """Stochastic-field two-point function; same form as the twin one."""
    _require(spec, "stochastic")
    return _two_point(tau2_fs, tau1_fs, spec)


def twin_two_photon_amplitude(tau2_fs, tau1_fs, spec):
    """<0|E(tau2)E(tau1)|psi>, time-ordered: non-zero for 0 <= tau2-tau1 < T."""
    _require(spec, "twin")
    t2 = np.asarray(tau2_fs, dtype=float)
    t1 = np.asarray(tau1_fs, dtype=float)
    env = rect((t2 - t1) / spec.entanglement_time_fs)
    phases = np.exp(
        -1j * (radian_phase(spec.omega1_cm1, t1) + radian_phase(spec.omega2_cm1, t2))
    ) + np.exp(
        -1j * (radian_phase(spec.omega1_cm1, t2) + radian_phase(spec.omega2_cm1, t1))
    )
    return spec.amplitude * env * phases


def cw_two_photon_amplitude(tau2_fs, tau1_fs, spec):
    """Two monochromatic beams: the T -> infinity twin amplitude, no envelope."""
    _require(spec, "cw_pair")
    t2 = np.asarray(tau2_fs, dtype=float)
    t1 = np.asarray(tau1_fs, dtype=float)
    phases = np.exp(
        -1j * (radian_phase(spec.omega1_cm1, t1) + radian_phase(spec.omega2_cm1, t2))
    ) + np.exp(
        -1j * (radian_phase(spec.omega1_cm1, t2) + radian_phase(spec.omega2_cm1, t1))
    )
    return spec.amplitude * phases


def twin_four_point(t3_fs, t4_fs, t2_fs, t1_fs, spec):
    """<psi|E+(t3)E+(t4)|0><0|E(t2)E(t1)|psi>; the first argument of each
    pair is the later (bra-side time ordering)."""
    _require(spec, "twin")
    return np.conj(twin_two_photon_amplitude(t3_fs, t4_fs, spec)) * twin_two_photon_amplitude(
        t2_fs, t1_fs, spec
    )


def stochastic_four_point(t1_fs, t2_fs, t3_fs, t4_fs, spec):
    """Gaussian four-point function: both pairings of two-point products.

    <E+(t3)E+(t4)E(t2)E(t1)> = <E+(t3)E(t1)><E+(t4)E(t2)>
                             + <E+(t4)E(t1)><E+(t3)E(t2)>
    """
    _require(spec, "stochastic")
    return _two_point(t3_fs, t1_fs, spec) * _two_point(t4_fs, t2_fs, spec) + _two_point(
        t4_fs, t1_fs, spec
    ) * _two_point(t3_fs, t2_fs, spec)


def power_spectrum(omega_cm1, spec):
    """n(w) = amplitude^2 (sinc^2((w-w1)*Theta/2) + sinc^2((w-w2)*Theta/2)).

    Identical for twin and stochastic specs with equal parameters; the
    stochastic field is constructed to reproduce this spectrum.
    """
    _require(spec, "twin", "stochastic")
    theta = theta_cm(spec.entanglement_time_fs)
    w = np.asarray(omega_cm1, dtype=float)
    return spec.amplitude**2 * (
        sinc((w - spec.omega1_cm1) * theta / 2.0) ** 2
        + sinc((w - spec.omega2_cm1) * theta / 2.0) ** 2
    )


def spectral_density_shape(nu_cm1, spec):
    """Unit-amplitude power-spectrum shape n(nu); the stochastic two-point
    function is its Fourier transform: W(d) = (Theta/2pi) int n(nu) e^{-i nu d} dnu."""
    theta = theta_cm(spec.entanglement_time_fs)
    nu = np.asarray(nu_cm1, dtype=float)
    return (
        sinc((nu - spec.omega1_cm1) * theta / 2.0) ** 2
        + sinc((nu - spec.omega2_cm1) * theta / 2.0) ** 2
    )
