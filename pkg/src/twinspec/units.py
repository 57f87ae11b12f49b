"""Unit conventions.

Energies, frequencies and linewidths are in cm^-1 throughout, times in fs,
positions in Angstrom, transition dipoles in Debye.  hbar = 1, so energies
and angular frequencies share the cm^-1 scale.

Every product of a frequency (cm^-1) with a time (fs) is converted to a
radian phase through the single constant TWO_PI_C_FS below.  Nothing else
in the code base multiplies cm^-1 by fs directly.
"""

import numpy as np

# 2*pi*c in rad fs^-1 per cm^-1
TWO_PI_C_FS = 1.883652e-4

# point-dipole coupling prefactor, cm^-1 Angstrom^3 / Debye^2
DIPOLE_COUPLING_CM1 = 5034.0


def radian_phase(omega_cm1, t_fs):
    """Phase (rad) accumulated by frequency omega_cm1 over t_fs."""
    return TWO_PI_C_FS * np.asarray(omega_cm1) * np.asarray(t_fs)


def theta_cm(T_fs):
    """Entanglement time expressed in inverse wavenumbers (2*pi*c*T).

    A frequency in cm^-1 multiplied by this quantity is a radian phase,
    so closed-form expressions can stay entirely in cm^-1 units.
    """
    return TWO_PI_C_FS * T_fs


def sinc(x):
    """sin(x)/x with the removable singularity handled by series below 1e-4.

    Accepts real or complex arguments.
    """
    x = np.asarray(x)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0 + x**4 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return out[()]
    return out
