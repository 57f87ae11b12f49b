# dev scratch: arbitrate eII disagreement with a literal 4D loop sum
import numpy as np

from twinspec.model import ExcitonModel
from twinspec.light import LightSpec
from twinspec import response as R
from twinspec import oracle as O
from twinspec.units import TWO_PI_C_FS

rng = np.random.default_rng(3)

model = ExcitonModel(
    e_energies=[12000.0, 12700.0],
    f_energies=[24500.0],
    mu_ge=[1.0, 0.8],
    mu_ef=[[0.9, 1.1]],
    gamma_e=200.0,
    gamma_f=220.0,
)
T = 14.0
twin = LightSpec("twin", 13300.0, 11200.0, T, amplitude=1.0)
stoch = LightSpec("stochastic", 13300.0, 11200.0, T, amplitude=1.0)


def brute_eII(model, spec, n=72, tmax=None):
    """Literal quadruple loop over the diagram-II term (sign-stripped)."""
    gmin = min(model.gamma_e.min(), model.gamma_f.min())
    tmax = tmax or 8.0 / (gmin * TWO_PI_C_FS)
    h = tmax / n
    m = max(1, round(spec.entanglement_time_fs / h))
    h = spec.entanglement_time_fs / m
    n = int(np.ceil(tmax / h))
    ts = (np.arange(n + 1) - n) * h
    w = np.full(n + 1, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    ne = model.n_e

    def rectw(d):
        tol = 1e-6 * h
        if d > tol and d < spec.entanglement_time_fs - tol:
            return 1.0
        if abs(d) <= tol or abs(d - spec.entanglement_time_fs) <= tol:
            return 0.5
        return 0.0

    def amp(a, b):  # <0|E(t_a)E(t_b)|psi>, t_a later
        ph = np.exp(
            -1j * TWO_PI_C_FS * (spec.omega1_cm1 * b + spec.omega2_cm1 * a)
        ) + np.exp(-1j * TWO_PI_C_FS * (spec.omega1_cm1 * a + spec.omega2_cm1 * b))
        return rectw(a - b) * ph

    def W(d):  # two-point / amp^2, d = ann - cre
        x = d / spec.entanglement_time_fs
        tri = max(0.0, 1.0 - abs(x))
        return tri * (
            np.exp(-1j * TWO_PI_C_FS * spec.omega1_cm1 * d)
            + np.exp(-1j * TWO_PI_C_FS * spec.omega2_cm1 * d)
        )

    def prop(omega, gamma, dt):
        return np.exp(-1j * (omega - 1j * gamma) * TWO_PI_C_FS * dt)

    lit = np.zeros((ne, ne), dtype=complex)
    for k1 in range(n + 1):
        for k2 in range(k1, n + 1):
            o12 = 0.5 if k2 == k1 else 1.0
            if spec.kind == "twin":
                a_ket = amp(ts[k2], ts[k1])
                if a_ket == 0.0:
                    continue
            for k3 in range(k2, n + 1):
                o23 = 0.5 if k3 == k2 else 1.0
                for k4 in range(n + 1):
                    if spec.kind == "twin":
                        field = np.conj(
                            amp(ts[k3], ts[k4]) + amp(ts[k4], ts[k3])
                        ) * a_ket
                    else:
                        field = W(ts[k1] - ts[k3]) * W(ts[k2] - ts[k4]) + W(
                            ts[k2] - ts[k3]
                        ) * W(ts[k1] - ts[k4])
                    if field == 0.0:
                        continue
                    wt = w[k1] * w[k2] * w[k3] * w[k4] * o12 * o23
                    for ep in range(ne):
                        chain = (
                            np.real(model.mu_ge[ep])
                            * np.real(model.mu_ef[0, ep])
                            * prop(model.e_energies[ep], model.gamma_e[ep], ts[k2] - ts[k1])
                            * prop(model.f_energies[0], model.gamma_f[0], ts[k3] - ts[k2])
                        )
                        for i in range(ne):
                            di = prop(model.e_energies[i], model.gamma_e[i], 0.0 - ts[k3])
                            for j in range(ne):
                                dj = np.conj(
                                    prop(model.e_energies[j], model.gamma_e[j], 0.0 - ts[k4])
                                )
                                lit[i, j] += (
                                    wt
                                    * chain
                                    * np.real(model.mu_ef[0, i])
                                    * np.real(model.mu_ge[j])
                                    * di
                                    * dj
                                    * field
                                )
    scale = TWO_PI_C_FS**4 * (spec.amplitude**4 if spec.kind == "stochastic" else 1.0)
    return lit * scale


for spec in (twin, stoch):
    print("==", spec.kind)
    brute = brute_eII(model, spec, n=64)
    brute_h = brute + brute.conj().T
    cfg = O.OracleConfig(n_steps=128, check_convergence=False)
    times, wts, h = O._grid(model, spec, cfg, 128)
    orc = O._oracle_eII(model, spec, times, wts, h)
    orc_h = orc + orc.conj().T
    if spec.kind == "twin":
        closed = R.rho_e_fourth_entangled(model, spec).data
    else:
        closed = R.rho_e_fourth_stochastic(model, spec).data
    print("brute  one-sided:\n", brute)
    print("oracle one-sided:\n", orc)
    print("closed (herm):\n", closed)
    print("brute (herm):\n", brute_h)
    print("ratios closed/brute:\n", closed / brute_h)
    print("ratios oracle/brute:\n", orc_h / brute_h)
