# dev scratch: literal 4D tensor sum for diagram II (twin), chunked over k4
import numpy as np

from scratch_eII import model, twin, stoch
from twinspec import response as R
from twinspec import oracle as O
from twinspec.units import TWO_PI_C_FS


def brute4d(model, spec, n_target):
    gmin = min(model.gamma_e.min(), model.gamma_f.min())
    tmax = 9.0 / (gmin * TWO_PI_C_FS)
    h = tmax / n_target
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
        return np.where(
            (d > tol) & (d < spec.entanglement_time_fs - tol),
            1.0,
            np.where(
                (np.abs(d) <= tol) | (np.abs(d - spec.entanglement_time_fs) <= tol),
                0.5,
                0.0,
            ),
        )

    def phases(a, b):
        return np.exp(
            -1j * TWO_PI_C_FS * (spec.omega1_cm1 * b + spec.omega2_cm1 * a)
        ) + np.exp(-1j * TWO_PI_C_FS * (spec.omega1_cm1 * a + spec.omega2_cm1 * b))

    def amp(a, b):
        return rectw(a - b) * phases(a, b)

    def wtri(d):
        x = d / spec.entanglement_time_fs
        return np.maximum(0.0, 1.0 - np.abs(x)) * (
            np.exp(-1j * TWO_PI_C_FS * spec.omega1_cm1 * d)
            + np.exp(-1j * TWO_PI_C_FS * spec.omega2_cm1 * d)
        )

    def prop(omega, gamma, dt):
        return np.exp(-1j * (omega - 1j * gamma) * TWO_PI_C_FS * dt)

    t1 = ts[:, None, None]
    t2 = ts[None, :, None]
    t3 = ts[None, None, :]
    ord12 = (t1 < t2) * 1.0 + (t1 == t2) * 0.5
    ord23 = (t2 < t3) * 1.0 + (t2 == t3) * 0.5
    chain3 = np.zeros((ne, n + 1, n + 1, n + 1), dtype=complex)
    for ep in range(ne):
        mu2 = np.real(model.mu_ge[ep]) * np.real(model.mu_ef[0, ep])
        chain3[ep] = (
            mu2
            * prop(model.e_energies[ep], model.gamma_e[ep], t2 - t1)
            * ord12
            * ord23
            * prop(model.f_energies[0], model.gamma_f[0], t3 - t2)
        )
    chain = chain3.sum(axis=0) * (w[:, None, None] * w[None, :, None] * w[None, None, :])
    if spec.kind == "twin":
        chain = chain * amp(ts[None, :, None], ts[:, None, None])  # A(t2, t1)

    dec = np.array(
        [prop(model.e_energies[e], model.gamma_e[e], 0.0 - ts) for e in range(ne)]
    )
    lit = np.zeros((ne, ne), dtype=complex)
    for k4 in range(n + 1):
        t4 = ts[k4]
        if spec.kind == "twin":
            field = np.conj(amp(ts, t4) + amp(t4, ts))  # [k3]
            f3 = chain * field[None, None, :]
        else:
            f3 = chain * (
                wtri(t1 - t3) * wtri(ts[None, None, :] * 0 + (t2 - t4))
                + wtri(t2 - t3) * wtri(t1 - t4)
            )
        s3 = f3.sum(axis=(0, 1))  # hmm: need per-(i) weighting first
        for i in range(ne):
            zi = (f3 * dec[i][None, None, :]).sum()
            for j in range(ne):
                lit[i, j] += (
                    zi
                    * np.real(model.mu_ef[0, i])
                    * np.real(model.mu_ge[j])
                    * np.conj(dec[j][k4])
                    * w[k4]
                )
    scale = TWO_PI_C_FS**4 * (spec.amplitude**4 if spec.kind == "stochastic" else 1.0)
    return lit * scale


for spec in (twin,):
    print("==", spec.kind)
    vals = {}
    for ntarget in (40, 64):
        b = brute4d(model, spec, ntarget)
        vals[ntarget] = b + b.conj().T
        print(f"brute n~{ntarget}:\n", vals[ntarget])
    rich = vals[64] + (vals[64] - vals[40]) / ((64 / 40) ** 2 - 1)
    closed = R.rho_e_fourth_entangled(model, spec).data
    cfg = O.OracleConfig(n_steps=256, check_convergence=False)
    times, wts, h = O._grid(model, spec, cfg, 256)
    orc = O._oracle_eII(model, spec, times, wts, h)
    orc_h = orc + orc.conj().T
    print("richardson:\n", rich)
    print("closed/rich:\n", np.round(closed / rich, 4))
    print("oracle/rich:\n", np.round(orc_h / rich, 4))
    print("closed/oracle:\n", np.round(closed / orc_h, 4))
