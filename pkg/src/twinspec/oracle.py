"""Brute-force time-domain integration of the perturbative diagrams.

Validates every closed form in response.py by integrating the raw
convolution of matter and field correlation functions on a uniform time
grid: matter correlators are expanded in sum-over-states with
exp(-i w_xg tau - gamma_x tau) damping, field correlators come from the
public functions in light.py, and the nested time-ordered integrals are
evaluated with trapezoidal weights.  Ordering boundaries and sharp window
edges carry half weights, which keeps the rule second order in the step.

The quadruple integrals are contracted through cumulative sums and matrix
products -- an exact reordering of the trapezoid sum -- so the fourth-order
diagrams cost O(n^2)..O(n^3) instead of O(n^4).

Unit and sign conventions match response.py: one factor 2*pi*c per time
axis, and the fourth-order e-manifold results are reported in the
positive-population convention (FOURTH_ORDER_E_SIGN times the literal
diagram value), identically to the closed forms they are compared with.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, LightKindError, TwinspecError
from .light import (
    cw_two_photon_amplitude,
    stochastic_two_point,
    twin_two_photon_amplitude,
    twin_two_point,
)
from .response import DensityMatrix, TransitionAmplitudes
from .units import TWO_PI_C_FS, radian_phase

WHICH = ("e2", "eI", "eII", "fIII")

_KIND_OK = {
    "e2": ("twin", "stochastic"),
    "eI": ("twin",),
    "eII": ("twin", "stochastic"),
    "fIII": ("twin", "stochastic"),
}


@dataclass(frozen=True)
class OracleConfig:
    """Quadrature controls for the time-domain oracle.

    t_max_fs defaults to 10 / gamma_min and must cover at least five decay
    times of the slowest state; order "fourth" adds one Richardson
    extrapolation step on top of the trapezoid rule.
    """

    t_max_fs: float = None
    n_steps: int = 256
    order: str = "second"
    convergence_tol: float = 0.01
    check_convergence: bool = True

    def __post_init__(self):
        if self.n_steps < 64:
            raise TwinspecError("oracle needs n_steps >= 64")
        if self.order not in ("second", "fourth"):
            raise TwinspecError("order must be 'second' or 'fourth'")

    def horizon_fs(self, model):
        gmin = float(model.gamma_e.min())
        if model.n_f:
            gmin = min(gmin, float(model.gamma_f.min()))
        tmax = self.t_max_fs
        if tmax is None:
            tmax = 10.0 / (gmin * TWO_PI_C_FS)
        if tmax < 5.0 / (gmin * TWO_PI_C_FS):
            raise TwinspecError(
                "t_max_fs = %.1f fs is below five decay times of the slowest state"
                % tmax
            )
        return tmax


def _grid(model, spec, cfg, n_steps):
    """Uniform times in [-t_max, 0] with the spacing locked to the window
    length so that rect/tri edges fall on grid nodes."""
    tmax = cfg.horizon_fs(model)
    h = tmax / n_steps
    if spec.kind in ("twin", "stochastic"):
        m = max(1, int(round(spec.entanglement_time_fs / h)))
        h = spec.entanglement_time_fs / m
    n = int(np.ceil(tmax / h - 1e-9))
    times = (np.arange(n + 1) - n) * h
    wts = np.full(n + 1, h)
    wts[0] *= 0.5
    wts[-1] *= 0.5
    return times, wts, h


def _prop(times, omega, gamma):
    """exp(-i(omega - i gamma) 2 pi c (t_a - t_b)) as matrix [a, b].

    Only meaningful for t_a >= t_b; callers mask the other triangle.
    """
    dt = TWO_PI_C_FS * (times[:, None] - times[None, :])
    return np.exp(-1j * (omega - 1j * gamma) * dt)


def _decay_to_zero(times, omega, gamma):
    """exp(-i(omega - i gamma) 2 pi c (0 - t)): free evolution up to t = 0."""
    dt = TWO_PI_C_FS * (0.0 - times)
    return np.exp(-1j * (omega - 1j * gamma) * dt)


def _rect_edge_weight(dt_fs, T_fs, h_fs):
    tol = 1e-6 * h_fs
    inside = (dt_fs > tol) & (dt_fs < T_fs - tol)
    edge = (np.abs(dt_fs) <= tol) | (np.abs(dt_fs - T_fs) <= tol)
    return 1.0 * inside + 0.5 * edge


def _bare_twin_phases(ta, tb, spec):
    w1, w2 = spec.omega1_cm1, spec.omega2_cm1
    return spec.amplitude * (
        np.exp(-1j * (radian_phase(w1, tb) + radian_phase(w2, ta)))
        + np.exp(-1j * (radian_phase(w1, ta) + radian_phase(w2, tb)))
    )


def _pair_amplitude(times, spec, h_fs):
    """Integration-ready two-photon amplitude matrix A[a, b] (t_a later).

    Values equal twin_two_photon_amplitude in the window interior; exact
    window-edge nodes carry half weight.  For the cw pair the ordering
    t_b <= t_a is imposed here instead (no envelope exists).
    """
    ta = times[:, None]
    tb = times[None, :]
    if spec.kind == "twin":
        wgt = _rect_edge_weight(ta - tb, spec.entanglement_time_fs, h_fs)
        return wgt * _bare_twin_phases(ta, tb, spec)
    if spec.kind == "cw_pair":
        amp = cw_two_photon_amplitude(ta, tb, spec)
        order = 1.0 * (ta > tb) + 0.5 * (ta == tb)
        return amp * order
    raise LightKindError("pair amplitude needs twin or cw_pair light")


def _sym_pair_amplitude(times, spec, h_fs):
    """A(x, y) + A(y, x): both photon orderings, continuous across x = y."""
    a = _pair_amplitude(times, spec, h_fs)
    return a + a.T


def _two_point_matrix(times, spec):
    """W[a, b] = <E+(t_b) E(t_a)> / amplitude^2 from the public two-point."""
    f = twin_two_point if spec.kind == "twin" else stochastic_two_point
    return f(times[None, :], times[:, None], spec) / spec.amplitude**2


def _ordered_mask(n):
    """mask[a, b] = 1 for a < b, 1/2 on the diagonal: enforces t_a <= t_b."""
    return np.triu(np.ones((n, n)), k=1) + 0.5 * np.eye(n)


def _rev_cumsum_half(x, axis):
    """out[..., k, ...] = x[k]/2 + sum_{m > k} x[m]: ordered tail sums."""
    rev = np.flip(np.cumsum(np.flip(x, axis=axis), axis=axis), axis=axis)
    return rev - 0.5 * x


# ---------------------------------------------------------------------------
# diagram integrators (raw contractions; signs and units applied by callers)
# ---------------------------------------------------------------------------


def _oracle_e2(model, spec, times, wts):
    f2 = twin_two_point if spec.kind == "twin" else stochastic_two_point
    # c2[k, l] = <E+(t_l) E(t_k)>: l indexes the daggered (bra) interaction
    c2 = f2(times[None, :], times[:, None], spec)
    dec = np.array(
        [
            _decay_to_zero(times, model.e_energies[e], model.gamma_e[e])
            for e in range(model.n_e)
        ]
    )
    x = np.conj(model.mu_ge)[:, None] * dec * wts[None, :]
    y = model.mu_ge[:, None] * np.conj(dec) * wts[None, :]
    rho = np.einsum("ik,kl,jl->ij", x, c2, y)
    return TWO_PI_C_FS**2 * rho


def _chain_e_to_f(model, f_idx, times):
    """sum_e mu_ge mu_ef prop_e[a later, b earlier], the g->e->f ladder."""
    n = times.size
    u = np.zeros((n, n), dtype=complex)
    for e in range(model.n_e):
        mu2 = np.real(model.mu_ge[e]) * np.real(model.mu_ef[f_idx, e])
        if mu2 == 0.0:
            continue
        u += mu2 * _prop(times, model.e_energies[e], model.gamma_e[e])
    return u


def _oracle_t_amplitude(model, spec, times, wts, h):
    """Two-photon transition amplitudes by 2D quadrature (twin or cw)."""
    a = _pair_amplitude(times, spec, h)  # [k2 later, k1]
    t = np.zeros(model.n_f, dtype=complex)
    for f in range(model.n_f):
        ladder = _chain_e_to_f(model, f, times) * a  # [k2, k1]
        decf = _decay_to_zero(times, model.f_energies[f], model.gamma_f[f])
        t[f] = np.einsum("ab,a,a,b->", ladder, decf, wts, wts)
    return TWO_PI_C_FS**2 * t


def _oracle_fIII_twin(model, spec, times, wts, h):
    t = _oracle_t_amplitude(model, spec, times, wts, h)
    return np.outer(t, np.conj(t))


def _oracle_fIII_stoch(model, spec, times, wts, h):
    n = times.size
    w2p = _two_point_matrix(times, spec)
    mask = _ordered_mask(n).T  # [later, earlier]
    p = []
    for f in range(model.n_f):
        decf = _decay_to_zero(times, model.f_energies[f], model.gamma_f[f])
        # P_f[k1 earlier, k2 later] including both trapezoid weights
        pf = (_chain_e_to_f(model, f, times) * mask * decf[:, None]).T
        p.append(pf * wts[:, None] * wts[None, :])
    rho = np.zeros((model.n_f, model.n_f), dtype=complex)
    for i in range(model.n_f):
        for j in range(model.n_f):
            pj = np.conj(p[j])  # [k3, k4]
            s1 = np.sum((p[i].T @ w2p @ pj) * w2p)
            s2 = np.sum((p[i] @ (w2p @ pj)) * w2p)
            rho[i, j] = s1 + s2
    return TWO_PI_C_FS**4 * spec.amplitude**4 * rho


def _f_prop_masked(model, f_idx, times):
    """prop_f[k3 later, k2] restricted to k2 <= k3 with the half diagonal."""
    n = times.size
    mask = np.tril(np.ones((n, n)), k=-1) + 0.5 * np.eye(n)
    return _prop(times, model.f_energies[f_idx], model.gamma_f[f_idx]) * mask


def _oracle_eII(model, spec, times, wts, h):
    """Sign-stripped diagram-II term: ket absorb/absorb/emit vs bra absorb."""
    ne = model.n_e
    dec_e = np.array(
        [
            _decay_to_zero(times, model.e_energies[e], model.gamma_e[e])
            for e in range(ne)
        ]
    )
    mu_e = np.real(model.mu_ge)
    mu_ef = np.real(model.mu_ef)
    lit = np.zeros((ne, ne), dtype=complex)

    if spec.kind == "twin":
        amp = _pair_amplitude(times, spec, h)  # [k2 later, k1]
        asym_c = np.conj(_sym_pair_amplitude(times, spec, h))  # [k3, k4]
        r = (asym_c * wts[None, :]) @ np.conj(dec_e).T  # [k3, j]
        for f in range(model.n_f):
            u = _chain_e_to_f(model, f, times) * amp  # [k2, k1]
            s = (u * wts[None, :]).sum(axis=1)  # integrate k1
            z = _f_prop_masked(model, f, times) @ (s * wts)  # [k3], k2 <= k3
            core = np.einsum("k,ik,kj->ij", z * wts, dec_e, r)
            lit += mu_ef[f][:, None] * core * mu_e[None, :]
        return TWO_PI_C_FS**4 * lit

    # stochastic light: the two Wick pairings of <E+ E+ E E>
    w2p = _two_point_matrix(times, spec)
    rw = (w2p * wts[None, :]) @ np.conj(dec_e).T  # [k, j], creator at k4
    omask = _ordered_mask(times.size)
    for f in range(model.n_f):
        pf = _f_prop_masked(model, f, times)  # [k3, k2]
        um = _chain_e_to_f(model, f, times) * omask.T * wts[None, :]  # [k2, k1]
        for i in range(ne):
            dexw = dec_e[i] * wts  # decay of e_i from k3, with w3
            # pairing A: <E+(t3)E(t1)><E+(t4)E(t2)>
            rc = (w2p * dexw[None, :]) @ pf  # [k1, k2]
            v = (um * rc.T).sum(axis=1)  # [k2]
            pa = (v * wts) @ rw  # [j]
            # pairing B: <E+(t3)E(t2)><E+(t4)E(t1)>
            y = (w2p * pf.T * dexw[None, :]).sum(axis=1)  # [k2]
            g = um.T @ (y * wts)  # [k1]
            pb = g @ rw  # [j]
            lit[i] += mu_ef[f, i] * mu_e * (pa + pb)
    return TWO_PI_C_FS**4 * spec.amplitude**4 * lit


def _oracle_eI(model, spec, times, wts, h):
    """Sign-stripped diagram-I (Raman) diagonal: absorb/emit/absorb on the
    ket, one absorption on the bra, normally ordered field part only."""
    n = times.size
    ne = model.n_e
    mu2 = np.abs(model.mu_ge) ** 2
    amp31 = _pair_amplitude(times, spec, h)  # [k3 later, k1]
    asym_c = np.conj(_sym_pair_amplitude(times, spec, h))  # [k2, k4]
    u = np.zeros((n, n), dtype=complex)  # [k2, k1]
    for e in range(ne):
        if mu2[e] == 0.0:
            continue
        u += mu2[e] * _prop(times, model.e_energies[e], model.gamma_e[e])
    um = u * _ordered_mask(n).T * wts[None, :] * wts[:, None]  # w1, w2 folded
    diag = np.zeros(ne, dtype=float)
    for i in range(ne):
        dec_i = _decay_to_zero(times, model.e_energies[i], model.gamma_e[i])
        r = (asym_c * wts[None, :]) @ np.conj(dec_i)  # [k2]
        x = amp31 * (dec_i * wts)[:, None]  # [k3, k1]
        d = _rev_cumsum_half(x, axis=0)  # [k2 cut, k1]
        raw = ((um * d) * r[:, None]).sum() * mu2[i]
        diag[i] = 2.0 * np.real(TWO_PI_C_FS**4 * raw)
    return np.diag(diag.astype(complex))


# ---------------------------------------------------------------------------


def _run_once(model, spec, which, cfg, n_steps):
    times, wts, h = _grid(model, spec, cfg, n_steps)
    if which == "e2":
        return _oracle_e2(model, spec, times, wts)
    if which == "fIII":
        if spec.kind == "twin":
            return _oracle_fIII_twin(model, spec, times, wts, h)
        return _oracle_fIII_stoch(model, spec, times, wts, h)
    if which == "eII":
        raw = _oracle_eII(model, spec, times, wts, h)
        return raw + raw.conj().T
    if which == "eI":
        return _oracle_eI(model, spec, times, wts, h)
    raise TwinspecError("unknown oracle target %r" % which)


def time_domain_oracle(model, spec, which, cfg=None):
    """Numerically integrate one diagram family and return its density matrix.

    which: "e2" (leading order), "eI" (Raman), "eII" (two-photon pathway to
    the e manifold), "fIII" (double-exciton matrix).  Runs the quadrature
    at n_steps and 2*n_steps; raises ConvergenceError when the two disagree
    beyond cfg.convergence_tol, otherwise returns the finer result (with a
    Richardson step when cfg.order == "fourth").
    """
    cfg = cfg or OracleConfig()
    if which not in WHICH:
        raise TwinspecError("oracle target must be one of %s" % (WHICH,))
    if spec.kind not in _KIND_OK[which]:
        raise LightKindError(
            "oracle %s supports %s light, got %r" % (which, _KIND_OK[which], spec.kind)
        )
    if which in ("eII", "fIII") and model.n_f == 0:
        raise TwinspecError("diagram %s needs a non-empty f-manifold" % which)

    coarse = _run_once(model, spec, which, cfg, cfg.n_steps)
    if cfg.check_convergence or cfg.order == "fourth":
        fine = _run_once(model, spec, which, cfg, 2 * cfg.n_steps)
        scale = max(np.linalg.norm(fine), 1e-300)
        drift = np.linalg.norm(fine - coarse) / scale
        if cfg.check_convergence and np.linalg.norm(fine) > 0 and drift > cfg.convergence_tol:
            raise ConvergenceError(
                "oracle %s drifted %.2e under grid doubling (tol %.2e)"
                % (which, drift, cfg.convergence_tol),
                coarse=coarse,
                fine=fine,
            )
        result = fine + (fine - coarse) / 3.0 if cfg.order == "fourth" else fine
    else:
        result = coarse
    manifold = "F" if which == "fIII" else "E"
    return DensityMatrix(manifold, result)


def oracle_transition_amplitude(model, spec, cfg=None):
    """T_fg by direct 2D quadrature, matching the closed-form convention.

    The cw result is flipped in sign: the closed form writes the cw
    intermediate factor as the pure Lorentzian 1/(w - w_eg + i gamma_e),
    which is minus the T -> infinity limit of the windowed integral.  The
    global sign is unobservable (every output involves T T*).
    """
    cfg = cfg or OracleConfig()
    if spec.kind not in ("twin", "cw_pair"):
        raise LightKindError("transition amplitude needs twin or cw_pair light")
    times, wts, h = _grid(model, spec, cfg, cfg.n_steps)
    t = _oracle_t_amplitude(model, spec, times, wts, h)
    if spec.kind == "cw_pair":
        t = -t
    return TransitionAmplitudes(t)
