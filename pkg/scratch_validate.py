# dev scratch: validate kernels and closed forms against brute force
import numpy as np
from numpy.polynomial.legendre import leggauss

from twinspec.kernels import tri_overlap, rect_strip, triangle_double
from twinspec.model import ExcitonModel
from twinspec.light import LightSpec
from twinspec import response as R
from twinspec import oracle as O

rng = np.random.default_rng(7)


def gl(f, a, b, n=240):
    x, w = leggauss(n)
    x = 0.5 * (b - a) * x + 0.5 * (b + a)
    return 0.5 * (b - a) * np.sum(w * f(x))


def check(name, got, ref, tol):
    err = abs(got - ref) / max(abs(ref), 1e-300)
    print(f"{name:28s} got={got:.10e} ref={ref:.10e} rel={err:.2e} {'OK' if err < tol else 'FAIL'}")
    return err < tol


def checkmat(name, got, ref, tol):
    scale = max(np.linalg.norm(ref), 1e-300)
    err = np.linalg.norm(got - ref) / scale
    print(f"{name:28s} |ref|={scale:.4e} rel={err:.3e} {'OK' if err < tol else 'FAIL'}")
    return err < tol


print("== kernel quadrature checks ==")
theta = 0.006
for trial in range(3):
    al = rng.uniform(-2000, 2000) + 1j * rng.uniform(50, 400)
    be = rng.uniform(-2000, 2000) - 1j * rng.uniform(50, 400)

    # J: int_0^inf du dv e^{i al u - i be v} tri((u-v)/theta)
    def j_at(uu, window):
        def f(v):
            win = np.where(np.abs(uu - v) < theta, window(np.abs(uu - v)), 0.0)
            return np.exp(1j * al * uu - 1j * be * v) * win
        return gl(f, max(0.0, uu - theta), uu + theta)

    hi = 12 / abs(al.imag)
    xs, ws = leggauss(400)
    xs = 0.5 * hi * (xs + 1)
    tri_w = lambda d: 1 - d / theta
    rect_w = lambda d: np.ones_like(d)
    jref = 0.5 * hi * np.sum(ws * np.array([j_at(uu, tri_w) for uu in xs]))
    check("tri_overlap", complex(tri_overlap(al, be, theta)), jref, 2e-4)
    gref = 0.5 * hi * np.sum(ws * np.array([j_at(uu, rect_w) for uu in xs]))
    check("rect_strip", complex(rect_strip(al, be, theta)), gref, 2e-4)

    # R: triangle double
    p = rng.uniform(-3000, 3000) + 1j * rng.uniform(0, 300)
    z = rng.uniform(-3000, 3000) - 1j * rng.uniform(0, 300)
    def r_at(uu):
        return gl(lambda u2: np.exp(1j * p * uu + 1j * z * u2), 0.0, theta - uu)

    xs2, ws2 = leggauss(200)
    xs2 = 0.5 * theta * (xs2 + 1)
    rref = 0.5 * theta * np.sum(ws2 * np.array([r_at(uu) for uu in xs2]))
    check("triangle_double", complex(triangle_double(p, z, theta)), rref, 1e-8)

print()
print("== closed form vs oracle (random dimer) ==")
for trial in range(3):
    we = np.sort(rng.uniform(11000, 13500, 2))
    model = ExcitonModel(
        e_energies=we,
        f_energies=[we.sum() + rng.uniform(-300, 300)],
        mu_ge=rng.uniform(0.5, 2.0, 2),
        mu_ef=rng.uniform(0.5, 2.0, (1, 2)),
        gamma_e=rng.uniform(150, 300),
        gamma_f=rng.uniform(150, 300),
    )
    T = rng.uniform(10, 40)
    w2 = rng.uniform(10500, 11500)
    wp = model.f_energies[0] + rng.uniform(-400, 400)
    twin = LightSpec("twin", wp - w2, w2, T, amplitude=rng.uniform(0.5, 2))
    stoch = LightSpec("stochastic", twin.omega1_cm1, w2, T, amplitude=twin.amplitude)
    cw = LightSpec("cw_pair", twin.omega1_cm1, w2, None, amplitude=twin.amplitude)
    cfg = O.OracleConfig(n_steps=256, check_convergence=False)

    print(f"-- trial {trial}: T={T:.1f} fs, wp={wp:.0f}, w2={w2:.0f}")
    got = R.rho_e_second_order(model, twin)
    ref = O.time_domain_oracle(model, twin, "e2", cfg)
    checkmat("e2 twin", got.data, ref.data, 2e-3)

    got_t = R.transition_amplitude_fg(model, twin).t_fg
    ref_t = O.oracle_transition_amplitude(model, twin, cfg).t_fg
    checkmat("T_fg twin", got_t, ref_t, 2e-3)

    got_t = R.transition_amplitude_fg(model, cw).t_fg
    ref_t = O.oracle_transition_amplitude(model, cw, cfg).t_fg
    checkmat("T_fg cw", got_t, ref_t, 2e-3)

    got = R.rho_f_entangled(model, twin)
    ref = O.time_domain_oracle(model, twin, "fIII", cfg)
    checkmat("fIII twin", got.data, ref.data, 5e-3)

    got = R.rho_f_stochastic(model, stoch)
    ref = O.time_domain_oracle(model, stoch, "fIII", cfg)
    checkmat("fIII stoch", got.data, ref.data, 1e-2)

    got = R.rho_e_fourth_entangled(model, twin)
    ref = O.time_domain_oracle(model, twin, "eII", cfg)
    checkmat("eII twin", got.data, ref.data, 1e-2)

    got = R.rho_e_fourth_stochastic(model, stoch)
    ref = O.time_domain_oracle(model, stoch, "eII", cfg)
    checkmat("eII stoch", got.data, ref.data, 1e-2)

    got = R.rho_e_raman_entangled(model, twin)
    ref = O.time_domain_oracle(model, twin, "eI", cfg)
    checkmat("eI twin", got.data, ref.data, 1e-2)
