"""Single- and double-exciton manifolds of a chromophore aggregate.

A site-level description (positions, Q_y transition dipole vectors, site
energies) is turned into exciton eigenstates: the one-exciton Hamiltonian
carries the site energies on the diagonal and point-dipole couplings off
the diagonal; the two-exciton space is the hard-core pair basis |ij>, i<j,
with energies E_i + E_j and couplings inherited from shared-site one-exciton
couplings.  No double site occupancy, no exciton-exciton binding shift.

Transition dipoles are contracted against a single fixed field polarization
vector at build time, so downstream response expressions see scalar dipole
matrix elements.

Units: energies/couplings cm^-1, positions Angstrom, dipoles Debye.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, ModelError
from .units import DIPOLE_COUPLING_CM1

DEFAULT_GAMMA_E_CM1 = 200.0


@dataclass(frozen=True)
class SiteSpec:
    """One chromophore: position (A), dipole vector (Debye), energy (cm^-1)."""

    position: np.ndarray
    dipole: np.ndarray
    site_energy: float
    is_dark: bool = False

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        object.__setattr__(self, "dipole", np.asarray(self.dipole, dtype=float))
        if self.position.shape != (3,) or self.dipole.shape != (3,):
            raise ModelError("site position and dipole must be 3-vectors")
        if self.site_energy <= 0:
            raise ModelError("site_energy must be positive (cm^-1)")
        if self.is_dark and np.linalg.norm(self.dipole) > 0:
            raise ModelError("dark site must carry a zero dipole")


@dataclass(frozen=True)
class FromSites:
    """Build manifolds from sites; couplings from the dipole approximation
    unless overridden for specific pairs."""

    sites: tuple
    coupling_overrides: dict = field(default_factory=dict)
    gamma_e: object = DEFAULT_GAMMA_E_CM1
    gamma_f: object = None
    polarization: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        pol = self.polarization if self.polarization is not None else [1.0, 0.0, 0.0]
        object.__setattr__(self, "polarization", np.asarray(pol, dtype=float))


@dataclass(frozen=True)
class Explicit:
    """Externally supplied manifold Hamiltonians (cm^-1, dense, Hermitian).

    pair_map assigns each two-exciton basis vector to a site pair so that
    e->f transition dipoles can be constructed.
    """

    h_e: np.ndarray
    h_f: np.ndarray
    site_dipoles: np.ndarray
    pair_map: tuple
    gamma_e: object = DEFAULT_GAMMA_E_CM1
    gamma_f: object = None
    polarization: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "h_e", np.asarray(self.h_e, dtype=float))
        object.__setattr__(self, "h_f", np.asarray(self.h_f, dtype=float))
        object.__setattr__(
            self, "site_dipoles", np.asarray(self.site_dipoles, dtype=float)
        )
        object.__setattr__(self, "pair_map", tuple(tuple(p) for p in self.pair_map))
        pol = self.polarization if self.polarization is not None else [1.0, 0.0, 0.0]
        object.__setattr__(self, "polarization", np.asarray(pol, dtype=float))


@dataclass(frozen=True)
class ExcitonModel:
    """Diagonalised aggregate: energies, widths and scalar transition dipoles.

    mu_ge[e] connects the ground state to e-state e; mu_ef[f, e] connects
    e-state e to f-state f.  Both are polarization-contracted scalars.
    """

    e_energies: np.ndarray
    f_energies: np.ndarray
    mu_ge: np.ndarray
    mu_ef: np.ndarray
    gamma_e: np.ndarray
    gamma_f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e_energies", np.asarray(self.e_energies, float))
        object.__setattr__(self, "f_energies", np.asarray(self.f_energies, float))
        object.__setattr__(self, "mu_ge", np.asarray(self.mu_ge, complex))
        object.__setattr__(self, "mu_ef", np.asarray(self.mu_ef, complex))
        ne, nf = self.e_energies.size, self.f_energies.size
        ge = np.asarray(self.gamma_e, float)
        gf = np.asarray(self.gamma_f, float)
        object.__setattr__(self, "gamma_e", np.full(ne, ge) if ge.ndim == 0 else ge)
        object.__setattr__(self, "gamma_f", np.full(nf, gf) if gf.ndim == 0 else gf)
        if np.any(self.e_energies <= 0) or np.any(self.f_energies <= 0):
            raise ModelError("all manifold energies must be positive")
        if nf and ne and np.any(self.f_energies <= self.e_energies.min()):
            raise ModelError("f energies must exceed the smallest e energy")
        if self.mu_ge.shape != (ne,):
            raise ModelError("mu_ge must have one entry per e state")
        if self.mu_ef.shape != (nf, ne):
            raise ModelError("mu_ef must be (n_f, n_e)")
        if self.gamma_e.shape != (ne,) or np.any(self.gamma_e <= 0):
            raise ModelError("gamma_e must be positive, one per e state")
        if self.gamma_f.shape != (nf,) or (nf and np.any(self.gamma_f <= 0)):
            raise ModelError("gamma_f must be positive, one per f state")

    @property
    def n_e(self):
        return self.e_energies.size

    @property
    def n_f(self):
        return self.f_energies.size


def dipole_coupling(site_i, site_j):
    """Point-dipole (Forster) coupling between two sites, cm^-1.

    J = kappa * |d_i||d_j| / R^3 with the orientation factor
    kappa = di.dj - 3 (di.R)(dj.R) on unit vectors.
    """
    r = site_j.position - site_i.position
    dist = np.linalg.norm(r)
    if dist <= 0.1:
        raise GeometryError(
            "sites closer than 0.1 A (R = %.4f A); dipole approximation invalid" % dist
        )
    ni = np.linalg.norm(site_i.dipole)
    nj = np.linalg.norm(site_j.dipole)
    if ni == 0.0 or nj == 0.0:
        return 0.0
    di = site_i.dipole / ni
    dj = site_j.dipole / nj
    rhat = r / dist
    kappa = di @ dj - 3.0 * (di @ rhat) * (dj @ rhat)
    return DIPOLE_COUPLING_CM1 * kappa * ni * nj / dist**3


def _as_state_array(value, n, default, what):
    if value is None:
        value = default
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise ModelError("%s must be scalar or length %d" % (what, n))
    return arr


def _sorted_eig(h):
    """Eigen-decomposition with deterministic ordering and phase fixing.

    Eigenvalues ascend; each eigenvector is scaled so its largest-magnitude
    component is real positive.  Dipole-based tie-breaking for degenerate
    eigenvalues happens in the caller where dipoles are known.
    """
    if not np.allclose(h, h.T.conj(), rtol=0, atol=1e-9 * max(1.0, np.abs(h).max())):
        raise ModelError("Hamiltonian is not Hermitian")
    vals, vecs = np.linalg.eigh(h)
    for k in range(vals.size):
        idx = np.argmax(np.abs(vecs[:, k]))
        lead = vecs[idx, k]
        if lead != 0:
            vecs[:, k] = vecs[:, k] * (np.abs(lead) / lead)
    return vals, vecs


def _degenerate_tiebreak(vals, vecs, strengths):
    """Reorder degenerate blocks by descending |mu_ge|, then by index."""
    order = np.arange(vals.size)
    k = 0
    while k < vals.size:
        j = k
        while j + 1 < vals.size and abs(vals[j + 1] - vals[k]) <= 1e-9 * max(
            1.0, abs(vals[k])
        ):
            j += 1
        if j > k:
            block = order[k : j + 1]
            sub = sorted(block, key=lambda s: (-strengths[s], s))
            order[k : j + 1] = sub
        k = j + 1
    return vals[order], vecs[:, order]


def site_pairs(n):
    """Unordered site pairs (i < j) indexing the two-exciton basis."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def coupling_matrix(sites, overrides=None):
    """One-exciton couplings: dipole approximation plus explicit overrides."""
    n = len(sites)
    j = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            j[a, b] = j[b, a] = dipole_coupling(sites[a], sites[b])
    for key, value in (overrides or {}).items():
        a, b = key
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise ModelError("coupling override (%s, %s) out of range" % (a, b))
        j[a, b] = j[b, a] = float(value)
    return j


def build_manifolds(source):
    """Diagonalise the one- and two-exciton Hamiltonians into an ExcitonModel."""
    if isinstance(source, FromSites):
        return _build_from_sites(source)
    if isinstance(source, Explicit):
        return _build_explicit(source)
    raise ModelError("unknown manifold source %r" % type(source).__name__)


def _build_from_sites(src):
    sites = src.sites
    n = len(sites)
    if n == 0:
        raise ModelError("need at least one site")
    pol = src.polarization / np.linalg.norm(src.polarization)
    mu_site = np.array([s.dipole @ pol for s in sites])
    energies = np.array([s.site_energy for s in sites])

    j = coupling_matrix(sites, src.coupling_overrides)
    h_e = np.diag(energies) + j

    pairs = site_pairs(n)
    nf = len(pairs)
    h_f = np.zeros((nf, nf))
    for p, (a, b) in enumerate(pairs):
        h_f[p, p] = energies[a] + energies[b]
        for q, (c, d) in enumerate(pairs):
            if q <= p:
                continue
            # pairs sharing exactly one site couple through the odd one out
            shared = set((a, b)) & set((c, d))
            if len(shared) == 1:
                (x,) = set((a, b)) - shared
                (y,) = set((c, d)) - shared
                h_f[p, q] = h_f[q, p] = j[x, y]
    return _assemble(h_e, h_f, mu_site, pairs, src.gamma_e, src.gamma_f)


def _build_explicit(src):
    h_e = src.h_e
    h_f = src.h_f
    if h_e.ndim != 2 or h_e.shape[0] != h_e.shape[1]:
        raise ModelError("explicit e-Hamiltonian must be square")
    n = h_e.shape[0]
    if h_f.size and (h_f.ndim != 2 or h_f.shape[0] != h_f.shape[1]):
        raise ModelError("explicit f-Hamiltonian must be square")
    nf = h_f.shape[0] if h_f.size else 0
    if len(src.pair_map) != nf:
        raise ModelError("pair_map must assign a site pair to each f basis vector")
    dip = src.site_dipoles
    if dip.ndim != 2 or dip.shape != (n, 3):
        raise ModelError("site_dipoles must be (n_sites, 3)")
    pol = src.polarization / np.linalg.norm(src.polarization)
    mu_site = dip @ pol
    pairs = [tuple(p) for p in src.pair_map]
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise ModelError("pair_map entry (%s, %s) out of range" % (a, b))
    return _assemble(h_e, h_f if nf else np.zeros((0, 0)), mu_site, pairs,
                     src.gamma_e, src.gamma_f)


def _assemble(h_e, h_f, mu_site, pairs, gamma_e, gamma_f):
    e_vals, e_vecs = _sorted_eig(h_e)
    mu_ge = e_vecs.T.conj() @ mu_site
    e_vals, e_vecs = _degenerate_tiebreak(e_vals, e_vecs, np.abs(e_vecs.T.conj() @ mu_site))
    mu_ge = e_vecs.T.conj() @ mu_site

    nf = h_f.shape[0]
    if nf:
        f_vals, f_vecs = _sorted_eig(h_f)
        # mu_ef[f, e] = sum_pairs <f|ij> (c_{e,i} mu_j + c_{e,j} mu_i)
        pair_amp = np.zeros((nf, e_vals.size), dtype=complex)
        for p, (a, b) in enumerate(pairs):
            pair_amp[p, :] = e_vecs[a, :] * mu_site[b] + e_vecs[b, :] * mu_site[a]
        mu_ef = f_vecs.T.conj() @ pair_amp
        f_strength = np.abs(mu_ge.conj() @ mu_ef.T)
        f_vals, f_vecs = _degenerate_tiebreak(f_vals, f_vecs, f_strength)
        mu_ef = f_vecs.T.conj() @ pair_amp
    else:
        f_vals = np.zeros(0)
        mu_ef = np.zeros((0, e_vals.size), dtype=complex)

    ge = _as_state_array(gamma_e, e_vals.size, DEFAULT_GAMMA_E_CM1, "gamma_e")
    gf_default = ge.mean() if e_vals.size else DEFAULT_GAMMA_E_CM1
    gf = _as_state_array(gamma_f, nf, gf_default, "gamma_f")
    return ExcitonModel(
        e_energies=e_vals,
        f_energies=f_vals,
        mu_ge=mu_ge.astype(complex),
        mu_ef=mu_ef,
        gamma_e=ge,
        gamma_f=gf,
    )


def absorption_spectrum(model, grid_cm1):
    """Lorentzian absorption A(w) = sum_e |mu_ge|^2 gamma_e / ((w-w_eg)^2 + gamma_e^2)."""
    grid = np.asarray(grid_cm1, dtype=float)
    if grid.size == 0:
        raise ModelError("frequency grid must not be empty")
    detun = grid[:, None] - model.e_energies[None, :]
    weight = np.abs(model.mu_ge) ** 2 * model.gamma_e
    values = (weight[None, :] / (detun**2 + model.gamma_e[None, :] ** 2)).sum(axis=1)
    return values
