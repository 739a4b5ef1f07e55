"""One-electron radial wavefunctions for quantum-defect states.

Numerov integration of the radial equation on the square-root mesh
x = sqrt(r) (u(r) = v(x) * x^(1/2)), which puts roughly constant points per
oscillation across the whole orbit.  With the reduced-mass factor mu the
transformed equation is

    v''(x) = -kfun(x) v(x),
    kfun(x) = -3/(4 x^2) + 8 mu + 8 mu E x^2 - 4 l(l+1)/x^2,

integrated inward from the outer classical region on a *global aligned*
grid x_j = j*h, so any two states share mesh nodes and matrix elements are
plain overlap sums:  integral u_a u_b r^p dr = 2h * trapz(v_a v_b x^(2p+2)).
The trapezoid rule is spectrally accurate here because the integrand's
derivatives vanish at both ends of the domain.

Conventions:
* energies E = -mu/(2 n*^2) hartree from the species quantum defects;
* quantum-defect series are cut at r_min = 0.05 l(l+1) + 1 bohr (the core
  region carries no meaning in a one-channel Coulomb approximation);
  zero-defect (hydrogenic) series integrate to r_min = 0.001 (l+1)^2 bohr
  so the regular solution is captured to oracle accuracy;
* r_max = 2 n*(n* + 15);
* states with n* <= l + 0.15 have no usable Coulomb-approximation solution
  (energy at/below the centrifugal barrier minimum) and raise
  RadialUnsolvableError; perturbed series bottoms (e.g. Sr 4d) are treated
  by callers via sum-rule completion instead.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass

import numpy as np
from scipy import special

from .species import RydbergState
from .wigner import legendre_moment, line_strength_factor

DEFAULT_MESH_STEP = 0.01

_trapz = getattr(np, "trapezoid", None) or np.trapz


class RadialUnsolvableError(ValueError):
    """State has no usable Coulomb-approximation radial solution."""


class MeshOverflowError(RadialUnsolvableError):
    """State's principal quantum number exceeds the species mesh budget."""


@dataclass(frozen=True)
class RadialSolution:
    """Normalized v(x) on the aligned mesh x_j = j*h, j_in <= j <= j_out."""

    j_in: int
    j_out: int
    h: float
    v: np.ndarray  # length j_out - j_in + 1
    l: int
    n_eff: float

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(self.j_in, self.j_out + 1)

    @property
    def r(self) -> np.ndarray:
        return self.x**2

    def u(self) -> np.ndarray:
        """u(r) = v(x) sqrt(x) on the same nodes."""
        return self.v * np.sqrt(self.x)

    def norm_residual(self) -> float:
        """|integral u^2 dr - 1| recomputed with a different integrator.

        Trapezoid on the non-uniform r grid of u^2, independent of the
        x-grid trapezoid used for normalization.
        """
        u = self.u()
        return abs(float(_trapz(u * u, self.r)) - 1.0)

    def node_count(self) -> int:
        v = self.v
        interior = v[(np.abs(v) > 1e-9 * np.max(np.abs(v)))]
        return int(np.sum(np.sign(interior[1:]) != np.sign(interior[:-1])))

    @property
    def outer_turning_point_r(self) -> float:
        """Outer root of E = -1/r + l(l+1)/(2 r^2), bohr."""
        nst, ll = self.n_eff, self.l * (self.l + 1)
        return nst * nst + nst * math.sqrt(max(nst * nst - ll, 0.0))


def _numerov_inward(kf: np.ndarray, h: float) -> np.ndarray:
    """Integrate v'' = -kf v inward; seed with a tiny value at the outer end."""
    n = kf.shape[0]
    c = (1.0 + (h * h / 12.0) * kf).tolist()
    v = [0.0] * n
    v[n - 1] = 0.0
    v[n - 2] = 1e-12
    for j in range(n - 2, 0, -1):
        v[j - 1] = ((12.0 - 10.0 * c[j]) * v[j] - c[j + 1] * v[j + 1]) / c[j - 1]
    return np.asarray(v)


class DiskCache:
    """Tiny persistent str -> float cache (versioned text, atomic rewrite)."""

    _HEADER = "rydtherm-cache 1"

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.RLock()
        self._data: dict[str, float] = {}
        self._dirty = 0
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                header = fh.readline().rstrip("\n")
                if header != self._HEADER:
                    # stale or foreign file: start over rather than guess
                    self._data = {}
                else:
                    for line in fh:
                        key, _, hexval = line.rstrip("\n").rpartition("\t")
                        if key:
                            self._data[key] = float.fromhex(hexval)

    def get(self, key: str) -> float | None:
        with self._lock:
            return self._data.get(key)

    def put(self, key: str, value: float) -> None:
        with self._lock:
            self._data[key] = value
            self._dirty += 1
            if self._dirty >= 512:
                self.flush()

    def flush(self) -> None:
        with self._lock:
            if not self._dirty and os.path.exists(self.path):
                return
            tmp = self.path + ".tmp"
            os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(self._HEADER + "\n")
                for key, val in self._data.items():
                    fh.write(f"{key}\t{val.hex()}\n")
            os.replace(tmp, self.path)
            self._dirty = 0


class RadialSolver:
    """Solves and caches radial wavefunctions and their matrix elements."""

    def __init__(
        self,
        h: float = DEFAULT_MESH_STEP,
        disk_cache: DiskCache | None = None,
    ):
        self.h = h
        self.disk = disk_cache
        self._solutions: dict[tuple, RadialSolution] = {}
        self._lock = threading.RLock()
        # scratch space for higher-level engines (channel tables etc.) whose
        # lifetime should track this solver's mesh settings
        self.extra_cache: dict = {}

    # -- wavefunctions -----------------------------------------------------

    def _mesh_tag(self) -> str:
        return f"h={self.h:g}|alg=1"

    def solve(self, state: RydbergState) -> RadialSolution:
        key = (state._key, self.h)
        with self._lock:
            sol = self._solutions.get(key)
        if sol is not None:
            return sol

        sd = state.defect
        l = sd.L
        nst = state.n_eff
        if state.n > state.species.rydberg_n_max:
            raise MeshOverflowError(
                f"{state}: n = {state.n} exceeds the species mesh budget "
                f"(rydberg_n_max = {state.species.rydberg_n_max})"
            )
        if nst <= l + 0.15:
            raise RadialUnsolvableError(
                f"{state}: n_eff = {nst:.3f} too close to/below l = {l}; "
                "no Coulomb-approximation solution"
            )
        mu = state.species.reduced_mass_factor
        energy = -state.binding_au  # hartree, negative

        hydrogenic = sd.mu0 == 0.0 and sd.mu2 == 0.0 and sd.mu4 == 0.0
        if hydrogenic:
            r_min = 0.001 * (l + 1) ** 2
        else:
            r_min = 0.05 * l * (l + 1) + 1.0
        r_max = 2.0 * nst * (nst + 15.0)

        h = self.h
        j_in = max(1, math.ceil(math.sqrt(r_min) / h))
        j_out = math.floor(math.sqrt(r_max) / h)
        x = h * np.arange(j_in, j_out + 1)
        x2 = x * x
        kf = (
            -3.0 / (4.0 * x2)
            + 8.0 * mu
            + 8.0 * mu * energy * x2
            - 4.0 * l * (l + 1) / x2
        )
        v = _numerov_inward(kf, h)
        norm_sq = 2.0 * h * float(_trapz(v * v * x2))
        v = v / math.sqrt(norm_sq)
        sol = RadialSolution(j_in=j_in, j_out=j_out, h=h, v=v, l=l, n_eff=nst)
        with self._lock:
            self._solutions[key] = sol
        return sol

    def clear(self) -> None:
        with self._lock:
            self._solutions.clear()

    # -- matrix elements ---------------------------------------------------

    def _pair_integral(
        self, a: RydbergState, b: RydbergState, weight_tag: str, weight_fn
    ) -> float:
        if self.disk is not None:
            ka, kb = sorted([str(a), str(b)])
            key = (
                f"{a.species.key}|{ka}|{kb}|{weight_tag}|{self._mesh_tag()}"
            )
            hit = self.disk.get(key)
            if hit is not None:
                return hit
        sa, sb = self.solve(a), self.solve(b)
        j0 = max(sa.j_in, sb.j_in)
        j1 = min(sa.j_out, sb.j_out)
        va = sa.v[j0 - sa.j_in : j1 - sa.j_in + 1]
        vb = sb.v[j0 - sb.j_in : j1 - sb.j_in + 1]
        x = self.h * np.arange(j0, j1 + 1)
        val = 2.0 * self.h * float(_trapz(va * vb * weight_fn(x)))
        if self.disk is not None:
            self.disk.put(key, val)
        return val

    def radial_integral(
        self, a: RydbergState, b: RydbergState, power: int = 1
    ) -> float:
        """<a| r^power |b> over the common mesh (u_a u_b r^p dr)."""
        return self._pair_integral(
            a, b, f"r^{power}", lambda x: x ** (2 * power + 2)
        )

    def r2_expectation(self, state: RydbergState) -> float:
        return self.radial_integral(state, state, power=2)

    def j0_average(self, state: RydbergState, q_au: float) -> float:
        """<j0(q r)> over the state's radial density."""
        return self._pair_integral(
            state,
            state,
            f"j0@{q_au:.12e}",
            lambda x: x * x * np.sinc(q_au * x * x / math.pi),
        )

    def bessel_average(
        self, state: RydbergState, order: int, q_au: float
    ) -> float:
        """<j_order(q r)> over the state's radial density."""
        if order == 0:
            return self.j0_average(state, q_au)
        return self._pair_integral(
            state,
            state,
            f"j{order}@{q_au:.12e}",
            lambda x: x * x * special.spherical_jn(order, q_au * x * x),
        )

    def sin2_average(
        self, state: RydbergState, k_au: float, m_l: int | None = 0
    ) -> float:
        """<sin^2(k x_e)> of the electron about the core at a field node.

        The lattice axis is the quantization axis.  For ``m_l = None`` (or
        any s state) the density is treated as isotropic and the average is
        exactly (1 - <j0(2 k r)>)/2.  For an integer ``m_l`` the |Y_lm|^2
        anisotropy is kept: <cos 2kz> expands over even-order spherical
        Bessel moments weighted by the density's Legendre moments.
        """
        l = state.L
        if m_l is None or l == 0:
            return 0.5 * (1.0 - self.j0_average(state, 2.0 * k_au))
        cos_avg = 0.0
        for order in range(0, 2 * l + 1, 2):
            pl = legendre_moment(l, m_l, order)
            if pl == 0.0:
                continue
            sign = -1.0 if (order // 2) % 2 else 1.0
            cos_avg += (
                sign
                * (2 * order + 1)
                * pl
                * self.bessel_average(state, order, 2.0 * k_au)
            )
        return 0.5 * (1.0 - cos_avg)


# ---------------------------------------------------------------------------
# module-level entry points (shared default solver)

_DEFAULT_SOLVER: RadialSolver | None = None
_DEFAULT_LOCK = threading.Lock()


def default_solver() -> RadialSolver:
    """Process-wide shared solver (in-memory caches only)."""
    global _DEFAULT_SOLVER
    with _DEFAULT_LOCK:
        if _DEFAULT_SOLVER is None:
            _DEFAULT_SOLVER = RadialSolver()
        return _DEFAULT_SOLVER


def solve_radial(
    state: RydbergState, solver: RadialSolver | None = None
) -> RadialSolution:
    """Normalized radial solution of a quantum-defect state."""
    return (solver or default_solver()).solve(state)


def dipole_matrix_element(
    a: RydbergState, b: RydbergState, solver: RadialSolver | None = None
) -> float:
    """Reduced dipole matrix element magnitude sqrt(S_ab), atomic units.

    S_ab is the line strength: the series-pair angular factor times the
    squared radial integral <a| r |b>.  Symmetric in (a, b).
    """
    if abs(a.L - b.L) != 1:
        raise ValueError(
            f"dipole-forbidden pair {a} <-> {b}: |delta L| = {abs(a.L - b.L)}"
        )
    ang = line_strength_factor(a.L, a.J, a.S, b.L, b.J)
    radial = (solver or default_solver()).radial_integral(a, b, power=1)
    return math.sqrt(ang) * abs(radial)


def sin2_matrix_element(
    state: RydbergState,
    k_au: float,
    m_l: int | None = 0,
    solver: RadialSolver | None = None,
) -> float:
    """<sin^2(k x_e)> for a lattice of wavenumber k (atomic units), in [0, 1].

    ``m_l`` selects the orbital alignment relative to the lattice axis;
    the default 0 matches the published position-independent lattice term
    for nd Rydberg states, ``None`` averages over orientations.
    """
    if k_au < 0:
        raise ValueError(f"wavenumber must be >= 0, got {k_au}")
    if k_au == 0.0:
        return 0.0
    return (solver or default_solver()).sin2_average(state, k_au, m_l)
