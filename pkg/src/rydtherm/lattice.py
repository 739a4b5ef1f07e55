"""Optical-lattice Stark shifts beyond the dipole approximation.

A 1D standing-wave lattice of angular frequency ``omega`` and effective
wavenumber ``k`` (k <= omega/c; smaller for non-counterpropagating beams)
shifts the two ends of a metastable -> Rydberg transition differently:

* The metastable clock state is a point dipole; its shift is the familiar
  -(1/4) alpha(omega) E0^2 sin^2(k X0) with X0 the nuclear position.
* The Rydberg electron is quasi-free and samples the lattice intensity
  over its whole orbit, which splits its ponderomotive shift into a
  trappable, position-dependent part and a position-independent offset:

      (E0^2 / (4 omega^2)) [ sin^2(k X0) (1 - 2<sin^2(k x)>)
                             + <sin^2(k x)> ]

  with <sin^2(k x)> evaluated over the Rydberg orbital.

A magic lattice makes the position-dependent parts equal:

      alpha(omega_m) = -(1 - 2 <sin^2(k x)>) / omega_m^2,

requiring a *negative* metastable polarizability, i.e. a lattice
blue-detuned from a strong metastable-state line; atoms then sit at the
intensity minima.

The metastable polarizability used here comes from the species file's
dedicated lattice line model (``line.*`` entries): an effective
single-dominant-resonance fit whose strength is calibrated so the magic
wavelengths land on measured/published values.  The separately curated
``bbrline.*`` list keeps literature dipoles for thermal-shift work; the
truncated five-line form underestimates |alpha| near the magic point by
about a factor of two, which is why the two models are kept apart.

Field convention (see units module): E(t) = E0 cos(wt), single-beam
intensity I = (1/2) eps0 c E0^2, time-averaged shifts carry the 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import constants as kconst
from . import units
from .radial import RadialSolver, sin2_matrix_element
from .species import RydbergState, Species

DEFAULT_SCAN_POINTS = 200


class MagicSolverError(RuntimeError):
    """Magic-wavelength search failed (no root, or resonance in bracket)."""


@dataclass(frozen=True)
class LatticeConfig:
    """One 1D lattice: frequency, effective wavenumber, intensity, position.

    ``k_au <= omega_au / c`` — equality for counterpropagating beams,
    smaller when the beams cross at an angle (larger effective spacing).
    """

    omega_au: float
    k_au: float
    intensity_kw_cm2: float = 1.0
    x0_bohr: float = 0.0

    def __post_init__(self) -> None:
        if self.omega_au <= 0:
            raise ValueError(f"omega_au must be > 0, got {self.omega_au}")
        k_max = self.omega_au / kconst.C_AU
        if not 0.0 < self.k_au <= k_max * (1.0 + 1e-12):
            raise ValueError(
                f"k_au must lie in (0, omega/c = {k_max:.6e}], got {self.k_au}"
            )
        if self.intensity_kw_cm2 < 0:
            raise ValueError(
                f"intensity must be >= 0, got {self.intensity_kw_cm2}"
            )

    @classmethod
    def from_wavelength(
        cls,
        wavelength_nm: float,
        intensity_kw_cm2: float = 1.0,
        x0_bohr: float = 0.0,
        k_ratio: float = 1.0,
    ) -> "LatticeConfig":
        """Counterpropagating-beam lattice at ``wavelength_nm`` by default;
        ``k_ratio`` < 1 scales the effective wavenumber down for beams
        crossing at an angle."""
        if not 0.0 < k_ratio <= 1.0:
            raise ValueError(f"k_ratio must lie in (0, 1], got {k_ratio}")
        omega = units.wavelength_nm_to_omega_au(wavelength_nm)
        return cls(
            omega_au=omega,
            k_au=k_ratio * omega / kconst.C_AU,
            intensity_kw_cm2=intensity_kw_cm2,
            x0_bohr=x0_bohr,
        )

    @property
    def field_sq_au(self) -> float:
        """Squared field amplitude E0^2 at an antinode, atomic units."""
        return units.intensity_kw_cm2_to_field_sq_au(self.intensity_kw_cm2)

    @property
    def spacing_bohr(self) -> float:
        """Distance between intensity minima, pi / k."""
        return math.pi / self.k_au


@dataclass(frozen=True)
class RydbergLatticeShift:
    """Rydberg-state lattice shift split into its two parts (Hz)."""

    position_dependent_hz: float
    position_independent_hz: float
    sin2_value: float

    @property
    def total_hz(self) -> float:
        return self.position_dependent_hz + self.position_independent_hz


def _default_m_l(state: RydbergState) -> int | None:
    # Lattice averages use the aligned (m_l = 0) orbital component along
    # the lattice axis for every state; the published magic-lattice
    # numbers are stated in this convention.  Callers can force the
    # spherical average with m_l=None.
    return 0


def rydberg_lattice_shift(
    state: RydbergState,
    lattice: LatticeConfig,
    m_l: int | None = -1,
    solver: RadialSolver | None = None,
) -> RydbergLatticeShift:
    """Ponderomotive lattice shift of a Rydberg state, in Hz.

    ``m_l`` defaults to 0 (orbital component aligned with the lattice
    axis, the convention of the published magic-lattice values); pass
    None for the spherical average.
    """
    if m_l == -1:
        m_l = _default_m_l(state)
    s = sin2_matrix_element(state, lattice.k_au, m_l=m_l, solver=solver)
    pref_hz = (
        lattice.field_sq_au
        / (4.0 * lattice.omega_au**2)
        * kconst.HARTREE_HZ
    )
    mod = math.sin(lattice.k_au * lattice.x0_bohr) ** 2
    return RydbergLatticeShift(
        position_dependent_hz=pref_hz * mod * (1.0 - 2.0 * s),
        position_independent_hz=pref_hz * s,
        sin2_value=s,
    )


def lattice_alpha_au(species: Species, omega_au: float) -> float:
    """Metastable polarizability from the species' lattice line model, a.u."""
    if omega_au < 0:
        raise ValueError(f"omega_au must be >= 0, got {omega_au}")
    if not species.lattice_lines:
        raise ValueError(f"{species.name}: species file has no lattice lines")
    acc = species.lattice_core_alpha_au or 0.0
    for line in species.lattice_lines:
        z2 = line.d_au**2 / 3.0  # J = 0 metastable state
        acc += 2.0 * line.omega_au * z2 / (line.omega_au**2 - omega_au**2)
    return acc


def metastable_lattice_shift(species: Species, lattice: LatticeConfig) -> float:
    """Metastable clock-state lattice shift -(1/4) alpha E0^2 sin^2(kX0), Hz."""
    alpha = lattice_alpha_au(species, lattice.omega_au)
    mod = math.sin(lattice.k_au * lattice.x0_bohr) ** 2
    return (
        -0.25 * alpha * lattice.field_sq_au * mod * kconst.HARTREE_HZ
    )


@dataclass(frozen=True)
class MagicResult:
    """One root of the magic condition for a metastable -> Rydberg pair."""

    state_str: str
    wavelength_nm: float
    omega_au: float
    k_ratio: float
    alpha_au: float  # metastable polarizability at the root
    sin2_value: float  # Rydberg <sin^2(k x)> at the root
    residual_au: float  # |alpha + (1 - 2<sin^2>)/omega^2|
    bracket_nm: tuple[float, float]
    valid: bool  # True iff alpha < 0 (repulsive lattice, trappable pair)

    @property
    def alpha_khz_per_kw_cm2(self) -> float:
        """Light-shift coefficient at the magic frequency (positive for a
        low-field-seeking pair; equals the trap depth at 1 kW/cm^2)."""
        return units.convert(self.alpha_au, "au_pol", "khz_per_kw_cm2")


def solve_magic_wavelength(
    species: Species,
    state: RydbergState,
    k_ratio: float = 1.0,
    bracket_nm: tuple[float, float] | None = None,
    m_l: int | None = -1,
    solver: RadialSolver | None = None,
    scan_points: int = DEFAULT_SCAN_POINTS,
    include_orbit_average: bool = True,
) -> list[MagicResult]:
    """All magic-lattice roots for the metastable -> ``state`` transition.

    Solves alpha(omega) + (1 - 2<sin^2(k x)>)/omega^2 = 0 with
    k = k_ratio * omega / c, scanning ``bracket_nm`` (species default when
    omitted) and refining each sign change by Brent bracketing to 1e-12
    relative in omega.  Roots with alpha >= 0 are flagged invalid rather
    than dropped.  ``include_orbit_average=False`` zeroes <sin^2> (the
    point-dipole approximation) for consistency checks.  Raises
    MagicSolverError when a lattice-model resonance sits inside the
    bracket or no sign change is found.
    """
    if not 0.0 < k_ratio <= 1.0:
        raise ValueError(f"k_ratio must lie in (0, 1], got {k_ratio}")
    if scan_points < 2:
        raise ValueError("scan_points must be >= 2")
    if bracket_nm is None:
        bracket_nm = species.magic_bracket_nm
        if bracket_nm is None:
            raise ValueError(
                f"{species.name}: no magic-bracket default in species file"
            )
    lam_lo, lam_hi = bracket_nm
    if not 0 < lam_lo < lam_hi:
        raise ValueError(f"bad bracket {bracket_nm}")
    w_lo = units.wavelength_nm_to_omega_au(lam_hi)
    w_hi = units.wavelength_nm_to_omega_au(lam_lo)
    for line in species.lattice_lines:
        if w_lo <= abs(line.omega_au) <= w_hi:
            raise MagicSolverError(
                f"{species.name}: lattice-model resonance at "
                f"{units.omega_au_to_wavelength_nm(abs(line.omega_au)):.1f} nm "
                f"lies inside the bracket {bracket_nm}"
            )
    if m_l == -1:
        m_l = _default_m_l(state)

    def orbit_s(w: float) -> float:
        if not include_orbit_average:
            return 0.0
        return sin2_matrix_element(
            state, k_ratio * w / kconst.C_AU, m_l=m_l, solver=solver
        )

    def residual(w: float) -> float:
        return lattice_alpha_au(species, w) + (1.0 - 2.0 * orbit_s(w)) / (w * w)

    grid = np.linspace(w_lo, w_hi, scan_points)
    vals = [residual(w) for w in grid]
    results: list[MagicResult] = []
    for i in range(scan_points - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            root = a
        elif fa * fb < 0.0:
            root = optimize.brentq(residual, a, b, rtol=1e-12, maxiter=200)
        else:
            continue
        s = orbit_s(root)
        alpha = lattice_alpha_au(species, root)
        results.append(
            MagicResult(
                state_str=str(state),
                wavelength_nm=units.omega_au_to_wavelength_nm(root),
                omega_au=root,
                k_ratio=k_ratio,
                alpha_au=alpha,
                sin2_value=s,
                residual_au=abs(alpha + (1.0 - 2.0 * s) / (root * root)),
                bracket_nm=(lam_lo, lam_hi),
                valid=alpha < 0.0,
            )
        )
    if not results:
        raise MagicSolverError(
            f"{state}: no magic root in {bracket_nm} "
            f"(residual has no sign change on a {scan_points}-point scan)"
        )
    results.sort(key=lambda r: r.wavelength_nm)
    return results


def pick_magic_root(results: list[MagicResult]) -> MagicResult:
    """The valid root nearest the middle of the searched bracket."""
    valid = [r for r in results if r.valid]
    if not valid:
        raise MagicSolverError("no valid (alpha < 0) magic root")
    mid = 0.5 * (valid[0].bracket_nm[0] + valid[0].bracket_nm[1])
    return min(valid, key=lambda r: abs(r.wavelength_nm - mid))


def trap_depth(magic: MagicResult, intensity_kw_cm2: float) -> float:
    """Depth of the lattice modulation for the magic pair, in Hz."""
    if intensity_kw_cm2 < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity_kw_cm2}")
    return abs(magic.alpha_khz_per_kw_cm2) * intensity_kw_cm2 * 1.0e3


def transition_energy_au(species: Species, state: RydbergState) -> float:
    """Energy of the metastable -> ``state`` transition, hartree.

    The metastable level is placed via the measured clock frequency above
    the ground state; the Rydberg level via its quantum-defect binding
    energy below the ionization limit.
    """
    if species.clock_frequency_hz is None:
        raise ValueError(f"{species.name}: no clock frequency in species file")
    e_meta = units.frequency_hz_to_omega_au(species.clock_frequency_hz)
    delta_e = species.ionization_limit_au - state.binding_au - e_meta
    if delta_e <= 0:
        raise ValueError(
            f"{species.name} metastable -> {state}: transition energy "
            f"{delta_e:.3e} a.u. is not positive"
        )
    return delta_e


def transition_wavelength(
    species: Species, state: RydbergState, photons: int = 2
) -> float:
    """Drive wavelength [nm] for metastable -> ``state``, per photon.

    ``photons = 2`` gives the two-photon drive wavelength (each photon
    carries half the transition energy).
    """
    if photons not in (1, 2):
        raise ValueError(f"photons must be 1 or 2, got {photons}")
    return photons * units.omega_au_to_wavelength_nm(
        transition_energy_au(species, state)
    )


def ponderomotive_coupling_bound(state: RydbergState, omega_au: float) -> float:
    """Smallness bound (n_eff^2 omega)^-2 on the neglected A.p coupling.

    Reported as a diagnostic only; values << 1 justify keeping just the
    ponderomotive (A^2) lattice term.
    """
    if omega_au <= 0:
        raise ValueError(f"omega_au must be > 0, got {omega_au}")
    return 1.0 / (state.n_eff**2 * omega_au) ** 2
