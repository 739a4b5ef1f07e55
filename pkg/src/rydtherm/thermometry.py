"""Blackbody thermometry with metastable -> Rydberg transitions.

The BBR shift of a metastable -> Rydberg optical transition is dominated
by the Rydberg state's quasi-free-electron shift (~2.4 kHz at 300 K,
slope ~16 Hz/K), hundreds of times more temperature-sensitive as a
fraction of the transition frequency than an optical clock transition.
This module turns that into instrumentation:

* ``transition_bbr_sensitivity`` — d(shift)/dT by Richardson-extrapolated
  central differences;
* ``invert_temperature`` — safeguarded Newton solve of shift(T) = offset;
* ``joint_solve_temperature_field`` — weighted least squares over
  (T, E^2) using two or more transitions with distinct static
  polarizabilities, separating temperature from a stray DC field;
* ``vdw_shift_estimate`` — anchored (n/25)^11 (4 um/R)^6 density limit;
* ``measurement_budget`` / ``error_budget`` — shot-noise cycle counts and
  the full accuracy chain down to the clock's BBR uncertainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import constants as kconst
from .bbr import TEMPERATURE_RANGE_K, bbr_shift_sum, linewidths
from .lattice import transition_energy_au
from .polarizability import static_polarizability
from .radial import RadialSolver
from .species import RydbergState, Species
from .transitions import DEFAULT_SPAN

DEFAULT_SEED_K = 300.0


class ThermometryError(RuntimeError):
    """Inversion or joint solve failed (non-convergence, degeneracy)."""


@dataclass(frozen=True)
class ThermometryMeasurement:
    """One measured metastable -> Rydberg transition offset.

    ``offset_hz`` is the transition frequency minus its T = 0, E = 0
    reference value; ``sigma_hz`` its 1-sigma uncertainty.
    """

    state: RydbergState
    offset_hz: float
    sigma_hz: float

    def __post_init__(self) -> None:
        if not self.sigma_hz > 0:
            raise ValueError(
                f"measurement uncertainty must be > 0, got {self.sigma_hz}"
            )

    @property
    def transition_id(self) -> str:
        sp = self.state.species
        meta = sp.metastable_state()
        return (
            f"{sp.name} {meta.n} {meta.series} -> "
            f"{self.state.n} {self.state.series}"
        )


@dataclass(frozen=True)
class ThermometrySolution:
    """Result of a temperature (or temperature + stray field) solve."""

    temperature_k: float
    sigma_temperature_k: float
    field_v_per_m: float
    sigma_field_v_per_m: float
    covariance: tuple[tuple[float, ...], ...]  # over (T, E^2) or (T,)
    residuals_hz: tuple[float, ...]
    field_sq_clamped: bool
    iterations: int


def transition_bbr_shift(
    species: Species,
    upper: RydbergState,
    temperature_k: float,
    lower: RydbergState | None = None,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> float:
    """BBR shift of the ``lower -> upper`` transition frequency, Hz.

    ``lower`` defaults to the species' metastable clock state.
    """
    if lower is None:
        lower = species.metastable_state()
    up = bbr_shift_sum(upper, temperature_k, span=span, solver=solver)
    lo = bbr_shift_sum(lower, temperature_k, span=span, solver=solver)
    return up.shift_hz - lo.shift_hz


def state_bbr_sensitivity(
    state: RydbergState,
    temperature_k: float,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> float:
    """d(shift)/dT of one state's BBR shift at ``temperature_k``, Hz/K."""
    return _richardson_slope(
        lambda t: bbr_shift_sum(state, t, span=span, solver=solver).shift_hz,
        temperature_k,
    )


def transition_bbr_sensitivity(
    species: Species,
    upper: RydbergState,
    temperature_k: float,
    lower: RydbergState | None = None,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> float:
    """d(transition shift)/dT at ``temperature_k``, Hz/K."""
    return _richardson_slope(
        lambda t: transition_bbr_shift(
            species, upper, t, lower=lower, span=span, solver=solver
        ),
        temperature_k,
    )


def _richardson_slope(f, t: float, h: float = 2.0) -> float:
    """Central difference with one Richardson step: error O(h^4)."""
    if t < 0:
        raise ValueError(f"temperature must be >= 0, got {t}")
    if t == 0.0:
        return 0.0  # shifts vanish at least quadratically at T = 0
    h = min(h, 0.5 * t)  # keep both stencils in T >= 0

    def central(step: float) -> float:
        return (f(t + step) - f(t - step)) / (2.0 * step)

    d1 = central(h)
    d2 = central(0.5 * h)
    return (4.0 * d2 - d1) / 3.0


def invert_temperature(
    measurement: ThermometryMeasurement,
    seed_k: float = DEFAULT_SEED_K,
    tol_k: float = 1.0e-7,
    max_iter: int = 60,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> ThermometrySolution:
    """Solve shift(T) = measured offset for T, assuming zero stray field.

    Safeguarded Newton from ``seed_k``: steps that leave the supported
    temperature range or fail to shrink the residual fall back to
    bisection on a bracket maintained from all previous evaluations.
    """
    species = measurement.state.species

    def model(t: float) -> float:
        return transition_bbr_shift(
            species, measurement.state, t, span=span, solver=solver
        )

    t_lo, t_hi = TEMPERATURE_RANGE_K
    t_hi = t_hi - 1.0e-9  # stay strictly inside the validated range
    target = measurement.offset_hz

    # The transition shift is strictly increasing in T (Rydberg state
    # rises ~T^2, metastable falls ~ -T^4), so a bracket is easy to keep.
    lo, f_lo = t_lo, -target  # shift(0) = 0
    hi, f_hi = t_hi, model(t_hi) - target
    if f_lo > 0.0 or f_hi < 0.0:
        raise ThermometryError(
            f"{measurement.transition_id}: offset {target:.6g} Hz lies "
            f"outside the invertible range [{f_lo + target:.6g}, "
            f"{f_hi + target:.6g}] Hz for T in [{t_lo:g}, {t_hi:g}] K"
        )

    t = min(max(seed_k, t_lo), t_hi)
    f_t = model(t) - target
    iterations = 0
    while abs(hi - lo) > tol_k and iterations < max_iter:
        iterations += 1
        if f_t > 0.0:
            hi, f_hi = t, f_t
        else:
            lo, f_lo = t, f_t
        slope = _richardson_slope(model, max(t, 1.0e-3))
        t_newton = t - f_t / slope if slope > 0.0 else None
        if t_newton is not None and lo < t_newton < hi:
            t_next = t_newton
        else:
            t_next = 0.5 * (lo + hi)
        f_next = model(t_next) - target
        # safeguard: insist on progress, else bisect
        if abs(f_next) >= abs(f_t) and not (hi - lo) < 4.0 * tol_k:
            t_next = 0.5 * (lo + hi)
            f_next = model(t_next) - target
        t, f_t = t_next, f_next
        if f_t == 0.0:
            break
    else:
        if abs(hi - lo) > tol_k:
            raise ThermometryError(
                f"{measurement.transition_id}: temperature inversion did "
                f"not converge in {max_iter} iterations"
            )
    slope = _richardson_slope(model, max(t, 1.0e-3))
    sigma_t = measurement.sigma_hz / slope if slope > 0.0 else math.inf
    return ThermometrySolution(
        temperature_k=t,
        sigma_temperature_k=sigma_t,
        field_v_per_m=0.0,
        sigma_field_v_per_m=0.0,
        covariance=((sigma_t * sigma_t,),),
        residuals_hz=(target - model(t),),
        field_sq_clamped=False,
        iterations=iterations,
    )


def joint_solve_temperature_field(
    measurements: list[ThermometryMeasurement],
    seed_k: float = DEFAULT_SEED_K,
    tol_k: float = 1.0e-7,
    max_iter: int = 50,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> ThermometrySolution:
    """Weighted least squares for (T, E^2) over >= 2 distinct transitions.

    Model per measurement: offset = BBR(T) - (1/2) alpha_n(0) E^2, with
    alpha_n the Rydberg state's static polarizability (the metastable
    state's DC response is negligible on this scale).  E^2 keeps the
    field part of the model linear; a negative estimate is clamped to 0
    and flagged.  Raises on fewer than 2 measurements or degenerate
    design (all states identical).
    """
    if len(measurements) < 2:
        raise ThermometryError("joint solve needs >= 2 measurements")
    species = measurements[0].state.species
    if any(m.state.species is not species for m in measurements[1:]):
        raise ThermometryError("joint solve: all measurements must share a species")
    keys = {(m.state.n, m.state.series) for m in measurements}
    if len(keys) < 2:
        raise ThermometryError(
            "joint solve: measurements must probe >= 2 distinct states "
            f"(got only {keys.pop()})"
        )

    alphas = np.array(
        [
            static_polarizability(
                m.state, span=span, solver=solver
            ).value_hz_m2_v2
            for m in measurements
        ]
    )
    offsets = np.array([m.offset_hz for m in measurements])
    sigmas = np.array([m.sigma_hz for m in measurements])

    def bbr_vec(t: float) -> np.ndarray:
        return np.array(
            [
                transition_bbr_shift(
                    species, m.state, t, span=span, solver=solver
                )
                for m in measurements
            ]
        )

    def bbr_slope_vec(t: float) -> np.ndarray:
        return np.array(
            [
                transition_bbr_sensitivity(
                    species, m.state, t, span=span, solver=solver
                )
                for m in measurements
            ]
        )

    t_lo, t_hi = TEMPERATURE_RANGE_K
    t = min(max(seed_k, t_lo + 1.0), t_hi - 1.0)
    e2 = 0.0
    clamped = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        model = bbr_vec(t) - 0.5 * alphas * e2
        r = (offsets - model) / sigmas
        jac = np.column_stack(
            [bbr_slope_vec(t) / sigmas, -0.5 * alphas / sigmas]
        )
        gram = jac.T @ jac
        if np.linalg.cond(gram) > 1.0e12:
            raise ThermometryError(
                "joint solve: degenerate design matrix — the chosen states "
                "do not separate temperature from field"
            )
        step = np.linalg.solve(gram, jac.T @ r)
        t_new = float(np.clip(t + step[0], t_lo + 1.0e-6, t_hi - 1.0e-9))
        e2_new = e2 + step[1]
        if e2_new < 0.0:
            e2_new, clamped = 0.0, True
        else:
            clamped = False
        done = abs(t_new - t) < tol_k and abs(e2_new - e2) <= 1.0e-9 * max(
            e2, 1.0
        )
        t, e2 = t_new, e2_new
        if done:
            break
    else:
        raise ThermometryError(
            f"joint solve did not converge in {max_iter} iterations"
        )

    model = bbr_vec(t) - 0.5 * alphas * e2
    jac = np.column_stack([bbr_slope_vec(t) / sigmas, -0.5 * alphas / sigmas])
    cov = np.linalg.inv(jac.T @ jac)
    sigma_t = math.sqrt(max(cov[0, 0], 0.0))
    sigma_e2 = math.sqrt(max(cov[1, 1], 0.0))
    e_field = math.sqrt(e2)
    sigma_e = sigma_e2 / (2.0 * e_field) if e_field > 1.0e-12 else math.sqrt(
        sigma_e2
    )
    return ThermometrySolution(
        temperature_k=t,
        sigma_temperature_k=sigma_t,
        field_v_per_m=e_field,
        sigma_field_v_per_m=sigma_e,
        covariance=tuple(tuple(row) for row in cov),
        residuals_hz=tuple(float(x) for x in offsets - model),
        field_sq_clamped=clamped,
        iterations=iterations,
    )


def vdw_shift_estimate(n: int, spacing_um: float) -> float:
    """Van-der-Waals shift of one Rydberg atom by a neighbor, Hz.

    Anchored scaling estimate: 1 Hz at n = 25 and 4 um spacing, scaled
    by (n/25)^11 (4 um/R)^6.  An order-of-magnitude density guide, not a
    computed C6 coefficient.
    """
    if n < 15:
        raise ValueError(f"scaling anchor requires n >= 15, got {n}")
    if spacing_um <= 0:
        raise ValueError(f"spacing must be > 0, got {spacing_um}")
    return 1.0 * (n / 25.0) ** 11 * (4.0 / spacing_um) ** 6


def measurement_budget(
    atoms: float,
    linewidth_hz: float,
    target_resolution_hz: float,
    kappa: float = 1.0,
) -> int:
    """Shot-noise cycle count to reach a target frequency resolution.

    SNR = sqrt(atoms); one cycle resolves linewidth / (kappa * SNR);
    averaging M cycles improves by sqrt(M).
    """
    if atoms <= 0 or linewidth_hz <= 0 or target_resolution_hz <= 0:
        raise ValueError("atoms, linewidth and target must all be > 0")
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    per_cycle = linewidth_hz / (kappa * math.sqrt(atoms))
    return max(1, math.ceil((per_cycle / target_resolution_hz) ** 2))


@dataclass(frozen=True)
class ErrorBudget:
    """Accuracy chain from a transition measurement to the clock's BBR term."""

    transition_id: str
    temperature_k: float
    transition_frequency_hz: float
    fractional_accuracy: float
    target_resolution_hz: float  # fractional accuracy expressed in Hz
    sensitivity_hz_per_k: float
    temperature_sigma_k: float
    total_linewidth_hz: float
    line_split_factor: float  # target resolution / total linewidth
    clock_fractional_uncertainty: float | None
    leverage: float | None  # Rydberg fractional sensitivity / clock's
    notes: tuple[str, ...] = field(default=())


def error_budget(
    species: Species,
    upper: RydbergState,
    fractional_accuracy: float,
    temperature_k: float,
    lower: RydbergState | None = None,
    linewidth_hz: float | None = None,
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> ErrorBudget:
    """Full error chain for a BBR thermometry transition.

    fractional accuracy -> Hz resolution -> temperature uncertainty via
    the transition's BBR sensitivity -> clock BBR uncertainty via the
    species' clock sensitivity constant.  ``linewidth_hz`` overrides the
    computed total transition linewidth (e.g. to budget against an
    externally specified line).
    """
    if fractional_accuracy <= 0:
        raise ValueError("fractional accuracy must be > 0")
    if lower is None:
        lower_state = species.metastable_state()
        nu_hz = transition_energy_au(species, upper) * kconst.HARTREE_HZ
        tid = (
            f"{species.name} {lower_state.n} {lower_state.series} -> "
            f"{upper.n} {upper.series}"
        )
        lower_width = 0.0  # metastable: mHz-scale, negligible here
        sens = transition_bbr_sensitivity(
            species, upper, temperature_k, span=span, solver=solver
        )
    else:
        nu_hz = abs(lower.binding_au - upper.binding_au) * kconst.HARTREE_HZ
        tid = (
            f"{species.name} {lower.n} {lower.series} -> "
            f"{upper.n} {upper.series}"
        )
        lw = linewidths(lower, temperature_k, span=span, solver=solver)
        lower_width = lw.total_hz
        sens = transition_bbr_sensitivity(
            species, upper, temperature_k, lower=lower, span=span, solver=solver
        )
    target_hz = fractional_accuracy * nu_hz
    sigma_t = abs(target_hz / sens) if sens != 0.0 else math.inf
    if linewidth_hz is None:
        up_w = linewidths(upper, temperature_k, span=span, solver=solver)
        linewidth_hz = up_w.total_hz + lower_width
    split = target_hz / linewidth_hz if linewidth_hz > 0 else math.inf

    clock_frac: float | None = None
    leverage: float | None = None
    notes: list[str] = []
    if species.clock_bbr_sensitivity_per_k is not None:
        clock_frac = sigma_t * species.clock_bbr_sensitivity_per_k
        ryd_frac_sens = abs(sens) / nu_hz
        leverage = ryd_frac_sens / species.clock_bbr_sensitivity_per_k
        notes.append(
            "clock BBR uncertainty assumes the species clock sensitivity "
            f"constant {species.clock_bbr_sensitivity_per_k:g} /K"
        )
    return ErrorBudget(
        transition_id=tid,
        temperature_k=temperature_k,
        transition_frequency_hz=nu_hz,
        fractional_accuracy=fractional_accuracy,
        target_resolution_hz=target_hz,
        sensitivity_hz_per_k=sens,
        temperature_sigma_k=sigma_t,
        total_linewidth_hz=linewidth_hz,
        line_split_factor=split,
        clock_fractional_uncertainty=clock_frac,
        leverage=leverage,
        notes=tuple(notes),
    )
