"""AC and static dipole polarizabilities.

Two channel sources, matching the blackbody-shift engine:

* Rydberg (and other table-solvable) states use the sum over the dipole
  transition table, `alpha(w) = sum_ch 2 w_ch z_ch^2 / (w_ch^2 - w^2)`,
  plus a single-pole tail at the ionization threshold carrying the missing
  Thomas-Reiche-Kuhn strength, so the free-electron limit -1/w^2 is exact
  for w far above every resonance.
* Ground/metastable clock states use the curated line list from the
  species file plus its constant core term (the core resonances lie far
  above every frequency of interest here).

Polarizabilities are m_J-resolved: a linearly polarized probe along the
quantization axis sees `alpha(m) = sum 2 w_ch S_ch (3j(J' 1 J; -m 0 m))^2
/ (w_ch^2 - w^2)`.  The default is the stretched component m_J = J, which
is what the lattice/thermometry drive prepares; ``m_j=None`` requests the
orientation average (the scalar polarizability).  For J = 0 states all
conventions coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import constants as kconst
from . import units
from .radial import RadialSolver, default_solver
from .species import RydbergState, Species
from .transitions import (
    DEFAULT_SPAN,
    TransitionTable,
    build_transition_table,
    channel_alpha_au,
)
from .wigner import threej

DEFAULT_GUARD_FRACTION = 1e-4

_AU_TO_HZ_M2_V2 = kconst.HARTREE_HZ / kconst.ATOMIC_FIELD_V_PER_M**2


class ResonanceGuardError(ValueError):
    """Requested frequency sits inside the guard band of a resonance."""

    def __init__(self, message: str, resonance_id: str, omega_au: float):
        super().__init__(message)
        self.resonance_id = resonance_id
        self.omega_au = omega_au


class NonPerturbativeFieldError(ValueError):
    """DC field too strong for the quadratic Stark regime."""


@dataclass(frozen=True)
class PolarizabilityResult:
    """Dynamic polarizability of one state at one probe frequency."""

    state_str: str
    omega_au: float
    m_j: float | None  # None = orientation average
    value_au: float
    tail_au: float
    # (channel id, alpha contribution in a.u.), sorted by |contribution|
    channels: tuple[tuple[str, float], ...] = field(repr=False)
    nearest_resonance_id: str | None
    # signed detuning omega - |omega_res| of the nearest resonance, a.u.
    nearest_detuning_au: float

    @property
    def value_hz_m2_v2(self) -> float:
        """alpha such that the level shift is -1/2 alpha E^2 [Hz, V/m]."""
        return self.value_au * _AU_TO_HZ_M2_V2

    @property
    def value_khz_per_kw_cm2(self) -> float:
        """Single-beam light-shift coefficient, kHz per kW/cm^2."""
        return units.convert(self.value_au, "au_pol", "khz_per_kw_cm2")


def _m_weight(j_initial: float, j_final: float, m_j: float) -> float:
    """Ratio of the m_J-resolved channel weight to the scalar z^2 weight."""
    w = threej(j_final, 1, j_initial, -m_j, 0, m_j)
    return 3.0 * (2.0 * j_initial + 1.0) * w * w


def _series_j(series: str) -> float:
    return float(series[2:])


def _nearest_resonance(
    pairs: list[tuple[str, float]], omega_au: float
) -> tuple[str | None, float]:
    """(id, signed detuning) of the resonance closest to ``omega_au``."""
    best: tuple[str | None, float] = (None, math.inf)
    for rid, w_res in pairs:
        det = omega_au - abs(w_res)
        if abs(det) < abs(best[1]):
            best = (rid, det)
    return best


def _guard_check(
    pairs: list[tuple[str, float]], omega_au: float, guard_fraction: float
) -> None:
    if omega_au <= 0.0:
        return
    for rid, w_res in pairs:
        w_abs = abs(w_res)
        if abs(omega_au - w_abs) < guard_fraction * w_abs:
            raise ResonanceGuardError(
                f"probe frequency {omega_au:.9e} a.u. is within the "
                f"{guard_fraction:g} guard band of resonance {rid} at "
                f"{w_abs:.9e} a.u.",
                resonance_id=rid,
                omega_au=w_abs,
            )


def _line_id(omega_au: float) -> str:
    return f"{units.omega_au_to_wavelength_nm(abs(omega_au)):.0f}nm"


def _line_list_polarizability(
    state: RydbergState,
    role: str,
    omega_au: float,
    m_j: float | None,
    guard_fraction: float,
) -> PolarizabilityResult:
    if m_j not in (None, 0):
        raise ValueError(
            f"{state}: the line-list route carries no final-state J data; "
            f"only the scalar (m_j=None or 0) polarizability is defined"
        )
    lines, core_alpha = state.species.bbr_lines[role]
    pairs = [(_line_id(line.omega_au), line.omega_au) for line in lines]
    _guard_check(pairs, omega_au, guard_fraction)
    per = []
    for line, (rid, _) in zip(lines, pairs):
        z2 = line.d_au**2 / (3.0 * (2.0 * state.J + 1.0))
        alpha = (
            2.0
            * line.omega_au
            * z2
            / (line.omega_au**2 - omega_au * omega_au)
        )
        per.append((rid, alpha))
    per.append(("core", core_alpha))
    per.sort(key=lambda t: -abs(t[1]))
    rid, det = _nearest_resonance(pairs, omega_au)
    return PolarizabilityResult(
        state_str=str(state),
        omega_au=omega_au,
        m_j=m_j,
        value_au=math.fsum(a for _, a in per),
        tail_au=0.0,
        channels=tuple(per),
        nearest_resonance_id=rid,
        nearest_detuning_au=det,
    )


_STRETCHED = "stretched"


def ac_polarizability(
    state: RydbergState,
    omega_au: float,
    m_j: float | None = _STRETCHED,  # type: ignore[assignment]
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
    guard_fraction: float = DEFAULT_GUARD_FRACTION,
    use_line_list: bool = True,
) -> PolarizabilityResult:
    """Dynamic dipole polarizability at probe frequency ``omega_au`` >= 0.

    ``m_j`` defaults to the stretched component m_J = J; pass None for the
    orientation average.  Raises ResonanceGuardError when ``omega_au`` is
    within ``guard_fraction`` (relative) of any channel resonance.
    """
    if omega_au < 0:
        raise ValueError(f"probe frequency must be >= 0, got {omega_au}")
    if m_j is _STRETCHED:
        m_j = state.J
    if m_j is not None and abs(m_j) > state.J:
        raise ValueError(f"|m_j| = {abs(m_j)} exceeds J = {state.J}")
    role = state.species.state_role(state)
    if use_line_list and role is not None and role in state.species.bbr_lines:
        return _line_list_polarizability(
            state, role, omega_au, m_j, guard_fraction
        )

    solver = solver or default_solver()
    table: TransitionTable = build_transition_table(state, span, solver)
    pairs = [(ch.channel_id, ch.omega_au) for ch in table.channels]
    _guard_check(pairs, omega_au, guard_fraction)
    per = []
    for ch in table.channels:
        alpha = channel_alpha_au(ch, omega_au)
        if m_j is not None:
            alpha *= _m_weight(state.J, _series_j(ch.series), m_j)
        per.append((ch.channel_id, alpha))
    # Missing-strength tail as a single pole at the ionization threshold:
    # keeps the far-off-resonance limit at exactly -1/w^2 (TRK) and adds
    # the right sign of static background below threshold.
    w_th = state.binding_au
    tail = (
        table.f_missing / (w_th * w_th - omega_au * omega_au)
        if table.f_missing > 0.0
        else 0.0
    )
    per.sort(key=lambda t: -abs(t[1]))
    rid, det = _nearest_resonance(pairs, omega_au)
    return PolarizabilityResult(
        state_str=str(state),
        omega_au=omega_au,
        m_j=m_j,
        value_au=math.fsum(a for _, a in per) + tail,
        tail_au=tail,
        channels=tuple(per),
        nearest_resonance_id=rid,
        nearest_detuning_au=det,
    )


def static_polarizability(
    state: RydbergState,
    m_j: float | None = _STRETCHED,  # type: ignore[assignment]
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
    use_line_list: bool = True,
) -> PolarizabilityResult:
    """Static dipole polarizability (the omega = 0 sum over states)."""
    return ac_polarizability(
        state,
        0.0,
        m_j=m_j,
        span=span,
        solver=solver,
        use_line_list=use_line_list,
    )


def ac_polarizability_metastable(
    species: Species,
    omega_au: float,
    guard_fraction: float = DEFAULT_GUARD_FRACTION,
) -> PolarizabilityResult:
    """Metastable clock-state polarizability from the curated line list."""
    if omega_au < 0:
        raise ValueError(f"probe frequency must be >= 0, got {omega_au}")
    state = species.metastable_state()
    return _line_list_polarizability(
        state, "metastable", omega_au, None, guard_fraction
    )


def dc_stark_shift(
    state: RydbergState,
    e_field_v_per_m: float,
    m_j: float | None = _STRETCHED,  # type: ignore[assignment]
    span: int = DEFAULT_SPAN,
    solver: RadialSolver | None = None,
) -> float:
    """Quadratic DC Stark shift -1/2 alpha(0) E^2, in Hz.

    Raises NonPerturbativeFieldError when the shift is no longer small
    against the nearest resonance spacing (10% threshold).
    """
    if e_field_v_per_m < 0:
        raise ValueError(f"field must be >= 0, got {e_field_v_per_m}")
    if e_field_v_per_m == 0.0:
        return 0.0
    res = static_polarizability(state, m_j=m_j, span=span, solver=solver)
    shift_hz = -0.5 * res.value_hz_m2_v2 * e_field_v_per_m**2
    if res.nearest_resonance_id is not None:
        spacing_hz = abs(res.nearest_detuning_au) * kconst.HARTREE_HZ
        if abs(shift_hz) > 0.1 * spacing_hz:
            raise NonPerturbativeFieldError(
                f"{state}: shift {shift_hz:.3e} Hz at {e_field_v_per_m:g} V/m "
                f"exceeds 10% of the {res.nearest_resonance_id} spacing "
                f"({spacing_hz:.3e} Hz); the quadratic Stark expansion is "
                f"not trustworthy there"
            )
    return shift_hz
