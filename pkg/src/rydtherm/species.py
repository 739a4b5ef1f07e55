"""Species data files and quantum-defect state energies.

A species file is UTF-8 ``key = value`` text with ``#`` comments.  It carries
everything the physics engine needs to know about one atom: Rydberg–Ritz
quantum defects per LS series, the ionization limit, reduced-mass factor,
discrete line lists for the clock states (BBR response) and for the
metastable lattice response, clock metadata, and solver defaults.  Unknown
keys are rejected with the offending line number, as are malformed values —
a corrupted data file should fail loudly, not half-load.

Key families (see ``data/sr.species`` for a commented example):

    format_version, name, data_version, mass_amu, ionization_limit_hartree,
    rydberg_n_max,
    defect.<series>.{n_min,n_max,mu0,mu2,mu4},
    ground.{series,n}, metastable.{series,n},
    line.<i>.{omega_au,d_au}, line.core_alpha_au,
    bbrline.<ground|metastable>.<i>.{omega_au,d_au},
    bbrline.<ground|metastable>.core_alpha_au,
    lowlying.<series>.<i>.{final,dipole_n32_au},
    clock.frequency_hz, clock.bbr_sensitivity_per_K,
    magic.bracket_nm_low, magic.bracket_nm_high

The ``lowlying`` family patches decay channels whose compact final states
(effective quantum number below l+1) have no Coulomb-approximation
wavefunction: ``final`` names the final state as ``<series>:<n>`` and
``dipole_n32_au`` is the coefficient D of the standard compact-state
scaling <final|r|n*, l> = D / n*^(3/2) for a Rydberg initial state with
effective quantum number n*.

Energies: a state (n, series) has effective quantum number
n* = n - mu(n), mu(n) = mu0 + mu2/(n-mu0)^2 + mu4/(n-mu0)^4, and binding
energy mu_red/(2 n*^2) hartree (mu_red = reduced-mass factor).
"""

from __future__ import annotations

import importlib.resources
import math
import os
import re
from dataclasses import dataclass, field

from . import constants as k

_L_LETTERS = "SPDFGHIK"
_SERIES_RE = re.compile(r"^([13])([SPDFGH])(\d)$")
_ENV_DATA_DIR = "RYDTHERM_DATA_DIR"


class SpeciesDataError(ValueError):
    """Malformed or inconsistent species data file."""


@dataclass(frozen=True)
class SeriesDefect:
    label: str
    n_min: int
    n_max: int
    mu0: float
    mu2: float
    mu4: float

    @property
    def L(self) -> int:
        return _L_LETTERS.index(_SERIES_RE.match(self.label).group(2))

    @property
    def S(self) -> float:
        return (int(_SERIES_RE.match(self.label).group(1)) - 1) / 2.0

    @property
    def J(self) -> float:
        return float(_SERIES_RE.match(self.label).group(3))

    def mu(self, n: int) -> float:
        m = n - self.mu0
        return self.mu0 + self.mu2 / m**2 + self.mu4 / m**4


@dataclass(frozen=True)
class Line:
    """One discrete dipole channel: transition energy and reduced dipole."""

    omega_au: float
    d_au: float


@dataclass(frozen=True)
class LowLyingChannel:
    """Decay channel to a compact state the radial engine cannot solve.

    The radial dipole integral from a Rydberg state with effective quantum
    number n* is modeled as dipole_n32_au / n*^(3/2) — the normalization
    scaling of a Rydberg wavefunction against a fixed compact orbital.
    """

    final_series: str
    final_n: int
    dipole_n32_au: float


@dataclass(frozen=True)
class RydbergState:
    """A bound (n, series) state of a loaded species."""

    species: "Species" = field(repr=False, compare=False)
    n: int = 0
    series: str = ""
    _key: tuple = field(default=(), repr=False)

    @property
    def defect(self) -> SeriesDefect:
        return self.species.series_info(self.series)

    @property
    def L(self) -> int:
        return self.defect.L

    @property
    def S(self) -> float:
        return self.defect.S

    @property
    def J(self) -> float:
        return self.defect.J

    @property
    def n_eff(self) -> float:
        return self.n - self.defect.mu(self.n)

    @property
    def binding_au(self) -> float:
        """Binding energy (positive), hartree."""
        return self.species.reduced_mass_factor / (2.0 * self.n_eff**2)

    @property
    def energy_au(self) -> float:
        """Energy relative to the ionization limit (negative), hartree."""
        return -self.binding_au

    def __str__(self) -> str:  # e.g. "Sr 25 3D1"
        return f"{self.species.name} {self.n} {self.series}"


def _parse_series_label(label: str) -> tuple[float, int, float]:
    m = _SERIES_RE.match(label)
    if not m:
        raise SpeciesDataError(f"bad series label {label!r} (expected e.g. 3D1)")
    S = (int(m.group(1)) - 1) / 2.0
    L = _L_LETTERS.index(m.group(2))
    J = float(m.group(3))
    if not (abs(L - S) <= J <= L + S):
        raise SpeciesDataError(f"series label {label!r} violates |L-S| <= J <= L+S")
    return S, L, J


_KEY_PATTERNS = [
    re.compile(p)
    for p in (
        r"^format_version$",
        r"^name$",
        r"^data_version$",
        r"^mass_amu$",
        r"^ionization_limit_hartree$",
        r"^rydberg_n_max$",
        r"^defect\.[13][SPDFGH]\d\.(n_min|n_max|mu0|mu2|mu4)$",
        r"^(ground|metastable)\.(series|n)$",
        r"^line\.\d+\.(omega_au|d_au)$",
        r"^line\.core_alpha_au$",
        r"^bbrline\.(ground|metastable)\.\d+\.(omega_au|d_au)$",
        r"^bbrline\.(ground|metastable)\.core_alpha_au$",
        r"^lowlying\.[13][SPDFGH]\d\.\d+\.(final|dipole_n32_au)$",
        r"^clock\.frequency_hz$",
        r"^clock\.bbr_sensitivity_per_K$",
        r"^magic\.bracket_nm_(low|high)$",
    )
]


def _read_kv(path: str) -> dict[str, tuple[str, int]]:
    out: dict[str, tuple[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SpeciesDataError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not any(p.match(key) for p in _KEY_PATTERNS):
                raise SpeciesDataError(f"{path}:{lineno}: unknown key {key!r}")
            if key in out:
                raise SpeciesDataError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = (val, lineno)
    return out


class _KV:
    """Typed accessors over the raw key/value map with line-number errors."""

    def __init__(self, path: str, kv: dict[str, tuple[str, int]]):
        self.path = path
        self.kv = kv
        self.used: set[str] = set()

    def _get(self, key: str, required: bool = True) -> tuple[str, int] | None:
        if key not in self.kv:
            if required:
                raise SpeciesDataError(f"{self.path}: missing required key {key!r}")
            return None
        self.used.add(key)
        return self.kv[key]

    def str_(self, key: str) -> str:
        return self._get(key)[0]

    def float_(self, key: str, required: bool = True, default: float = 0.0) -> float:
        got = self._get(key, required)
        if got is None:
            return default
        val, lineno = got
        try:
            if val == "inf":
                return math.inf
            return float(val)
        except ValueError:
            raise SpeciesDataError(
                f"{self.path}:{lineno}: bad float {val!r} for {key!r}"
            ) from None

    def int_(self, key: str) -> int:
        val, lineno = self._get(key)
        try:
            return int(val)
        except ValueError:
            raise SpeciesDataError(
                f"{self.path}:{lineno}: bad integer {val!r} for {key!r}"
            ) from None

    def has(self, key: str) -> bool:
        return key in self.kv


def _collect_lines(kvw: _KV, prefix: str) -> tuple[Line, ...]:
    idx = set()
    pat = re.compile(re.escape(prefix) + r"\.(\d+)\.(omega_au|d_au)$")
    for key in kvw.kv:
        m = pat.match(key)
        if m:
            idx.add(int(m.group(1)))
    lines = []
    for i in sorted(idx):
        omega = kvw.float_(f"{prefix}.{i}.omega_au")
        d = kvw.float_(f"{prefix}.{i}.d_au")
        if omega <= 0:
            raise SpeciesDataError(
                f"{kvw.path}: {prefix}.{i}.omega_au must be positive"
            )
        if d <= 0:
            raise SpeciesDataError(f"{kvw.path}: {prefix}.{i}.d_au must be positive")
        lines.append(Line(omega_au=omega, d_au=d))
    return tuple(lines)


class Species:
    """Loaded species data: defects, line lists, clock metadata."""

    def __init__(self, path: str):
        self.path = path
        kvw = _KV(path, _read_kv(path))
        if kvw.int_("format_version") != 1:
            raise SpeciesDataError(f"{path}: unsupported format_version")
        self.name = kvw.str_("name")
        self.data_version = kvw.str_("data_version")
        mass = kvw.float_("mass_amu")
        if math.isinf(mass):
            self.reduced_mass_factor = 1.0
        else:
            if mass <= 0:
                raise SpeciesDataError(f"{path}: mass_amu must be positive or inf")
            self.reduced_mass_factor = 1.0 / (1.0 + k.ELECTRON_MASS_U / mass)
        self.mass_amu = mass
        self.ionization_limit_au = kvw.float_("ionization_limit_hartree")
        if self.ionization_limit_au <= 0:
            raise SpeciesDataError(f"{path}: ionization_limit_hartree must be > 0")
        self.rydberg_n_max = kvw.int_("rydberg_n_max")

        self._series: dict[str, SeriesDefect] = {}
        labels = sorted(
            {
                key.split(".")[1]
                for key in kvw.kv
                if key.startswith("defect.")
            }
        )
        for label in labels:
            _parse_series_label(label)
            pre = f"defect.{label}"
            sd = SeriesDefect(
                label=label,
                n_min=kvw.int_(f"{pre}.n_min"),
                n_max=kvw.int_(f"{pre}.n_max"),
                mu0=kvw.float_(f"{pre}.mu0"),
                mu2=kvw.float_(f"{pre}.mu2", required=False),
                mu4=kvw.float_(f"{pre}.mu4", required=False),
            )
            if sd.n_min > sd.n_max:
                raise SpeciesDataError(f"{path}: {pre}: n_min > n_max")
            # n* must stay positive everywhere; perturbed low members may dip
            # below L (e.g. Sr 4d), which the radial engine refuses to solve
            # but whose energies remain valid data
            st_low = sd.n_min - sd.mu(sd.n_min)
            if st_low <= 0.1:
                raise SpeciesDataError(
                    f"{path}: {pre}: n_eff({sd.n_min}) = {st_low:.3f} is not physical"
                )
            self._series[label] = sd
        if not self._series:
            raise SpeciesDataError(f"{path}: no defect.<series> entries")

        self._ground = (kvw.str_("ground.series"), kvw.int_("ground.n"))
        self._metastable = None
        if kvw.has("metastable.series"):
            self._metastable = (kvw.str_("metastable.series"), kvw.int_("metastable.n"))

        self.lattice_lines = _collect_lines(kvw, "line")
        self.lattice_core_alpha_au = kvw.float_("line.core_alpha_au", required=False)
        self.bbr_lines: dict[str, tuple[tuple[Line, ...], float]] = {}
        for which in ("ground", "metastable"):
            lines = _collect_lines(kvw, f"bbrline.{which}")
            if lines:
                core = kvw.float_(f"bbrline.{which}.core_alpha_au", required=False)
                self.bbr_lines[which] = (lines, core)

        self._lowlying: dict[str, tuple[LowLyingChannel, ...]] = {}
        ll_pat = re.compile(r"^lowlying\.([13][SPDFGH]\d)\.(\d+)\.final$")
        ll_idx: dict[str, set[int]] = {}
        for key in kvw.kv:
            m = ll_pat.match(key)
            if m:
                ll_idx.setdefault(m.group(1), set()).add(int(m.group(2)))
        for initial, idx in sorted(ll_idx.items()):
            if initial not in self._series:
                raise SpeciesDataError(
                    f"{path}: lowlying.{initial}: unknown initial series"
                )
            chans = []
            for i in sorted(idx):
                final = kvw.str_(f"lowlying.{initial}.{i}.final")
                dip = kvw.float_(f"lowlying.{initial}.{i}.dipole_n32_au")
                fs, _, fn = final.partition(":")
                if fs not in self._series or not fn.isdigit():
                    raise SpeciesDataError(
                        f"{path}: lowlying.{initial}.{i}.final = {final!r} "
                        "must be '<series>:<n>' for a declared series"
                    )
                if abs(self._series[fs].L - self._series[initial].L) != 1:
                    raise SpeciesDataError(
                        f"{path}: lowlying.{initial}.{i}: {final!r} is not "
                        "dipole-coupled to the initial series"
                    )
                if dip <= 0:
                    raise SpeciesDataError(
                        f"{path}: lowlying.{initial}.{i}.dipole_n32_au must be > 0"
                    )
                chans.append(
                    LowLyingChannel(
                        final_series=fs, final_n=int(fn), dipole_n32_au=dip
                    )
                )
            self._lowlying[initial] = tuple(chans)

        self.clock_frequency_hz = (
            kvw.float_("clock.frequency_hz") if kvw.has("clock.frequency_hz") else None
        )
        self.clock_bbr_sensitivity_per_k = (
            kvw.float_("clock.bbr_sensitivity_per_K")
            if kvw.has("clock.bbr_sensitivity_per_K")
            else None
        )
        self.magic_bracket_nm = None
        if kvw.has("magic.bracket_nm_low"):
            self.magic_bracket_nm = (
                kvw.float_("magic.bracket_nm_low"),
                kvw.float_("magic.bracket_nm_high"),
            )
            if not 0 < self.magic_bracket_nm[0] < self.magic_bracket_nm[1]:
                raise SpeciesDataError(f"{path}: bad magic bracket")

        for gs_label, gs_n in (self._ground, self._metastable or self._ground):
            if gs_label not in self._series:
                raise SpeciesDataError(f"{path}: unknown series {gs_label!r}")
            sd = self._series[gs_label]
            if not sd.n_min <= gs_n <= sd.n_max:
                raise SpeciesDataError(
                    f"{path}: n = {gs_n} outside [{sd.n_min}, {sd.n_max}] for {gs_label}"
                )

    # -- states ------------------------------------------------------------

    @property
    def key(self) -> str:
        return f"{self.name}:{self.data_version}"

    def series_labels(self) -> tuple[str, ...]:
        return tuple(sorted(self._series))

    def lowlying_channels(self, initial_series: str) -> tuple[LowLyingChannel, ...]:
        """Patched compact-state decay channels for a Rydberg series."""
        return self._lowlying.get(initial_series, ())

    def series_info(self, label: str) -> SeriesDefect:
        try:
            return self._series[label]
        except KeyError:
            raise SpeciesDataError(
                f"{self.name}: no such series {label!r} "
                f"(have {', '.join(sorted(self._series))})"
            ) from None

    def state(self, n: int, series: str) -> RydbergState:
        sd = self.series_info(series)
        if not sd.n_min <= n <= sd.n_max:
            raise SpeciesDataError(
                f"{self.name} {series}: n = {n} outside valid range "
                f"[{sd.n_min}, {sd.n_max}]"
            )
        return RydbergState(
            species=self, n=n, series=series, _key=(self.key, n, series)
        )

    def ground_state(self) -> RydbergState:
        return self.state(self._ground[1], self._ground[0])

    def metastable_state(self) -> RydbergState:
        if self._metastable is None:
            raise SpeciesDataError(f"{self.name}: no metastable state defined")
        return self.state(self._metastable[1], self._metastable[0])

    def state_role(self, state: RydbergState) -> str | None:
        """'ground' / 'metastable' if the state is one of the two, else None."""
        if (state.series, state.n) == self._ground:
            return "ground"
        if self._metastable is not None and (state.series, state.n) == self._metastable:
            return "metastable"
        return None


def bundled_species_path(name: str) -> str:
    ref = importlib.resources.files("rydtherm.data").joinpath(f"{name}.species")
    return str(ref)


def load_species(name_or_path: str) -> Species:
    """Load a species by bundled name ('sr', 'yb', 'hydrogen') or file path.

    The environment variable RYDTHERM_DATA_DIR, if set, is searched before
    the bundled data directory.
    """
    if os.sep in name_or_path or name_or_path.endswith(".species"):
        path = name_or_path
    else:
        name = name_or_path.lower()
        env_dir = os.environ.get(_ENV_DATA_DIR)
        if env_dir and os.path.exists(os.path.join(env_dir, f"{name}.species")):
            path = os.path.join(env_dir, f"{name}.species")
        else:
            path = bundled_species_path(name)
    if not os.path.exists(path):
        raise SpeciesDataError(f"no species data file at {path}")
    return Species(path)
