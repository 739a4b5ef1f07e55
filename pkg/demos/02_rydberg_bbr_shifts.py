"""
Blackbody shifts across a divalent spectrum
===========================================

Room-temperature blackbody radiation shifts every level of an atom.  For
high Rydberg states the shift saturates at the free-electron plateau;
for low-lying states it is set by the static polarizability and can have
either sign.  This script scans strontium from the clock states up
through the Rydberg series and cross-checks the two summation routes.
"""

import numpy as np

from rydtherm.bbr import (
    bbr_shift_integral,
    bbr_shift_sum,
    free_electron_shift,
    static_limit_shift,
)
from rydtherm.polarizability import static_polarizability
from rydtherm.species import load_species

sr = load_species("Sr")
T = 300.0
plateau = free_electron_shift(T)

# %%
# Approach to the plateau
# -----------------------
# By n = 30 every triplet series sits within a few percent of the
# free-electron value; the residual structure is the bound spectrum's
# memory of where its oscillator strength sits relative to kT.

print(f"plateau (free electron) at {T:.0f} K: {plateau:.1f} Hz\n")
print("   n    3S1 [Hz]    3P1 [Hz]    3D2 [Hz]")
for n in (20, 25, 30, 40, 50):
    row = [bbr_shift_sum(sr.state(n, s), T).shift_hz for s in ("3S1", "3P1", "3D2")]
    print(f"  {n:3d}  {row[0]:9.1f}   {row[1]:9.1f}   {row[2]:9.1f}")

# %%
# Low-lying d states: the other sign
# ----------------------------------
# The lowest members of the d series lie below their main oscillator
# strength, so their polarizability is positive and the thermal shift is
# negative -- tens to hundreds of Hz downward, nothing like the plateau.

print("\n   n    3D1 shift [Hz]")
for n in range(4, 9):
    print(f"  {n:3d}   {bbr_shift_sum(sr.state(n, '3D1'), T).shift_hz:10.2f}")

# %%
# Clock states
# ------------
# The two clock levels respond through their static polarizabilities;
# the full thermal average adds a small dynamic correction to the
# metastable state from its infrared line to the lowest d states.

for name, st in (("1S0", sr.state(5, "1S0")), ("3P0", sr.metastable_state())):
    full = bbr_shift_sum(st, T).shift_hz
    alpha0 = static_polarizability(st).value_au
    static = static_limit_shift(alpha0, T)
    print(f"\n{name}: alpha(0) = {alpha0:6.1f} au;"
          f" static route {static:+.3f} Hz, full thermal average {full:+.3f} Hz")

# %%
# Route cross-check
# -----------------
# The line-by-line kernel sum and the principal-value spectral integral
# are independent discretizations of the same physics and must agree.

print("\n  state        sum [Hz]   integral [Hz]   rel. diff")
rng = np.random.default_rng(7)
for _ in range(4):
    n = int(rng.integers(15, 56))
    series = ("3S1", "3P0", "3P2", "3D1", "3D3")[int(rng.integers(0, 5))]
    st = sr.state(n, series)
    a = bbr_shift_sum(st, T).shift_hz
    b = bbr_shift_integral(st, T).shift_hz
    print(f"  {n:3d} {series}   {a:10.2f}   {b:12.2f}   {abs(a - b) / abs(a):.1e}")
