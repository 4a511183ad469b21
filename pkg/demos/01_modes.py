# %% [markdown]
# # Surface modes of a sphere above a substrate
#
# The substrate's image dipole splits the threefold-degenerate dipole
# resonance of an isolated sphere (depolarization factor 1/3) into a
# perpendicular mode (m = 0) and a doubly degenerate parallel mode (|m| = 1).

# %%
import numpy as np

from nanocasimir import GOLD, PERFECT, SAPPHIRE, TIO2, Environment, contrast_factor, coupled_modes

for substrate in (SAPPHIRE, TIO2, PERFECT):
    print(f"{substrate.label:9s} f_c = {contrast_factor(Environment(GOLD, substrate)):+.4f}")

# %% [markdown]
# Depolarization factors against separation for a perfect conductor. Below
# z/R ~ 0.26 the perpendicular factor turns negative and the dipolar model has
# no real mode frequency.

# %%
print(" z/R      n_perp    n_par    valid  w_perp(eV)  w_par(eV)")
for ratio in (0.0, 0.2, 0.3, 0.5, 1.0, 2.0, 4.0, 10.0):
    modes = coupled_modes(-1.0, 1.0 + ratio)
    n0, n1 = modes.channel(0)[0].n, modes.channel(1)[0].n
    w = [np.sqrt(n) * GOLD.plasma_energy if n > 0 else float("nan") for n in (n0, n1)]
    print(f"{ratio:5.2f}  {n0:+.5f}  {n1:+.5f}  {modes.valid!s:5}  {w[0]:9.4f}  {w[1]:9.4f}")
