# %% [markdown]
# # Interaction energy and Casimir force
#
# Each damped Drude line carries exactly half its resonance energy, so the
# quadrature reproduces the sharp-resonance closed form for any damping.

# %%
from nanocasimir import (GOLD, PERFECT, POTASSIUM, SAPPHIRE, TIO2, Environment, Geometry,
                         casimir_energy, casimir_force, sharp_limit_energy)

g = Geometry(radius=10.0, gap=10.0)
for sphere in (POTASSIUM, GOLD):
    for substrate in (SAPPHIRE, TIO2, PERFECT):
        env = Environment(sphere, substrate)
        res = casimir_energy(env, g)
        force = casimir_force(env, g)
        print(f"{sphere.label:2s}/{substrate.label:9s} U = {res.value:+.6f} eV "
              f"(closed form {sharp_limit_energy(env, g):+.6f}), F = {force.force_pN:+.4f} pN")

# %% [markdown]
# Both force routes: a Richardson-extrapolated central difference of U and a
# derivative taken under the integral sign.

# %%
env = Environment(GOLD, SAPPHIRE)
for ratio in (0.5, 1.0, 2.0, 5.0):
    g = Geometry.from_ratio(10.0, ratio)
    fd = casimir_force(env, g, method="fd").force
    an = casimir_force(env, g, method="analytic").force
    print(f"z/R = {ratio:3.1f}: fd {fd:+.8e}  analytic {an:+.8e}  rel diff {abs(fd / an - 1):.1e}")

# %% [markdown]
# U depends on geometry only through z/R, so at fixed z/R the force scales as 1/R.

# %%
for R in (10.0, 100.0, 1000.0):
    print(R, casimir_force(env, Geometry.from_ratio(R, 1.0)).force)
