# %% [markdown]
# # Tuning the atom through the transducer band
#
# A SQUID replaces the single junction, so an external flux lowers the
# atom frequency.  Here the bare atom sits 20 % above the IDT center.  As
# the flux grows it moves down into the band, and the line seen from the
# gate splits around the IDT frequency.

# %%
import numpy as np

from sawatom.response import acoustic_reflection, gate_reflection
from sawatom.scenario import load_scenario
from sawatom.spectral import find_spectrum_peaks, flux_map, resonant_flux, splitting

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

# %%
sc = load_scenario("linbo3_fluxmap")
model = sc.model
phi = resonant_flux(model)
print(f"omega_0 / omega_IDT at zero flux: {model.omega_0 / model.omega_idt:.3f}")
print(f"flux that brings the atom to the IDT center: {phi:.6f} Phi_0")

# %% [markdown]
# The map records the gate reflection over flux and frequency.  Flux values
# where the effective inductance would diverge or turn negative are marked
# invalid.

# %%
fmap = flux_map(model, sc.flux_grid(), sc.frequency_grid(), "r_g")
print(f"map {fmap.values.shape}, invalid rows: {int((~fmap.valid).sum())}")

# %% [markdown]
# At the resonant flux the gate reflection column has two dips.  Their
# spacing is close to the splitting of the charge response, and the
# acoustic reflection at the IDT center stays at one.

# %%
tuned = model.with_phi_ext(phi)
grid = sc.frequency_grid(20001)
col = np.abs(gate_reflection(tuned, grid)) ** 2
dips = sorted(find_spectrum_peaks(grid, 1 - col), key=lambda p: p.height)[-2:]
gap = abs(dips[0].omega - dips[1].omega)
print(f"dip spacing {gap / model.omega_idt:.4f}  charge splitting {splitting(tuned) / model.omega_idt:.4f}")
print(f"|r_ac(omega_IDT)|^2 = {abs(acoustic_reflection(tuned, tuned.omega_idt)) ** 2:.8f}")

# %%
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    f = sc.frequency_grid() / (2e9 * np.pi)
    ax.pcolormesh(f, fmap.flux_grid, fmap.inverted, shading="auto", cmap="Greys")
    ax.axhline(phi, color="tab:red", lw=0.8)
    ax.set(xlabel="f [GHz]", ylabel="flux [Phi_0]", title="1 - |r_g|^2 (normalized)")
    fig.tight_layout()
    fig.savefig("04_flux_anticrossing.png", dpi=120)
