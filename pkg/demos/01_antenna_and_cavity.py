# %% [markdown]
# # Antenna regime versus cavity regime
#
# A transmon whose capacitor is an interdigital transducer radiates surface
# acoustic waves through every finger pair.  With weak piezoelectric coupling
# the emitted wave leaves once and the atom shows a single Lorentzian line.
# With strong coupling the wave is reabsorbed by later fingers before it
# leaves, and the line splits in two.
#
# This notebook compares GaAs (K2 = 0.07 %) with LiNbO3 (K2 = 4.8 %) for the
# same ten-finger-pair geometry at 3 GHz.

# %%
import numpy as np

from sawatom.response import acoustic_reflection, charge_response, default_model
from sawatom.spectral import cavity_criterion, charge_peaks, minimal_n

try:
    import matplotlib.pyplot as plt
except ImportError:  # plotting is optional
    plt = None

# %% [markdown]
# The closed-form criterion says the cavity regime starts once
# 0.5*pi*K2*n**2 reaches one.  That happens at four finger pairs on LiNbO3
# but needs about thirty on GaAs.

# %%
for name, K2 in (("GaAs", 0.0007), ("LiNbO3", 0.048)):
    c = cavity_criterion(K2, 10)
    print(f"{name:7s} n=10  lhs = {c.lhs:6.3f}  cavity: {c.satisfied}  threshold n = {minimal_n(K2)}")

# %% [markdown]
# Both atoms are tuned to the IDT center frequency.  The gate line is left out
# so that the acoustic port is the only loss channel.

# %%
gaas = default_model("GaAs", C_g=0.0)
linbo3 = default_model("LiNbO3", C_g=0.0)
x = np.linspace(0.8, 1.2, 10001)
chi = {m.mat.name: np.abs(charge_response(m, x * m.omega_idt)) ** 2 for m in (gaas, linbo3)}
for m in (gaas, linbo3):
    peaks = charge_peaks(m, x * m.omega_idt)
    where = ", ".join(f"{p.omega / m.omega_idt:.4f}" for p in peaks)
    print(f"{m.mat.name}: {len(peaks)} peak(s) at omega/omega_IDT = {where}")

# %% [markdown]
# On resonance the atom reflects the incoming wave completely in both cases.
# What differs is the width of the stop band around it.

# %%
for m in (gaas, linbo3):
    print(f"{m.mat.name}: |r_ac(omega_0)| = {abs(acoustic_reflection(m, m.omega_0)):.12f}")

# %%
if plt is not None:
    fig, ax = plt.subplots(1, 2, figsize=(9, 3.5))
    for name, y in chi.items():
        ax[0].plot(x, y / y.max(), label=name)
    for m in (gaas, linbo3):
        ax[1].plot(x, np.abs(acoustic_reflection(m, x * m.omega_idt)) ** 2, label=m.mat.name)
    ax[0].set(xlabel="omega / omega_IDT", ylabel="|chi|^2 (normalized)")
    ax[1].set(xlabel="omega / omega_IDT", ylabel="|r_ac|^2")
    ax[0].legend()
    fig.tight_layout()
    fig.savefig("01_antenna_and_cavity.png", dpi=120)
