# %% [markdown]
# # Where the resonances live in the complex plane
#
# Peaks in a spectrum are shadows of poles of the response.  The charge
# response is 1/D(omega) with D entire in omega, so its poles are the zeros
# of D.  A split line should therefore show up as two poles of similar
# damping.

# %%
import numpy as np

from sawatom.response import default_model
from sawatom.spectral import find_poles, main_lobe, real_axis_resonances, splitting

# %%
linbo3 = default_model("LiNbO3", C_g=0.0)
poles = find_poles(linbo3)
print("classification:", poles.classification)
for z in sorted(poles.lobe_poles(main_lobe(linbo3)), key=lambda z: z.real):
    print(f"  pole / omega_IDT = {z.real / linbo3.omega_idt:.5f} {z.imag / linbo3.omega_idt:+.5f}j")

# %% [markdown]
# The distance between the two peaks of |chi|^2 matches the distance between
# the real parts of the poles.

# %%
a, b = sorted(poles.lobe_poles(main_lobe(linbo3)), key=lambda z: z.real)
print(f"peak splitting {splitting(linbo3) / linbo3.omega_idt:.5f}   pole gap {(b.real - a.real) / linbo3.omega_idt:.5f}")

# %% [markdown]
# A cheaper picture uses only the real axis.  The imaginary part of the
# frequency-dependent damping shifts the resonance, and solving for the
# shifted frequency gives three roots.  The middle one sits at omega_0, but
# it is so strongly damped that no peak forms there.

# %%
for r in real_axis_resonances(linbo3):
    flag = "suppressed" if r.suppressed else "visible"
    print(f"  root {r.omega / linbo3.omega_0:.5f} omega_0  width {r.linewidth / linbo3.omega_0:.4f}  {flag}")

# %% [markdown]
# Sweeping the coupling moves the system from one pole to two.  The sweep
# variable is the left-hand side of the cavity criterion.

# %%
for lhs in (0.3, 0.7, 1.5, 5.0, 20.0):
    K2 = 2 * lhs / (np.pi * 100)
    m = default_model(linbo3.mat.with_K2(K2), C_g=0.0)
    print(f"  lhs = {lhs:5.1f}  {find_poles(m).classification}")
