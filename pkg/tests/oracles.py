"""Independent reference computations used by the tests.

Nothing here calls into the closed forms under test: structure factors are
summed term by term, the Kramers-Kronig check uses an FFT Hilbert transform,
and the scattering oracle is the time-domain integrator.
"""

import numpy as np
from scipy.signal import hilbert


def brute_A(n, omega, tau):
    k = np.arange(n)
    return np.exp(-1j * np.multiply.outer(np.asarray(omega, dtype=complex), k * tau)).sum(axis=-1)


def brute_H(n, omega, tau):
    omega = np.asarray(omega, dtype=complex)
    out = np.full(omega.shape, complex(n))
    for k in range(1, n):
        out = out + 2 * k * np.exp(-1j * omega * tau * (n - k))
    return out


def hilbert_imag_from_real(re_h):
    """Im[H] predicted from Re[H] on a uniform grid covering exactly one period.

    H is a polynomial in exp(-1j*omega*tau), so over one full period the
    discrete (periodic) Hilbert transform is exact and no taper is needed.
    """
    return -np.imag(hilbert(re_h))


def one_period_grid(omega_idt, points):
    # [0.5, 1.5) * omega_idt is one period of exp(-1j*omega*tau)
    return omega_idt * (0.5 + np.arange(points) / points)


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)
