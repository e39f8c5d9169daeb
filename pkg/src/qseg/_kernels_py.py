"""Pure-numpy fallback for the compiled amplitude kernels.

Signature-compatible with ``_kernels``; used when the extension is not
built or when ``QSEG_BACKEND=python`` is set.
"""

import numpy as np

BACKEND_NAME = "python"


def apply_gate(amp, q, g00, g01, g10, g11):
    view = amp.reshape(-1, 2, 1 << q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = g00 * a0 + g01 * a1
    view[:, 1, :] = g10 * a0 + g11 * a1


def rotate_x(amp, qubits, angle):
    c = np.cos(angle)
    ms = -1j * np.sin(angle)
    for q in qubits:
        apply_gate(amp, int(q), c, ms, ms, c)


def phase_rotate(amp, diag, angle):
    t = angle * diag
    amp *= np.cos(t) - 1j * np.sin(t)


def expectation(amp, diag):
    p = amp.real**2 + amp.imag**2
    return float(p @ diag)


def norm_sq(amp):
    return float(np.vdot(amp, amp).real)


def probabilities(amp, out):
    np.add(amp.real**2, amp.imag**2, out=out)
