# cython: language_level=3
"""Hot amplitude-loop kernels for the statevector simulator.

All functions operate in place on a contiguous complex128 register of
length 2**n with qubit 0 on the least significant bit. A numpy
implementation with the same signatures lives in ``_kernels_py``; the
active one is chosen in ``_backend``.
"""

from libc.math cimport cos, sin

BACKEND_NAME = "cython"


def apply_gate(double complex[::1] amp, Py_ssize_t q,
               double complex g00, double complex g01,
               double complex g10, double complex g11):
    """Apply a 2x2 gate to qubit q: pairwise update with stride 2**q."""
    cdef Py_ssize_t n = amp.shape[0]
    cdef Py_ssize_t stride = 1 << q
    cdef Py_ssize_t block = stride << 1
    cdef Py_ssize_t base, off, i0, i1
    cdef double complex a0, a1
    with nogil:
        base = 0
        while base < n:
            for off in range(stride):
                i0 = base + off
                i1 = i0 + stride
                a0 = amp[i0]
                a1 = amp[i1]
                amp[i0] = g00 * a0 + g01 * a1
                amp[i1] = g10 * a0 + g11 * a1
            base += block


def rotate_x(double complex[::1] amp, Py_ssize_t[::1] qubits, double angle):
    """Apply exp(-i*angle*sigma_x) to every listed qubit (terms commute)."""
    cdef double c = cos(angle)
    cdef double complex ms = -1j * sin(angle)
    cdef Py_ssize_t n = amp.shape[0]
    cdef Py_ssize_t k, base, off, i0, i1, stride, block
    cdef double complex a0, a1
    with nogil:
        for k in range(qubits.shape[0]):
            stride = 1 << qubits[k]
            block = stride << 1
            base = 0
            while base < n:
                for off in range(stride):
                    i0 = base + off
                    i1 = i0 + stride
                    a0 = amp[i0]
                    a1 = amp[i1]
                    amp[i0] = c * a0 + ms * a1
                    amp[i1] = ms * a0 + c * a1
                base += block


def phase_rotate(double complex[::1] amp, double[::1] diag, double angle):
    """Multiply amp[z] by exp(-i*angle*diag[z])."""
    cdef Py_ssize_t i
    cdef double t
    with nogil:
        for i in range(amp.shape[0]):
            t = angle * diag[i]
            amp[i] = amp[i] * (cos(t) - 1j * sin(t))


def expectation(double complex[::1] amp, double[::1] diag):
    """Return sum_z |amp[z]|^2 * diag[z]."""
    cdef double acc = 0.0
    cdef double re, im
    cdef Py_ssize_t i
    with nogil:
        for i in range(amp.shape[0]):
            re = amp[i].real
            im = amp[i].imag
            acc += (re * re + im * im) * diag[i]
    return acc


def norm_sq(double complex[::1] amp):
    """Return sum_z |amp[z]|^2."""
    cdef double acc = 0.0
    cdef double re, im
    cdef Py_ssize_t i
    with nogil:
        for i in range(amp.shape[0]):
            re = amp[i].real
            im = amp[i].imag
            acc += re * re + im * im
    return acc


def probabilities(double complex[::1] amp, double[::1] out):
    """Write |amp[z]|^2 into out."""
    cdef double re, im
    cdef Py_ssize_t i
    with nogil:
        for i in range(amp.shape[0]):
            re = amp[i].real
            im = amp[i].imag
            out[i] = re * re + im * im
