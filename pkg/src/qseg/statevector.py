"""Dense n-qubit statevector simulation.

The register holds 2**n complex amplitudes with qubit 0 on the least
significant bit of the basis index. Bitstring text renders qubit 0 first,
so basis index 2 on two qubits prints as ``"01"``.

Operations mutate the register in place and return it for chaining; the
inner loops are delegated to the compiled kernels (or their numpy
fallback) selected in ``_backend``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._backend import kernels

MAX_QUBITS = 22

SQRT_HALF = 1.0 / np.sqrt(2.0)

HADAMARD = np.array([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]], dtype=complex)


class PauliKind(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


_PAULI = {
    PauliKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(kind: PauliKind) -> np.ndarray:
    """Return a copy of the 2x2 matrix for the given Pauli gate."""
    return _PAULI[kind].copy()


def index_to_bitstring(z: int, n_qubits: int) -> str:
    """Render basis index z as a bitstring with qubit 0 first."""
    return "".join("1" if (z >> i) & 1 else "0" for i in range(n_qubits))


def bitstring_to_index(bits: str) -> int:
    """Inverse of :func:`index_to_bitstring`."""
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


@dataclass(frozen=True)
class NoiseConfig:
    """Per-gate Pauli error channel: X, Y or Z each with probability
    ``per_pauli_prob`` after every logical gate (mutually exclusive draws).
    """

    per_pauli_prob: float = 0.05
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.per_pauli_prob <= 1.0 / 3.0:
            raise ValueError(
                f"per_pauli_prob must lie in [0, 1/3], got {self.per_pauli_prob}"
            )


def _check_unitary(gate: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    if not np.allclose(gate @ gate.conj().T, np.eye(2), atol=tol):
        raise ValueError("gate is not unitary")
    return gate


class StateVector:
    """Mutable register of 2**n_qubits complex amplitudes."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}")
        self.n_qubits = n_qubits
        dim = 1 << n_qubits
        if amplitudes is None:
            amp = np.zeros(dim, dtype=np.complex128)
            amp[0] = 1.0
        else:
            amp = np.ascontiguousarray(amplitudes, dtype=np.complex128)
            if amp.shape != (dim,):
                raise ValueError(f"expected {dim} amplitudes, got {amp.shape}")
        self.amplitudes = amp

    @classmethod
    def plus_state(
        cls, n_qubits: int, pinned: list[tuple[int, int]] | tuple = ()
    ) -> "StateVector":
        """Uniform superposition on the free qubits, pinned qubits fixed
        in the given computational-basis state.
        """
        seen = set()
        for q, bit in pinned:
            if not 0 <= q < n_qubits:
                raise ValueError(f"pinned qubit {q} out of range for n={n_qubits}")
            if q in seen:
                raise ValueError(f"duplicate pinned qubit {q}")
            if bit not in (0, 1):
                raise ValueError(f"pinned bit must be 0 or 1, got {bit}")
            seen.add(q)

        state = cls.__new__(cls)
        state.n_qubits = n_qubits
        state.amplitudes = plus_state_amplitudes(n_qubits, tuple(pinned))
        return state

    def copy(self) -> "StateVector":
        dup = StateVector.__new__(StateVector)
        dup.n_qubits = self.n_qubits
        dup.amplitudes = self.amplitudes.copy()
        return dup

    def norm_sq(self) -> float:
        return kernels.norm_sq(self.amplitudes)

    def probabilities(self) -> np.ndarray:
        out = np.empty(self.amplitudes.shape[0], dtype=np.float64)
        kernels.probabilities(self.amplitudes, out)
        return out

    def apply_gate(self, q: int, gate: np.ndarray) -> "StateVector":
        """Apply a single-qubit unitary to qubit q without materializing
        the full 2**n matrix.
        """
        if not 0 <= q < self.n_qubits:
            raise ValueError(f"qubit {q} out of range for n={self.n_qubits}")
        g = _check_unitary(gate)
        kernels.apply_gate(self.amplitudes, q, g[0, 0], g[0, 1], g[1, 0], g[1, 1])
        return self

    def apply_pauli(self, q: int, kind: PauliKind) -> "StateVector":
        g = _PAULI[kind]
        kernels.apply_gate(self.amplitudes, q, g[0, 0], g[0, 1], g[1, 0], g[1, 1])
        return self

    def apply_phase(self, diag: np.ndarray, angle: float) -> "StateVector":
        """Multiply each amplitude by exp(-i*angle*diag[z])."""
        diag = np.asarray(diag, dtype=np.float64)
        if diag.shape != self.amplitudes.shape:
            raise ValueError(
                f"diagonal length {diag.shape[0]} does not match register "
                f"dimension {self.amplitudes.shape[0]}"
            )
        kernels.phase_rotate(self.amplitudes, np.ascontiguousarray(diag), float(angle))
        return self

    def apply_mixer(self, angle: float, active_qubits) -> "StateVector":
        """Apply exp(-i*angle*sigma_x) to each active qubit; the terms
        commute, so the order is irrelevant. Inactive qubits are untouched.
        """
        qubits = np.asarray(sorted(active_qubits), dtype=np.intp)
        if qubits.size and (qubits[0] < 0 or qubits[-1] >= self.n_qubits):
            raise ValueError("active qubit out of range")
        kernels.rotate_x(self.amplitudes, qubits, float(angle))
        return self

    def sample(self, shots: int, rng) -> dict[str, int]:
        """Draw ``shots`` computational-basis measurements.

        ``rng`` is a seed or a ``numpy.random.Generator``; identical seeds
        give identical histograms.
        """
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        p = self.probabilities()
        p /= p.sum()
        counts = rng.multinomial(shots, p)
        (hit,) = np.nonzero(counts)
        return {
            index_to_bitstring(int(z), self.n_qubits): int(counts[z]) for z in hit
        }


def plus_state_amplitudes(n_qubits: int, pinned: tuple = ()) -> np.ndarray:
    """Amplitude array for the pinned uniform superposition (validated
    inputs assumed).
    """
    dim = 1 << n_qubits
    n_free = n_qubits - len(pinned)
    value = SQRT_HALF**n_free
    amp = np.zeros(dim, dtype=np.complex128)
    if not pinned:
        amp.fill(value)
        return amp
    pin_mask = 0
    pin_bits = 0
    for q, bit in pinned:
        pin_mask |= 1 << q
        pin_bits |= bit << q
    z = np.arange(dim, dtype=np.int64)
    amp[(z & pin_mask) == pin_bits] = value
    return amp


def apply_pauli_noise(
    state: StateVector,
    cfg: NoiseConfig,
    qubits,
    rng: np.random.Generator | None = None,
) -> StateVector:
    """One Monte-Carlo noise event per touched qubit: apply X, Y or Z each
    with probability ``cfg.per_pauli_prob``, otherwise nothing.

    Call once after each logical gate with the qubits that gate touched.
    Pass the same ``rng`` across calls to draw a single trajectory; when
    omitted, a fresh generator is seeded from ``cfg.rng_seed``.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.rng_seed)
    p = cfg.per_pauli_prob
    if p == 0.0:
        return state
    for q in sorted(qubits):
        r = rng.random()
        if r < p:
            state.apply_pauli(q, PauliKind.X)
        elif r < 2 * p:
            state.apply_pauli(q, PauliKind.Y)
        elif r < 3 * p:
            state.apply_pauli(q, PauliKind.Z)
    return state
