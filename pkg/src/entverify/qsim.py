"""
Exact pure-state simulation of small qubit registers.

A pure state of n qubits is a dense complex128 numpy vector of length 2**n.
Index convention is big-endian: qubit 0 is the leftmost bit of the basis
label, so amps[0b10] of a 2-qubit state is the |10> amplitude.

Gate set is {H, X, Z, CNOT}; measurement is computational, arbitrary
single-qubit basis, or Bell basis (via the explicit CNOT+H circuit, so the
two classical bits are well defined). All operations return new arrays;
inputs are never mutated.

Registers are capped at MAX_QUBITS = 8: every protocol in this library
needs at most 5 qubits per round, and dense exact simulation at this size
is microseconds per gate.
"""
from __future__ import annotations

from math import sqrt
from typing import NamedTuple

import numpy as np

__all__ = [
    "Amplitude",
    "PureState",
    "BellVariant",
    "SingleQubitBasis",
    "GateKind",
    "RandomSource",
    "MAX_QUBITS",
    "NORM_TOL",
    "BRANCH_CUTOFF",
    "COMPUTATIONAL",
    "DIAGONAL",
    "zero_state",
    "num_qubits",
    "apply_gate",
    "apply_cnot",
    "bell_state",
    "product",
    "measure_computational",
    "measure_in_basis",
    "bell_measure",
    "fidelity",
    "branch_probabilities",
    "dump_state",
]

# Type aliases: amplitudes are complex scalars, states are complex vectors.
Amplitude = complex
PureState = np.ndarray
GateKind = str  # one of "H", "X", "Z"

MAX_QUBITS = 8
NORM_TOL = 1e-9
# Measurement branches with probability below this are treated as impossible
# and never selected (avoids renormalizing a near-null vector).
BRANCH_CUTOFF = 1e-12

_SQRT2_INV = 1.0 / sqrt(2.0)

_GATES: dict[GateKind, np.ndarray] = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT2_INV,
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class BellVariant(NamedTuple):
    """Two classical bits (i, j) indexing one of the four Bell states."""

    i: int
    j: int


class SingleQubitBasis(NamedTuple):
    """Orthonormal single-qubit basis {|u0> = a|0>+b|1>, |u1> = -b*|0>+a*|1>}."""

    a: Amplitude
    b: Amplitude

    def matrix(self) -> np.ndarray:
        """Unitary whose columns are |u0>, |u1>."""
        a, b = complex(self.a), complex(self.b)
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=np.complex128)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0) <= tol


COMPUTATIONAL = SingleQubitBasis(1.0, 0.0)
DIAGONAL = SingleQubitBasis(_SQRT2_INV, _SQRT2_INV)

# Bell states |beta_ij> on (|00>,|01>,|10>,|11>):
#   beta_00 = (|00>+|11>)/sqrt2      beta_01 = (|10>+|01>)/sqrt2
#   beta_10 = (|10>-|01>)/sqrt2      beta_11 = (|00>-|11>)/sqrt2
_BELL: dict[tuple[int, int], np.ndarray] = {
    (0, 0): np.array([_SQRT2_INV, 0, 0, _SQRT2_INV], dtype=np.complex128),
    (0, 1): np.array([0, _SQRT2_INV, _SQRT2_INV, 0], dtype=np.complex128),
    (1, 0): np.array([0, -_SQRT2_INV, _SQRT2_INV, 0], dtype=np.complex128),
    (1, 1): np.array([_SQRT2_INV, 0, 0, -_SQRT2_INV], dtype=np.complex128),
}


class RandomSource:
    """Deterministic uniform source with derivable substreams.

    A source is identified by (seed, path); ``substream(i)`` derives the
    child (seed, path + (i,)). Identical (seed, path, draw index) always
    produce the identical draw, independent of any other stream, so Monte
    Carlo trials that each use their own substream give identical results
    under any parallel schedule.
    """

    __slots__ = ("seed", "path", "_gen")

    def __init__(self, seed: int, path: tuple[int, ...] = ()) -> None:
        self.seed = int(seed)
        self.path = tuple(path)
        self._gen: np.random.Generator | None = None

    def substream(self, stream_id: int) -> "RandomSource":
        return RandomSource(self.seed, self.path + (int(stream_id),))

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy generator, for bulk vectorized draws."""
        if self._gen is None:
            self._gen = np.random.default_rng(
                np.random.SeedSequence(self.seed, spawn_key=self.path)
            )
        return self._gen

    def uniform(self) -> float:
        """One double uniform on [0, 1)."""
        return float(self.generator.random())

    def bit(self) -> int:
        """One fair classical bit."""
        return 1 if self.uniform() < 0.5 else 0

    def bits(self, n: int) -> tuple[int, ...]:
        return tuple(self.bit() for _ in range(n))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RandomSource(seed={self.seed}, path={self.path})"


def num_qubits(s: PureState) -> int:
    """Number of qubits of a state vector (length must be a power of two)."""
    n = int(s.size).bit_length() - 1
    if 1 << n != s.size:
        raise ValueError(f"state length {s.size} is not a power of two")
    return n


def _check_target(n: int, target: int, name: str = "target") -> None:
    if not 0 <= target < n:
        raise IndexError(f"{name} {target} out of range for {n}-qubit state")


def zero_state(n: int) -> PureState:
    """|0...0> on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count {n} outside supported range 1..{MAX_QUBITS}")
    s = np.zeros(1 << n, dtype=np.complex128)
    s[0] = 1.0
    return s


def apply_gate(s: PureState, g: GateKind, target: int) -> PureState:
    """Apply a single-qubit gate on `target`; returns a new state."""
    try:
        m = _GATES[g]
    except KeyError:
        raise ValueError(f"unknown gate kind {g!r}") from None
    n = num_qubits(s)
    _check_target(n, target)
    return _apply_matrix(s, m, target)


def _apply_matrix(s: PureState, m: np.ndarray, target: int) -> PureState:
    _check_target(num_qubits(s), target)
    blocks = s.reshape(1 << target, 2, -1)
    out = np.empty_like(blocks)
    out[:, 0, :] = m[0, 0] * blocks[:, 0, :] + m[0, 1] * blocks[:, 1, :]
    out[:, 1, :] = m[1, 0] * blocks[:, 0, :] + m[1, 1] * blocks[:, 1, :]
    return out.reshape(s.shape)


def apply_cnot(s: PureState, control: int, target: int) -> PureState:
    """CNOT with the given control and target; returns a new state."""
    if control == target:
        raise ValueError("control and target must differ")
    n = num_qubits(s)
    _check_target(n, control, "control")
    _check_target(n, target)
    cube = s.reshape([2] * n)
    out = cube.copy()

    def sel(cbit: int, tbit: int) -> tuple:
        idx: list = [slice(None)] * n
        idx[control], idx[target] = cbit, tbit
        return tuple(idx)

    out[sel(1, 0)] = cube[sel(1, 1)]
    out[sel(1, 1)] = cube[sel(1, 0)]
    return out.reshape(s.shape)


def bell_state(v: BellVariant | tuple[int, int]) -> PureState:
    """The two-qubit Bell state |beta_ij> for variant v = (i, j)."""
    i, j = v
    return _BELL[(int(i), int(j))].copy()


def product(a: PureState, b: PureState) -> PureState:
    """Tensor product a (x) b; qubits of `a` come first (big-endian)."""
    n = num_qubits(a) + num_qubits(b)
    if n > MAX_QUBITS:
        raise ValueError(f"combined register of {n} qubits exceeds cap {MAX_QUBITS}")
    return (a[:, None] * b[None, :]).reshape(-1)


def branch_probabilities(s: PureState, target: int) -> tuple[float, float]:
    """Exact (P(bit 0), P(bit 1)) of a computational measurement on `target`."""
    n = num_qubits(s)
    _check_target(n, target)
    blocks = s.reshape(1 << target, 2, -1)
    mags = blocks.real * blocks.real + blocks.imag * blocks.imag
    return float(mags[:, 0, :].sum()), float(mags[:, 1, :].sum())


def measure_computational(
    s: PureState, target: int, r: RandomSource
) -> tuple[int, PureState]:
    """Measure `target` in the computational basis.

    Returns (bit, collapsed renormalized state). Branches with probability
    below BRANCH_CUTOFF are impossible and selected without drawing.
    """
    p0, p1 = branch_probabilities(s, target)
    if p0 < BRANCH_CUTOFF:
        bit = 1
    elif p1 < BRANCH_CUTOFF:
        bit = 0
    else:
        bit = 0 if r.uniform() < p0 else 1
    prob = p0 if bit == 0 else p1
    blocks = s.reshape(1 << target, 2, -1).copy()
    blocks[:, 1 - bit, :] = 0.0
    out = blocks.reshape(s.shape) / sqrt(prob)
    return bit, out


def measure_in_basis(
    s: PureState, target: int, basis: SingleQubitBasis, r: RandomSource
) -> tuple[int, PureState]:
    """Measure `target` in an arbitrary orthonormal basis.

    Equivalent to rotating the target by the inverse basis change, measuring
    computationally, and rotating the collapsed state back. Outcome 0
    corresponds to |u0>, outcome 1 to |u1>.
    """
    if not basis.is_normalized():
        raise ValueError("basis is not normalized")
    b = basis.matrix()
    rotated = _apply_matrix(s, b.conj().T, target)
    bit, collapsed = measure_computational(rotated, target, r)
    return bit, _apply_matrix(collapsed, b, target)


def bell_measure(
    s: PureState, qa: int, qb: int, r: RandomSource
) -> tuple[BellVariant, PureState]:
    """Bell-basis measurement of qubits (qa, qb) via the CNOT+H circuit.

    Applies CNOT(qa -> qb) then H(qa), measures both computationally as
    (m1, m2), and reports the measured Bell variant (m1, m1 XOR m2); the
    remaining qubits collapse accordingly.
    """
    if qa == qb:
        raise ValueError("qa and qb must differ")
    s = apply_cnot(s, qa, qb)
    s = apply_gate(s, "H", qa)
    m1, s = measure_computational(s, qa, r)
    m2, s = measure_computational(s, qb, r)
    return BellVariant(m1, m1 ^ m2), s


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 for equal-sized states."""
    if a.size != b.size:
        raise ValueError("states have different sizes")
    return float(abs(np.vdot(a, b)) ** 2)


def dump_state(s: PureState) -> str:
    """Debug dump: one line `index,re,im` per amplitude."""
    return "\n".join(f"{i},{amp.real:.12g},{amp.imag:.12g}" for i, amp in enumerate(s))
