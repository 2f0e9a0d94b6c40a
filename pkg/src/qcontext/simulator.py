"""
Dense statevector simulation of context circuits (at most 4 wires).

Noise is unravelled into pure-state trajectories: after each gate, with the
model's probability, a uniformly random non-identity Pauli hits the touched
qubit(s); the ancilla readout is flipped with probability ``p_ro``. All shots
of one context run as a single batch of trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import ContextCircuit, Gate, context_circuit
from .geometry import IncidenceConfiguration

MAX_WIRES = 4
_ATOL = 1e-12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_ONE_QUBIT = {
    "h": _H,
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
}


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 0.0
    p2: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "p_ro"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @property
    def is_ideal(self) -> bool:
        return self.p1 == self.p2 == self.p_ro == 0.0

    @classmethod
    def uniform(cls, q: float) -> NoiseModel:
        return cls(q, q, q)


NOISELESS = NoiseModel()
DEFAULT_NOISE = NoiseModel(p1=0.002, p2=0.02, p_ro=0.02)


class StateVector:
    """Normalised pure state on ``n_qubits`` wires; qubit 0 is the most significant index."""

    def __init__(self, amplitudes, n_qubits: int | None = None):
        amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(math.log2(amp.size))) if n_qubits is None else n_qubits
        if amp.size != 1 << n:
            raise ValueError(f"{amp.size} amplitudes do not describe {n} qubits")
        if n > MAX_WIRES:
            raise ValueError(f"at most {MAX_WIRES} qubits are simulated")
        if abs(np.vdot(amp, amp).real - 1.0) > _ATOL:
            raise ValueError("state is not normalised")
        self.n_qubits = n
        self.amplitudes = amp

    @classmethod
    def zero(cls, n_qubits: int) -> StateVector:
        amp = np.zeros(1 << n_qubits, dtype=complex)
        amp[0] = 1.0
        return cls(amp, n_qubits)

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> StateVector:
        """Haar-random pure state."""
        v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
        return cls(v / np.linalg.norm(v), n_qubits)

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(np.kron(self.amplitudes, other.amplitudes), self.n_qubits + other.n_qubits)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def _apply_batch(states: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to a batch of shape (B, 2, ..., 2); axis q+1 is qubit q."""
    n = states.ndim - 1
    if g.kind == "barrier" or g.kind == "measure":
        return states
    if any(not 0 <= q < n for q in g.qubits):
        raise IndexError(f"{g} addresses a qubit outside 0..{n - 1}")
    if g.kind == "cx":
        c, t = g.qubits
        out = states.copy()
        sl = [slice(None)] * (n + 1)
        sl[c + 1] = 1
        ctrl = tuple(sl)
        # indexing the control drops its axis, shifting later axes down by one
        out[ctrl] = np.flip(states[ctrl], axis=t if t > c else t + 1)
        return out
    m = _ONE_QUBIT[g.kind]
    q = g.qubits[0]
    moved = np.moveaxis(states, q + 1, -1)
    return np.moveaxis(moved @ m.T, -1, q + 1)


def apply_gate(state: StateVector, g: Gate) -> StateVector:
    n = state.n_qubits
    out = _apply_batch(state.amplitudes.reshape((1,) + (2,) * n), g)
    return StateVector(out.reshape(-1), n)


def _pauli_on_rows(states: np.ndarray, rows: np.ndarray, qubit: int, which: int) -> None:
    """In place: Pauli ``which`` (1=X, 2=Y, 3=Z) on ``qubit`` for the selected batch rows."""
    if rows.size == 0 or which == 0:
        return
    sub = states[rows]
    ax = qubit + 1
    if which in (1, 2):
        sub = np.flip(sub, axis=ax)
    if which in (2, 3):
        sl = [slice(None)] * sub.ndim
        sl[ax] = 1
        sub[tuple(sl)] *= -1
    # Y = iXZ; the global phase is dropped
    states[rows] = sub


def _depolarize(states: np.ndarray, g: Gate, noise: NoiseModel, rng: np.random.Generator) -> None:
    B = states.shape[0]
    if g.kind in _ONE_QUBIT and noise.p1 > 0:
        hit = rng.random(B) < noise.p1
        paulis = rng.integers(1, 4, size=B)
        q = g.qubits[0]
        for w in (1, 2, 3):
            _pauli_on_rows(states, np.flatnonzero(hit & (paulis == w)), q, w)
    elif g.kind == "cx" and noise.p2 > 0:
        hit = rng.random(B) < noise.p2
        paulis = rng.integers(1, 16, size=B)  # 4*a + b, not both identity
        a_q, b_q = g.qubits
        for w in range(1, 16):
            rows = np.flatnonzero(hit & (paulis == w))
            _pauli_on_rows(states, rows, a_q, w >> 2)
            _pauli_on_rows(states, rows, b_q, w & 3)


@dataclass(frozen=True)
class ContextStats:
    count_plus: int
    count_minus: int

    @property
    def n_exp(self) -> int:
        return self.count_plus + self.count_minus

    @property
    def p(self) -> float:
        return self.count_plus / self.n_exp

    @property
    def mean(self) -> float:
        return (self.count_plus - self.count_minus) / self.n_exp

    @property
    def std(self) -> float:
        """Binomial standard deviation sqrt(p(1-p)/n_exp) of a dichotomic experiment."""
        p = self.p
        return math.sqrt(p * (1.0 - p) / self.n_exp)


def _initial_batch(circuit: ContextCircuit, input_state, rng: np.random.Generator) -> np.ndarray:
    n = circuit.n_qubits
    if circuit.width > MAX_WIRES:
        raise ValueError(f"{circuit.width} wires exceed the simulator cap of {MAX_WIRES}")
    if input_state is None or input_state == "zero":
        data = StateVector.zero(n)
    elif isinstance(input_state, str) and input_state == "random":
        data = StateVector.random(n, rng)
    elif isinstance(input_state, StateVector):
        data = input_state
    else:
        raise ValueError(f"unknown input preset {input_state!r}")
    if data.n_qubits != n:
        raise ValueError(f"input has {data.n_qubits} qubits, circuit expects {n}")
    full = data.tensor(StateVector.zero(1))
    return full.amplitudes.reshape((1,) + (2,) * circuit.width)


def final_states(circuit: ContextCircuit, inputs: Sequence[StateVector]) -> np.ndarray:
    """Noiseless output states for a batch of data-register inputs, shape (B, 2**width)."""
    anc = StateVector.zero(1)
    batch = np.stack([s.tensor(anc).amplitudes for s in inputs]).reshape((len(inputs),) + (2,) * circuit.width)
    for g in circuit.gates:
        batch = _apply_batch(batch, g)
    return batch.reshape(len(inputs), -1)


def ancilla_minus_probability(states: np.ndarray, width: int) -> np.ndarray:
    """Born probability of reading 1 (eigenvalue -1) on the last wire."""
    t = states.reshape((states.shape[0],) + (2,) * width)
    return (np.abs(t[..., 1]) ** 2).reshape(states.shape[0], -1).sum(axis=1)


def context_rng(seed: int, context_index: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, context index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, context_index])))


def run_context(
    circuit: ContextCircuit,
    input_state=None,
    shots: int = 8192,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    context_index: int = 0,
) -> ContextStats:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = context_rng(seed, context_index)
    init = _initial_batch(circuit, input_state, rng)

    if noise.p1 == 0 and noise.p2 == 0:
        # one trajectory serves every shot
        state = init
        for g in circuit.gates:
            state = _apply_batch(state, g)
        p_minus = float(ancilla_minus_probability(state.reshape(1, -1), circuit.width)[0])
        outcomes = rng.random(shots) < p_minus
    else:
        states = np.repeat(init, shots, axis=0)
        for g in circuit.gates:
            states = _apply_batch(states, g)
            _depolarize(states, g, noise, rng)
        p_minus = ancilla_minus_probability(states.reshape(shots, -1), circuit.width)
        outcomes = rng.random(shots) < p_minus
    if noise.p_ro > 0:
        outcomes ^= rng.random(shots) < noise.p_ro
    minus = int(outcomes.sum())
    return ContextStats(shots - minus, minus)


def run_experiment(
    config: IncidenceConfiguration,
    input_state=None,
    shots: int = 8192,
    noise: NoiseModel = NOISELESS,
    seed: int = 0,
    analysis=None,
):
    """Simulate every line context of ``config`` and aggregate into a report."""
    from .contextuality import analyze
    from .report import ExperimentReport

    if any(c.rank != 1 for c in config.contexts):
        raise ValueError("experiments measure line contexts only")
    if config.n_qubits > MAX_WIRES - 1:
        raise ValueError(f"at most {MAX_WIRES - 1} data qubits")
    stats = [
        run_context(context_circuit(c), input_state, shots, noise, seed, i) for i, c in enumerate(config.contexts)
    ]
    if analysis is None:
        analysis = analyze(config)
    return ExperimentReport.build(config, stats, analysis)
