import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcontext.circuits import Gate, circuit_for_observables, context_circuit
from qcontext.geometry import doily
from qcontext.pauli import SymplecticPoint, canonical_operator
from qcontext.simulator import (
    DEFAULT_NOISE,
    NOISELESS,
    ContextStats,
    NoiseModel,
    StateVector,
    ancilla_minus_probability,
    apply_gate,
    final_states,
    run_context,
    run_experiment,
)

from conftest import dense

LABELS_2 = [p.label for p in doily().points]


def random_states(n, k, seed):
    rng = np.random.default_rng(seed)
    return [StateVector.random(n, rng) for _ in range(k)]


def basis(bits: str) -> StateVector:
    amp = np.zeros(1 << len(bits), dtype=complex)
    amp[int(bits, 2)] = 1
    return StateVector(amp, len(bits))


def test_single_gate_identities():
    psi = random_states(2, 1, 0)[0]
    for a, b in (("h", "h"), ("s", "sdg"), ("sdg", "s")):
        out = apply_gate(apply_gate(psi, Gate(a, (1,))), Gate(b, (1,)))
        np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-12)


@pytest.mark.parametrize("src,dst", [("10", "11"), ("11", "10"), ("00", "00"), ("01", "01")])
def test_cnot_truth_table(src, dst):
    out = apply_gate(basis(src), Gate("cx", (0, 1)))
    np.testing.assert_allclose(out.amplitudes, basis(dst).amplitudes)


def test_cnot_reversed_direction():
    out = apply_gate(basis("001"), Gate("cx", (2, 0)))
    np.testing.assert_allclose(out.amplitudes, basis("101").amplitudes)


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector([1, 1])
    with pytest.raises(ValueError):
        StateVector.zero(5)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LABELS_2), st.integers(0, 2**32 - 1))
def test_single_observable_matches_projector(label, seed):
    op = canonical_operator(SymplecticPoint.from_label(label))
    c = circuit_for_observables([op])
    inputs = random_states(2, 4, seed)
    p = ancilla_minus_probability(final_states(c, inputs), c.width)
    want = [np.vdot(s.amplitudes, (np.eye(4) - dense(label)) / 2 @ s.amplitudes).real for s in inputs]
    assert np.max(np.abs(p - want)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_observable_blocks_preserve_norm(seed):
    c = context_circuit(doily().contexts[seed % 15])
    out = final_states(c, random_states(2, 3, seed))
    np.testing.assert_allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-12)


def test_context_outcome_is_state_independent(w32, w52):
    for config, n in ((w32, 2), (w52, 3)):
        inputs = random_states(n, 5, 7)
        for c in config.contexts:
            circ = context_circuit(c)
            p = ancilla_minus_probability(final_states(circ, inputs), circ.width)
            np.testing.assert_allclose(p, (1 - c.sign) / 2, atol=1e-9)


def test_final_data_state_matches_dense_projection(w32):
    # with the ancilla reading +1 the data register is projected onto the +1 eigenspace of O1 O2
    ops = [canonical_operator(SymplecticPoint.from_label(s)) for s in ("XX", "ZZ")]
    c = circuit_for_observables(ops)
    psi = random_states(2, 1, 11)[0]
    out = final_states(c, [psi])[0].reshape(4, 2)
    proj = (np.eye(4) + dense("XX") @ dense("ZZ")) / 2
    np.testing.assert_allclose(np.abs(out[:, 0]) ** 2, np.abs(proj @ psi.amplitudes) ** 2, atol=1e-12)


def test_stats_from_counts():
    s = ContextStats(7337, 855)
    assert round(s.mean, 4) == 0.7913
    assert round(s.std, 4) == 0.0034
    assert ContextStats(10, 0).std == 0.0


def test_noiseless_run_is_deterministic(w32):
    for i, c in enumerate(w32.contexts):
        st_ = run_context(context_circuit(c), "random", 256, NOISELESS, seed=4, context_index=i)
        assert st_.mean == c.sign


def test_noise_validation():
    with pytest.raises(ValueError):
        NoiseModel(p1=1.5)
    with pytest.raises(ValueError):
        NoiseModel(p_ro=-0.1)
    assert NOISELESS.is_ideal and not DEFAULT_NOISE.is_ideal
    assert (DEFAULT_NOISE.p1, DEFAULT_NOISE.p2, DEFAULT_NOISE.p_ro) == (0.002, 0.02, 0.02)


def test_readout_only_noise_shifts_mean():
    c = context_circuit(doily().contexts[0])
    st_ = run_context(c, "zero", 20000, NoiseModel(p_ro=0.1), seed=1)
    assert abs(abs(st_.mean) - 0.8) < 0.02


def test_seeded_runs_reproduce():
    c = context_circuit(doily().contexts[3])
    a = run_context(c, "random", 512, DEFAULT_NOISE, seed=9, context_index=3)
    b = run_context(c, "random", 512, DEFAULT_NOISE, seed=9, context_index=3)
    assert a == b


def test_chi_decreases_with_noise(w32):
    chis = [run_experiment(w32, "zero", 2048, NoiseModel.uniform(q), seed=0).chi for q in (0.0, 0.01, 0.05)]
    assert chis[0] == 15.0
    assert chis[0] > chis[1] > chis[2]


def test_run_experiment_rejects_planes(w52_planes):
    with pytest.raises(ValueError):
        run_experiment(w52_planes, shots=8)
