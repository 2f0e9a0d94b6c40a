import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcontext.circuits import (
    Gate,
    circuit_for_observables,
    circuit_from_qasm,
    context_circuit,
    emit_qasm,
    observable_block,
    parse_qasm,
)
from qcontext.geometry import Context
from qcontext.pauli import SymplecticPoint, canonical_operator, from_label

from conftest import DATA


def ctx(*labels):
    return Context.from_points(SymplecticPoint.from_label(s) for s in labels)


def test_identity_block_is_only_a_barrier():
    assert observable_block(from_label("III")) == [Gate("barrier", (0, 1, 2, 3))]


def test_xyz_block():
    got = [repr(g) for g in observable_block(from_label("XYZ"))]
    assert got == [
        "h(0,)", "cx(0, 3)", "h(0,)",
        "sdg(1,)", "h(1,)", "cx(1, 3)", "h(1,)", "s(1,)",
        "cx(2, 3)",
        "barrier(0, 1, 2, 3)",
    ]


def test_izy_block():
    kinds = [(g.kind, g.qubits) for g in observable_block(from_label("IZY"))]
    assert kinds == [("cx", (1, 3)), ("sdg", (2,)), ("h", (2,)), ("cx", (2, 3)),
                     ("h", (2,)), ("s", (2,)), ("barrier", (0, 1, 2, 3))]


def test_non_canonical_rejected():
    with pytest.raises(ValueError):
        observable_block(from_label("-XY"))


def test_gate_counts_z_context():
    c = context_circuit(ctx("IZ", "ZI", "ZZ"))
    assert (c.count("cx"), c.count("h"), c.count("s"), c.count("sdg")) == (4, 0, 0, 0)
    assert c.count("barrier") == 3 and c.count("measure") == 1
    assert c.width == 3


def test_gate_counts_negative_context():
    c = context_circuit(ctx("XX", "YY", "ZZ"))
    assert c.count("cx") == 6
    assert c.count("h") == 8
    assert (c.count("s"), c.count("sdg")) == (2, 2)


def test_default_order_is_label_order():
    c = context_circuit(ctx("ZZ", "XX", "YY"))
    assert [o.point().label for o in c.observables] == ["XX", "YY", "ZZ"]
    c2 = context_circuit(ctx("XX", "YY", "ZZ"), order=["ZZ", "XX", "YY"])
    assert [o.point().label for o in c2.observables] == ["ZZ", "XX", "YY"]
    with pytest.raises(ValueError):
        context_circuit(ctx("XX", "YY", "ZZ"), order=["ZZ", "XX", "XX"])


def test_golden_three_qubit_circuit():
    obs = [from_label(s) for s in ("XYZ", "XII", "IZY")]
    text = emit_qasm(circuit_for_observables(obs))
    assert text == (DATA / "golden_XYZ-XII-IZY.qasm").read_text()


def test_qasm_header_and_tail():
    lines = emit_qasm(context_circuit(ctx("IX", "XI", "XX"))).splitlines()
    assert lines[:4] == ["OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[3];", "creg c[1];"]
    assert lines[-1] == "measure q[2] -> c[0];"


@given(st.sampled_from(["IX", "XI", "XX", "IZ", "ZI", "ZZ", "XY", "YZ", "ZX", "XZ", "YX", "ZY", "IY", "YI", "YY"]))
def test_round_trip_single_observable(label):
    c = circuit_for_observables([canonical_operator(SymplecticPoint.from_label(label))])
    back = circuit_from_qasm(emit_qasm(c), c.observables)
    assert back == c


def test_round_trip_all_doily_contexts(w32, w52):
    for config in (w32, w52):
        for cx in config.contexts:
            c = context_circuit(cx)
            width, gates = parse_qasm(emit_qasm(c))
            assert width == c.width and tuple(gates) == c.gates


def test_planes_rejected(w52_planes):
    with pytest.raises(ValueError):
        context_circuit(w52_planes.contexts[0])


@pytest.mark.parametrize("text", [
    "OPENQASM 3.0;\n",
    'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\ncreg c[1];\nrz(0.1) q[0];\n',
    'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\ncreg c[1];\ncx q[0],q[1];\nmeasure q[2] -> c[0];\n',
    'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\ncreg c[1];\nh q[0];\n',
])
def test_malformed_qasm_rejected(text):
    with pytest.raises(ValueError):
        circuit_from_qasm(text)


def test_gate_kind_checked():
    with pytest.raises(ValueError):
        Gate("t", (0,))
