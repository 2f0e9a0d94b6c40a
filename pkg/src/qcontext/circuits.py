"""
Sequential nondestructive measurement circuits and OpenQASM 2.0 I/O.

Each observable is measured onto one ancilla (the last wire): rotate every
non-identity qubit into the Z basis, CNOT it onto the ancilla, undo the
rotation, then close the block with a barrier. The ancilla ends up holding
the parity of all measured eigenvalues, i.e. the eigenvalue of the product
of the context's observables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .geometry import Context
from .pauli import PauliOperator, canonical_operator, to_label

GATE_KINDS = ("h", "s", "sdg", "cx", "barrier", "measure")

# pre-rotation, counter-rotation per letter
_ROTATIONS = {
    "I": None,
    "Z": ((), ()),
    "X": (("h",), ("h",)),
    "Y": (("sdg", "h"), ("h", "s")),
}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    def __repr__(self) -> str:
        return f"{self.kind}{self.qubits}"


@dataclass(frozen=True)
class ContextCircuit:
    n_qubits: int
    observables: tuple[PauliOperator, ...]
    gates: tuple[Gate, ...]

    @property
    def ancilla(self) -> int:
        return self.n_qubits

    @property
    def width(self) -> int:
        return self.n_qubits + 1

    def validate(self) -> None:
        w = self.width
        for g in self.gates:
            if g.kind == "barrier":
                if g.qubits != tuple(range(w)):
                    raise ValueError("barrier must span the full register")
                continue
            if any(not 0 <= q < w for q in g.qubits):
                raise ValueError(f"{g} addresses a qubit outside 0..{w - 1}")
            if g.kind == "cx" and (len(g.qubits) != 2 or g.qubits[1] != self.ancilla):
                raise ValueError(f"{g}: CNOTs must target the ancilla")
        measures = [i for i, g in enumerate(self.gates) if g.kind == "measure"]
        if measures != [len(self.gates) - 1] or self.gates[-1].qubits != (self.ancilla,):
            raise ValueError("exactly one ancilla measurement, at the end")

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)


def observable_block(o: PauliOperator) -> list[Gate]:
    """Gates measuring canonical ``o`` onto the ancilla at index ``o.n_qubits``."""
    if o.coefficient_exp() != 0:
        raise ValueError(f"{to_label(o)} is not a canonical (+1) operator")
    n = o.n_qubits
    anc = n
    gates: list[Gate] = []
    for j, letter in enumerate(o.letters()):
        rot = _ROTATIONS[letter]
        if rot is None:
            continue
        pre, post = rot
        gates += [Gate(k, (j,)) for k in pre]
        gates.append(Gate("cx", (j, anc)))
        gates += [Gate(k, (j,)) for k in post]
    gates.append(Gate("barrier", tuple(range(n + 1))))
    return gates


def circuit_for_observables(observables) -> ContextCircuit:
    obs = tuple(observables)
    n = obs[0].n_qubits
    gates: list[Gate] = []
    for o in obs:
        if o.n_qubits != n:
            raise ValueError("observables act on different qubit counts")
        gates += observable_block(o)
    gates.append(Gate("measure", (n,)))
    c = ContextCircuit(n, obs, tuple(gates))
    c.validate()
    return c


def context_circuit(context: Context, n_qubits: int | None = None, order=None) -> ContextCircuit:
    """Three concatenated observable blocks, then one ancilla measurement.

    ``order`` optionally permutes the measurement sequence (a sequence of
    labels or points of the context); default is label order, as in the
    context's name.
    """
    if context.rank != 1:
        raise ValueError("only line contexts (three observables) are measured")
    n = context.points[0].n_qubits
    if n_qubits is not None and n_qubits != n:
        raise ValueError(f"context acts on {n} qubits, not {n_qubits}")
    pts = list(context.measurement_order)
    if order is not None:
        by_label = {p.label: p for p in pts}
        chosen = [by_label[o] if isinstance(o, str) else o for o in order]
        if sorted(chosen) != sorted(pts):
            raise ValueError("order must be a permutation of the context's points")
        pts = chosen
    return circuit_for_observables(canonical_operator(p) for p in pts)


def emit_qasm(c: ContextCircuit) -> str:
    anc = c.ancilla
    out = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.width}];", "creg c[1];"]
    for g in c.gates:
        if g.kind == "barrier":
            out.append("barrier q;")
        elif g.kind == "cx":
            out.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind == "measure":
            out.append(f"measure q[{anc}] -> c[0];")
        else:
            out.append(f"{g.kind} q[{g.qubits[0]}];")
    return "\n".join(out) + "\n"


_HEADER = [re.compile(r"OPENQASM 2\.0;"), re.compile(r'include "qelib1\.inc";')]
_QREG = re.compile(r"qreg q\[(\d+)\];")
_CREG = re.compile(r"creg c\[1\];")
_ONE = re.compile(r"(h|s|sdg) q\[(\d+)\];")
_CX = re.compile(r"cx q\[(\d+)\],\s*q\[(\d+)\];")
_MEASURE = re.compile(r"measure q\[(\d+)\] -> c\[0\];")


def parse_qasm(text: str) -> tuple[int, list[Gate]]:
    """Read back the QASM subset written by :func:`emit_qasm` as (register width, gates)."""
    lines = [ln.split("//")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    for pat, ln in zip(_HEADER, lines):
        if not pat.fullmatch(ln):
            raise ValueError(f"bad header line {ln!r}")
    m = _QREG.fullmatch(lines[2]) if len(lines) > 2 else None
    if m is None or not _CREG.fullmatch(lines[3] if len(lines) > 3 else ""):
        raise ValueError("expected 'qreg q[n];' and 'creg c[1];'")
    width = int(m.group(1))
    gates = []
    for ln in lines[4:]:
        if ln == "barrier q;":
            gates.append(Gate("barrier", tuple(range(width))))
        elif m := _ONE.fullmatch(ln):
            gates.append(Gate(m.group(1), (int(m.group(2)),)))
        elif m := _CX.fullmatch(ln):
            gates.append(Gate("cx", (int(m.group(1)), int(m.group(2)))))
        elif m := _MEASURE.fullmatch(ln):
            gates.append(Gate("measure", (int(m.group(1)),)))
        else:
            raise ValueError(f"unsupported QASM statement {ln!r}")
    return width, gates


def circuit_from_qasm(text: str, observables=()) -> ContextCircuit:
    width, gates = parse_qasm(text)
    c = ContextCircuit(width - 1, tuple(observables), tuple(gates))
    c.validate()
    return c
