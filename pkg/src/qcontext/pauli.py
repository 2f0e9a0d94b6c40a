"""
N-qubit Pauli operators in Z-before-X normal form over GF(2).

An operator is stored as

    O = i^phase_exp * (Z^mu_1 X^nu_1) (x) ... (x) (Z^mu_N X^nu_N)

with ``mu`` and ``nu`` packed into integers. Qubit 1 (the leftmost letter of a
label) is the most significant bit, so ``mu = 0b011`` for ``N = 3`` means
qubits 2 and 3 carry a Z factor.

Since ZX = iY as matrices, the literal letter Y equals i^3 Z X. A canonical
operator (literal tensor product of I, X, Y, Z letters with sign +1) therefore
has ``phase_exp = -#Y mod 4``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 16

_LABEL_RE = re.compile(r"^([+-]?)(i?)([IXYZ]+)$")
_LETTER_BITS = {"I": (0, 0), "X": (0, 1), "Y": (1, 1), "Z": (1, 0)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}
_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


def popcount(x: int) -> int:
    return bin(x).count("1")


def _check_n(n_qubits: int) -> None:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")


@dataclass(frozen=True, order=True)
class SymplecticPoint:
    """Nonzero vector of F2^{2N}, layout [mu_1..mu_N, nu_1..nu_N].

    ``coords`` is the integer ``(mu << N) | nu``; points sort by it.
    """

    n_qubits: int
    coords: int

    def __post_init__(self):
        _check_n(self.n_qubits)
        if not 0 < self.coords < 1 << (2 * self.n_qubits):
            raise ValueError(f"coords {self.coords} is not a nonzero {2 * self.n_qubits}-bit vector")

    @classmethod
    def from_bits(cls, n_qubits: int, mu: int, nu: int) -> SymplecticPoint:
        return cls(n_qubits, (mu << n_qubits) | nu)

    @classmethod
    def from_label(cls, label: str) -> SymplecticPoint:
        return from_label(label).point()

    @property
    def mu(self) -> int:
        return self.coords >> self.n_qubits

    @property
    def nu(self) -> int:
        return self.coords & ((1 << self.n_qubits) - 1)

    def __add__(self, other: SymplecticPoint) -> SymplecticPoint:
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit-count mismatch")
        return SymplecticPoint(self.n_qubits, self.coords ^ other.coords)

    def vector(self) -> np.ndarray:
        """The 2N coordinates as a 0/1 numpy array."""
        n2 = 2 * self.n_qubits
        return np.array([(self.coords >> (n2 - 1 - k)) & 1 for k in range(n2)], dtype=np.uint8)

    @property
    def label(self) -> str:
        return to_label(canonical_operator(self))

    def __repr__(self) -> str:
        return f"SymplecticPoint({self.label})"


@dataclass(frozen=True)
class PauliOperator:
    n_qubits: int
    phase_exp: int
    mu: int
    nu: int

    def __post_init__(self):
        _check_n(self.n_qubits)
        if not 0 <= self.phase_exp <= 3:
            raise ValueError(f"phase_exp must be in 0..3, got {self.phase_exp}")
        full = 1 << self.n_qubits
        if not (0 <= self.mu < full and 0 <= self.nu < full):
            raise ValueError("mu/nu wider than n_qubits")

    @classmethod
    def identity(cls, n_qubits: int) -> PauliOperator:
        return cls(n_qubits, 0, 0, 0)

    def __matmul__(self, other: PauliOperator) -> PauliOperator:
        return compose(self, other)

    def is_identity(self) -> bool:
        return self.mu == 0 and self.nu == 0 and self.phase_exp == 0

    def point(self) -> SymplecticPoint:
        """Projective point of the operator class; raises for scalars."""
        return SymplecticPoint.from_bits(self.n_qubits, self.mu, self.nu)

    def scalar(self) -> complex:
        """Coefficient relative to the literal letter string (+1, i, -1, -i)."""
        return 1j ** self.coefficient_exp()

    def coefficient_exp(self) -> int:
        return (self.phase_exp + popcount(self.mu & self.nu)) % 4

    def letters(self) -> str:
        n = self.n_qubits
        out = []
        for j in range(n):
            shift = n - 1 - j
            out.append(_BITS_LETTER[((self.mu >> shift) & 1, (self.nu >> shift) & 1)])
        return "".join(out)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix; meant for checks on small N only."""
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        m = np.array([[1]], dtype=complex)
        n = self.n_qubits
        for j in range(n):
            shift = n - 1 - j
            f = np.eye(2, dtype=complex)
            if (self.mu >> shift) & 1:
                f = f @ z
            if (self.nu >> shift) & 1:
                f = f @ x
            m = np.kron(m, f)
        return (1j ** self.phase_exp) * m

    def __str__(self) -> str:
        return to_label(self)


def compose(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Matrix product ``a @ b`` in normal form.

    Moving X^nu past Z^mu' on each qubit contributes (-1)^{nu.mu'}; that is the
    only phase source besides the input phases.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")
    phase = (a.phase_exp + b.phase_exp + 2 * popcount(a.nu & b.mu)) % 4
    return PauliOperator(a.n_qubits, phase, a.mu ^ b.mu, a.nu ^ b.nu)


def symplectic_product(p: SymplecticPoint | PauliOperator, q: SymplecticPoint | PauliOperator) -> int:
    """<p, q> over F2; 0 iff the operator classes commute."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"dimension mismatch: {p.n_qubits} vs {q.n_qubits}")
    return popcount((p.mu & q.nu) ^ (p.nu & q.mu)) & 1


def commutes(p, q) -> bool:
    return symplectic_product(p, q) == 0


def canonical_operator(p: SymplecticPoint) -> PauliOperator:
    """Representative with real coefficient +1 on the literal letters."""
    return PauliOperator(p.n_qubits, (-popcount(p.mu & p.nu)) % 4, p.mu, p.nu)


def from_label(label: str) -> PauliOperator:
    """Parse ``[+-]?i?[IXYZ]+``; qubit 1 is the leftmost letter."""
    if not label:
        raise ValueError("empty label")
    m = _LABEL_RE.match(label.strip())
    if m is None:
        raise ValueError(f"invalid Pauli label {label!r}")
    sign, imag, letters = m.groups()
    n = len(letters)
    mu = nu = 0
    for ch in letters:
        bm, bn = _LETTER_BITS[ch]
        mu = (mu << 1) | bm
        nu = (nu << 1) | bn
    coeff = (2 if sign == "-" else 0) + (1 if imag else 0)
    return PauliOperator(n, (coeff - popcount(mu & nu)) % 4, mu, nu)


def to_label(o: PauliOperator) -> str:
    return _PREFIX[o.coefficient_exp()] + o.letters()


def all_points(n_qubits: int) -> list[SymplecticPoint]:
    return [SymplecticPoint(n_qubits, c) for c in range(1, 1 << (2 * n_qubits))]
