"""
Noncontextual hidden-variable (NCHV) analysis of signed configurations.

An assignment a: points -> {+1,-1} satisfies context C when the product of
its values on C equals sign(C). Writing a(p) = (-1)^{x_p}, the violated
contexts are the support of A x + t over F2, where A is the context/point
incidence matrix and t marks negative contexts. Maximising satisfied
contexts is therefore a minimum-weight coset problem.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .geometry import (
    Context,
    GeometryError,
    IncidenceConfiguration,
    QuadricDecomposition,
    decompose_quadric_lines,
)
from .pauli import SymplecticPoint, popcount

MAX_SWEEP_RANK = 30
_LOW_BITS = 20


class SearchCapExceeded(ValueError):
    pass


class CertificateError(RuntimeError):
    """The decomposition argument could not certify P <= S."""

    def __init__(self, msg: str, witness: dict | None = None, satisfied: int | None = None):
        super().__init__(msg)
        self.witness = witness
        self.satisfied = satisfied


@dataclass(frozen=True)
class MaxSatResult:
    P: int
    certainty: str  # "exact" or "lower-bound"
    method: str
    assignment: dict[SymplecticPoint, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NchvAnalysis:
    name: str
    M: int
    S: int
    P: int
    P_certainty: str
    P_method: str
    b_nchv: int
    b_qm: int
    epsilon: Fraction
    ks_contradiction: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "M": self.M,
            "S": self.S,
            "P": self.P,
            "P_certainty": self.P_certainty,
            "P_method": self.P_method,
            "b_nchv": self.b_nchv,
            "b_qm": self.b_qm,
            "epsilon": str(self.epsilon),
            "ks_contradiction": self.ks_contradiction,
        }


def _masks(config: IncidenceConfiguration) -> tuple[list[int], int]:
    """Per-context point bitmasks and the target bitmask (bit i set: context i negative)."""
    idx = config.point_index
    rows = []
    target = 0
    for i, c in enumerate(config.contexts):
        m = 0
        for p in c.points:
            m |= 1 << idx[p]
        rows.append(m)
        if c.sign == -1:
            target |= 1 << i
    return rows, target


def incidence_matrix(config: IncidenceConfiguration) -> tuple[np.ndarray, np.ndarray]:
    """(A, t) with A[i, j] = 1 iff point j lies on context i, t[i] = 1 iff context i is negative."""
    idx = config.point_index
    A = np.zeros((config.M, len(config.points)), dtype=np.uint8)
    t = np.zeros(config.M, dtype=np.uint8)
    for i, c in enumerate(config.contexts):
        for p in c.points:
            A[i, idx[p]] = 1
        t[i] = c.sign == -1
    return A, t


def ks_solvable(config: IncidenceConfiguration) -> bool:
    """Whether some +-1 assignment meets every sign constraint (F2 Gaussian elimination)."""
    rows, target = _masks(config)
    k = len(config.points)
    pivots: dict[int, int] = {}  # pivot bit -> augmented row
    for i, r in enumerate(rows):
        aug = r | (((target >> i) & 1) << k)
        for bit in range(k):
            if not (aug >> bit) & 1:
                continue
            if bit in pivots:
                aug ^= pivots[bit]
            else:
                pivots[bit] = aug
                break
        else:
            if aug:  # 0 = 1
                return False
    return True


def _as_bits(config: IncidenceConfiguration, assignment: Mapping[SymplecticPoint, int]) -> int:
    x = 0
    for j, p in enumerate(config.points):
        try:
            v = assignment[p]
        except KeyError:
            raise KeyError(f"assignment has no value for {p.label}") from None
        if v not in (1, -1):
            raise ValueError(f"assignment value for {p.label} must be +-1, got {v}")
        if v == -1:
            x |= 1 << j
    return x


def _from_bits(config: IncidenceConfiguration, x: int) -> dict[SymplecticPoint, int]:
    return {p: -1 if (x >> j) & 1 else 1 for j, p in enumerate(config.points)}


def satisfied_count(config: IncidenceConfiguration, assignment: Mapping[SymplecticPoint, int]) -> int:
    x = _as_bits(config, assignment)
    rows, target = _masks(config)
    return sum(1 for i, r in enumerate(rows) if (popcount(r & x) & 1) == (target >> i) & 1)


def _column_basis(config: IncidenceConfiguration) -> list[tuple[int, int]]:
    """Basis of the column space of A as (context-mask, point-combination) pairs."""
    rows, _ = _masks(config)
    cols = []
    for j in range(len(config.points)):
        v = 0
        for i, r in enumerate(rows):
            if (r >> j) & 1:
                v |= 1 << i
        cols.append((v, 1 << j))
    basis: dict[int, tuple[int, int]] = {}  # leading bit -> (vector, combination)
    for v, comb in cols:
        while v:
            lead = v.bit_length() - 1
            if lead not in basis:
                basis[lead] = (v, comb)
                break
            bv, bc = basis[lead]
            v ^= bv
            comb ^= bc
    return list(basis.values())


def sweep_rank(config: IncidenceConfiguration) -> int:
    return len(_column_basis(config))


def _to_words(v: int, nwords: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords)], dtype=np.uint64)


def min_violations(config: IncidenceConfiguration) -> tuple[int, int]:
    """Exact minimum number of violated contexts and a minimising point-combination.

    Sweeps every element of the coset t + col(A). Assignments that differ by a
    kernel vector of A (e.g. a linear functional on the points) violate the
    same contexts, so the sweep covers all 2^|points| assignments with
    2^rank(A) candidates. The sweep is a doubling table over the low basis
    vectors combined with a Gray-code walk over the high ones.
    """
    basis = _column_basis(config)
    r = len(basis)
    if r > MAX_SWEEP_RANK:
        raise SearchCapExceeded(f"rank {r} exceeds the exhaustive cap 2^{MAX_SWEEP_RANK}")
    _, target = _masks(config)
    nwords = max(1, (config.M + 63) // 64)
    lo, hi = basis[:_LOW_BITS], basis[_LOW_BITS:]

    table = np.zeros((1, nwords), dtype=np.uint64)
    for v, _ in lo:
        table = np.concatenate([table, table ^ _to_words(v, nwords)])

    best = config.M + 1
    best_comb = 0
    off_v, off_c = target, 0
    gray_prev = 0
    for g in range(1 << len(hi)):
        gray = g ^ (g >> 1)
        if g:
            k = (gray ^ gray_prev).bit_length() - 1
            off_v ^= hi[k][0]
            off_c ^= hi[k][1]
        gray_prev = gray
        w = np.bitwise_count(table ^ _to_words(off_v, nwords)).sum(axis=1, dtype=np.int64)
        i = int(np.argmin(w))
        if w[i] < best:
            best = int(w[i])
            comb = off_c
            for b, (_, c) in enumerate(lo):
                if (i >> b) & 1:
                    comb ^= c
            best_comb = comb
    return best, best_comb


def _local_search(config: IncidenceConfiguration, restarts: int, seed: int) -> tuple[int, np.ndarray]:
    A, t = incidence_matrix(config)
    A = A.astype(np.int64)
    t = t.astype(np.int64)
    k = A.shape[1]
    root = np.random.SeedSequence(seed)
    best_sat, best_x = -1, np.zeros(k, dtype=np.int64)
    for r, child in enumerate(root.spawn(restarts)):
        if r == 0:
            x = np.zeros(k, dtype=np.int64)
        else:
            x = np.random.Generator(np.random.Philox(child)).integers(0, 2, size=k)
        viol = (A @ x + t) % 2
        while True:
            # flipping j toggles every context through j
            sign_v = 1 - 2 * viol  # +1 satisfied, -1 violated
            gain = -(sign_v @ A)
            j = int(np.argmax(gain))  # first maximum: lowest index
            if gain[j] <= 0:
                break
            x[j] ^= 1
            viol = (viol + A[:, j]) % 2
        sat = int(len(t) - viol.sum())
        if sat > best_sat:
            best_sat, best_x = sat, x.copy()
    return best_sat, best_x


def max_satisfiable(
    config: IncidenceConfiguration, method: str = "exhaustive", restarts: int = 64, seed: int = 0
) -> MaxSatResult:
    """Largest number P of contexts one +-1 assignment can satisfy."""
    if method == "exhaustive":
        v, comb = min_violations(config)
        return MaxSatResult(config.M - v, "exact", "exhaustive", _from_bits(config, comb))
    if method == "heuristic":
        sat, x = _local_search(config, restarts, seed)
        xi = sum(1 << j for j in range(len(x)) if x[j])
        return MaxSatResult(sat, "lower-bound", "local-search", _from_bits(config, xi))
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class QuadricCertificate:
    decomposition: QuadricDecomposition
    grid_P: tuple[int, ...]
    doily_P: int
    P: int


def quadric_p_upper_bound(q: IncidenceConfiguration, u: SymplecticPoint | None = None) -> int:
    """Certify P <= S for a hyperbolic quadric of W(5,2); returns S on success.

    Checks the 15 + 90 line split and that each of the ten grids cut out of
    the embedded doily admits no full assignment (P = 5 of 6), then searches
    for an assignment beating S. Raises CertificateError with the witness if
    one exists.
    """
    return certify_quadric(q, u).P


def certify_quadric(q: IncidenceConfiguration, u: SymplecticPoint | None = None) -> QuadricCertificate:
    try:
        dec = decompose_quadric_lines(q, u)
    except GeometryError as e:
        raise CertificateError(f"decomposition failed: {e}") from e
    lines = q.lines()
    if len(dec.doily_lines) + sum(len(g) for g in dec.off_groups) != len(lines):
        raise CertificateError("line split does not cover the quadric")
    grid_P = []
    for k in range(10):
        g = dec.grid_configuration(k)
        res = max_satisfiable(g)
        if res.P != g.M - 1:
            raise CertificateError(f"grid {k} has P={res.P}, expected {g.M - 1}")
        grid_P.append(res.P)
    doily_P = max_satisfiable(dec.doily()).P

    lines_only = IncidenceConfiguration(q.name, q.n_qubits, q.points, tuple(lines), q.kind, dict(q.meta))
    v, comb = min_violations(lines_only)
    best = lines_only.M - v
    S = lines_only.S
    if best > S:
        raise CertificateError(
            f"an assignment satisfies {best} > S={S} lines of {q.name}; P <= S does not hold",
            witness=_from_bits(lines_only, comb),
            satisfied=best,
        )
    return QuadricCertificate(dec, tuple(grid_P), doily_P, S)


def bounds(config: IncidenceConfiguration, P: int) -> tuple[int, int, Fraction]:
    """(b_nchv, b_qm, tolerated error per correlation)."""
    M = config.M
    if not 0 <= P <= M:
        raise ValueError(f"P={P} outside [0, {M}]")
    b_nchv, b_qm = 2 * P - M, M
    return b_nchv, b_qm, Fraction(b_qm - b_nchv, M)


def analyze(config: IncidenceConfiguration, method: str = "auto", restarts: int = 64, seed: int = 0) -> NchvAnalysis:
    """Full NCHV summary for a configuration.

    ``auto`` runs the exhaustive sweep when the rank allows and local search
    otherwise, reported as a lower bound. P = S is never assumed: for the
    lines of W(5,2) local search already beats S.
    """
    if method == "auto":
        if sweep_rank(config) <= MAX_SWEEP_RANK:
            res = max_satisfiable(config, "exhaustive")
        else:
            res = max_satisfiable(config, "heuristic", restarts, seed)
    else:
        res = max_satisfiable(config, method, restarts, seed)
    b_nchv, b_qm, eps = bounds(config, res.P)
    return NchvAnalysis(
        config.name, config.M, config.S, res.P, res.certainty, res.method, b_nchv, b_qm, eps, res.P < config.M
    )


def chi(config: IncidenceConfiguration, means: Mapping[Context, float] | Sequence[float]) -> float:
    """Sum of means over positive contexts minus the sum over negative ones."""
    if isinstance(means, Mapping):
        try:
            vals = [means[c] for c in config.contexts]
        except KeyError as e:
            raise KeyError(f"no mean for context {e.args[0].name}") from None
    else:
        vals = list(means)
        if len(vals) != config.M:
            raise ValueError(f"expected {config.M} means, got {len(vals)}")
    total = 0.0
    for c, m in zip(config.contexts, vals):
        if not -1.0 <= m <= 1.0:
            raise ValueError(f"mean {m} for {c.name} outside [-1, 1]")
        total += c.sign * m
    return total
