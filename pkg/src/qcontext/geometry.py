"""
Symplectic polar spaces W(2N-1, 2) and their subgeometries.

Points are nonzero vectors of F2^{2N} (one per phaseless N-qubit Pauli
observable); contexts are totally isotropic lines (3 points) or planes
(7 points), each signed by the product of the canonical operators on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .pauli import (
    PauliOperator,
    SymplecticPoint,
    all_points,
    canonical_operator,
    compose,
    popcount,
    symplectic_product,
    to_label,
)

MAX_ENUM_QUBITS = 3


class GeometryError(RuntimeError):
    """An expected incidence structure was not found."""


@dataclass(frozen=True)
class Context:
    points: tuple[SymplecticPoint, ...]
    sign: int
    rank: int

    def __post_init__(self):
        if len(self.points) != (3 if self.rank == 1 else 7):
            raise ValueError(f"rank-{self.rank} context needs {3 if self.rank == 1 else 7} points")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def from_points(cls, points) -> Context:
        pts = tuple(sorted(points))
        rank = {3: 1, 7: 2}.get(len(pts))
        if rank is None:
            raise ValueError(f"a context has 3 or 7 points, got {len(pts)}")
        return cls(pts, context_sign(pts), rank)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.measurement_order)

    @property
    def measurement_order(self) -> tuple[SymplecticPoint, ...]:
        """Points sorted by label; the default sequence for circuits and names."""
        return tuple(sorted(self.points, key=lambda p: p.label))

    @property
    def name(self) -> str:
        return "-".join(p.label for p in self.measurement_order)

    @property
    def coords(self) -> frozenset[int]:
        return frozenset(p.coords for p in self.points)

    def __contains__(self, p: SymplecticPoint) -> bool:
        return p in self.points


@dataclass(frozen=True)
class IncidenceConfiguration:
    name: str
    n_qubits: int
    points: tuple[SymplecticPoint, ...]
    contexts: tuple[Context, ...]
    # "polar" marks the complete set of rank-1 or rank-2 contexts of W(2N-1,2)
    kind: str = "sub"
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        pts = set(self.points)
        for c in self.contexts:
            if not pts.issuperset(c.points):
                raise ValueError(f"context {c.name} leaves the point set of {self.name}")

    @property
    def M(self) -> int:
        return len(self.contexts)

    @property
    def S(self) -> int:
        return sum(1 for c in self.contexts if c.sign == 1)

    @cached_property
    def point_index(self) -> dict[SymplecticPoint, int]:
        return {p: i for i, p in enumerate(self.points)}

    def lines(self) -> list[Context]:
        return [c for c in self.contexts if c.rank == 1]

    def planes(self) -> list[Context]:
        return [c for c in self.contexts if c.rank == 2]

    def restrict(self, points, name: str, **meta) -> IncidenceConfiguration:
        """Sub-configuration on ``points`` keeping every context fully inside."""
        keep = set(points)
        ctx = tuple(c for c in self.contexts if keep.issuperset(c.points))
        return IncidenceConfiguration(name, self.n_qubits, tuple(sorted(keep)), ctx, "sub", dict(meta))


def context_sign(points) -> int:
    """Scalar (+1/-1) of the product of the canonical operators on a context."""
    pts = list(points)
    if len(pts) not in (3, 7):
        raise ValueError("not a line or plane")
    n = pts[0].n_qubits
    coords = {p.coords for p in pts}
    if len(coords) != len(pts):
        raise ValueError("repeated point")
    for a, b in combinations(pts, 2):
        if symplectic_product(a, b):
            raise ValueError(f"{a.label} and {b.label} anticommute")
        if (a.coords ^ b.coords) not in coords:
            raise ValueError("points are not closed under addition")
    prod = PauliOperator.identity(n)
    for p in pts:
        prod = compose(prod, canonical_operator(p))
    if prod.mu or prod.nu or prod.phase_exp % 2:
        raise GeometryError(f"context product is not +-I: {to_label(prod)}")
    return 1 if prod.phase_exp == 0 else -1


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_ENUM_QUBITS:
        raise ValueError(f"full enumeration supports N in 1..{MAX_ENUM_QUBITS}, got {n}")


def enumerate_lines(n: int, coords=None) -> list[Context]:
    """All totally isotropic lines of W(2n-1,2), optionally inside a point set."""
    allowed = set(range(1, 1 << (2 * n))) if coords is None else set(coords)
    pts = {c: SymplecticPoint(n, c) for c in allowed}
    out = []
    for a in sorted(allowed):
        for b in sorted(allowed):
            c = a ^ b
            if b <= a or c <= b or c not in allowed:
                continue
            if symplectic_product(pts[a], pts[b]):
                continue
            out.append(Context.from_points((pts[a], pts[b], pts[c])))
    out.sort(key=lambda ctx: ctx.name)
    return out


def enumerate_planes(n: int, coords=None) -> list[Context]:
    """All totally isotropic planes (Fano planes) of W(2n-1,2)."""
    allowed = set(range(1, 1 << (2 * n))) if coords is None else set(coords)
    seen: set[frozenset[int]] = set()
    out = []
    for line in enumerate_lines(n, allowed):
        a, b, _ = (p.coords for p in line.points)
        for c in sorted(allowed):
            if c in line.coords:
                continue
            pc = SymplecticPoint(n, c)
            if symplectic_product(pc, line.points[0]) or symplectic_product(pc, line.points[1]):
                continue
            span = frozenset({a, b, a ^ b, c, a ^ c, b ^ c, a ^ b ^ c})
            if span in seen or not span <= allowed:
                continue
            seen.add(span)
            out.append(Context.from_points(SymplecticPoint(n, x) for x in span))
    out.sort(key=lambda ctx: ctx.name)
    return out


def build_polar_space(n: int, context_rank: int = 1) -> IncidenceConfiguration:
    _check_n(n)
    if context_rank == 1:
        ctx = enumerate_lines(n)
    elif context_rank == 2:
        ctx = enumerate_planes(n)
    else:
        raise ValueError("context_rank must be 1 (lines) or 2 (planes)")
    name = f"W({2 * n - 1},2)" + ("" if context_rank == 1 else "-planes")
    return IncidenceConfiguration(name, n, tuple(all_points(n)), tuple(ctx), "polar")


def doily() -> IncidenceConfiguration:
    return build_polar_space(2, 1)


def quadratic_form(x: SymplecticPoint) -> int:
    """Q0(x) = sum_i mu_i nu_i: parity of the number of Y letters."""
    return popcount(x.mu & x.nu) & 1


def quadric_points(n: int, p: SymplecticPoint | None = None) -> list[SymplecticPoint]:
    """Zero locus of Q0(x) + <p, x>; ``p=None`` selects Q0 itself."""
    _check_n(n)
    if p is not None:
        if p.n_qubits != n:
            raise ValueError("point has the wrong qubit count")
        if quadratic_form(p):
            raise ValueError(f"Q0({p.label}) = 1: elliptic quadric, not supported")
    out = []
    for x in all_points(n):
        val = quadratic_form(x)
        if p is not None:
            val ^= symplectic_product(p, x)
        if val == 0:
            out.append(x)
    return out


def quadric(n: int, p: SymplecticPoint | None = None, with_planes: bool = False) -> IncidenceConfiguration:
    """Hyperbolic quadric Q_p^+(2n-1,2) with every ambient context inside it."""
    pts = quadric_points(n, p)
    coords = {x.coords for x in pts}
    ctx = enumerate_lines(n, coords)
    if with_planes and n >= 3:
        ctx += enumerate_planes(n, coords)
    tag = "0" if p is None else p.label
    return IncidenceConfiguration(f"Q{tag}+({2 * n - 1},2)", n, tuple(pts), tuple(ctx), "sub", {"p": tag})


def hyperbolic_quadric_parameters(n: int) -> list[SymplecticPoint | None]:
    """``None`` (Q0) followed by every nonzero p with Q0(p) = 0."""
    return [None] + [x for x in all_points(n) if quadratic_form(x) == 0]


def plane_rulings(planes) -> tuple[list[Context], list[Context]]:
    """Split the planes of a hyperbolic quadric of W(5,2) into its two rulings.

    Distinct planes of one ruling meet in exactly one point; planes of
    opposite rulings meet in a line or not at all.
    """
    planes = list(planes)
    if not planes:
        return [], []
    first = planes[0]
    same = [first] + [pl for pl in planes[1:] if len(first.coords & pl.coords) == 1]
    other = [pl for pl in planes if pl not in same]
    for fam in (same, other):
        for a, b in combinations(fam, 2):
            if len(a.coords & b.coords) != 1:
                raise GeometryError("planes do not split into two rulings")
    for a in same:
        for b in other:
            if len(a.coords & b.coords) not in (0, 3):
                raise GeometryError("planes of opposite rulings must meet in a line or not at all")
    return same, other


def doily_grids() -> list[IncidenceConfiguration]:
    """The ten Mermin-Peres grids of W(3,2) as hyperbolic quadrics."""
    return [quadric(2, p) for p in hyperbolic_quadric_parameters(2)]


def geometric_hyperplane_check(sub, ambient: IncidenceConfiguration) -> bool:
    """True iff every ambient context lies in ``sub`` or meets it in a hyperplane of itself.

    For lines that means 3 points or exactly 1; for planes 7 or exactly 3.
    """
    s = set(sub)
    if not s <= set(ambient.points):
        raise ValueError("subset is not contained in the ambient point set")
    for c in ambient.contexts:
        k = sum(1 for p in c.points if p in s)
        full = len(c.points)
        if k != full and k != (1 if c.rank == 1 else 3):
            return False
    return True


def is_triangle_free(config: IncidenceConfiguration) -> bool:
    """No three points pairwise collinear unless all on one line."""
    collinear: dict[SymplecticPoint, set[SymplecticPoint]] = {p: set() for p in config.points}
    on_line = set()
    for c in config.lines():
        on_line.add(c.coords)
        for a, b in combinations(c.points, 2):
            collinear[a].add(b)
            collinear[b].add(a)
    for a in config.points:
        for b, c in combinations(sorted(collinear[a]), 2):
            if c in collinear[b] and frozenset({a.coords, b.coords, c.coords}) not in on_line:
                return False
    return True


def transvection(v: SymplecticPoint):
    """Symplectic map x -> x + <v, x> v."""

    def apply(x: SymplecticPoint) -> SymplecticPoint:
        return x + v if symplectic_product(v, x) else x

    return apply


def relabel(config: IncidenceConfiguration, f, name: str | None = None) -> IncidenceConfiguration:
    """Image of ``config`` under a point map; signs recomputed from canonical labels."""
    pts = tuple(sorted({f(p) for p in config.points}))
    ctx = tuple(Context.from_points(f(p) for p in c.points) for c in config.contexts)
    return IncidenceConfiguration(name or config.name, config.n_qubits, pts, ctx, config.kind, dict(config.meta))


@dataclass(frozen=True)
class QuadricDecomposition:
    """Doily + ten point pairs inside a hyperbolic quadric of W(5,2).

    ``u`` is the non-singular point whose perp cuts the doily out of the quadric.
    ``grids[k]`` is the set of doily points collinear with ``pairs[k]``.
    """

    quadric: IncidenceConfiguration
    u: SymplecticPoint
    doily_points: tuple[SymplecticPoint, ...]
    doily_lines: tuple[Context, ...]
    pairs: tuple[tuple[SymplecticPoint, SymplecticPoint], ...]
    off_groups: tuple[tuple[Context, ...], ...]
    grids: tuple[frozenset[SymplecticPoint], ...]

    def doily(self) -> IncidenceConfiguration:
        return IncidenceConfiguration(
            f"doily<{self.quadric.name}>", self.quadric.n_qubits, self.doily_points, self.doily_lines
        )

    def grid_configuration(self, k: int) -> IncidenceConfiguration:
        return self.doily().restrict(self.grids[k], f"grid{k}<{self.quadric.name}>")


def _quadric_form(q: IncidenceConfiguration):
    tag = q.meta.get("p", "0")
    p = None if tag == "0" else SymplecticPoint.from_label(tag)

    def form(x: SymplecticPoint) -> int:
        return quadratic_form(x) ^ (symplectic_product(p, x) if p is not None else 0)

    return form


def decompose_quadric_lines(q: IncidenceConfiguration, u: SymplecticPoint | None = None) -> QuadricDecomposition:
    """Split the 35 points into 15 + 10 pairs and the 105 lines into 15 + 10 x 9.

    The doily is the section of the quadric by u^perp for a point ``u`` off the
    quadric (default: the smallest such point). Off-doily points pair up as
    {x, x + u}. Every pair of pairs is joined by two lines through a common
    doily point; the pair with the lower index takes the line through its
    lower point, the other pair takes the second line. Each pair then owns
    one line per point of its grid.
    """
    n = q.n_qubits
    if n != 3 or len(q.points) != 35:
        raise GeometryError(f"{q.name} is not a hyperbolic quadric of W(5,2)")
    form = _quadric_form(q)
    if any(form(x) for x in q.points):
        raise GeometryError("configuration points are not on the quadric")
    on_q = set(q.points)
    if u is None:
        u = next(x for x in all_points(n) if x not in on_q)
    elif u in on_q:
        raise GeometryError("u must lie off the quadric")

    doily_pts = tuple(x for x in q.points if symplectic_product(u, x) == 0)
    off = [x for x in q.points if symplectic_product(u, x) == 1]
    if len(doily_pts) != 15 or len(off) != 20:
        raise GeometryError(f"point split {len(doily_pts)}+{len(off)}, expected 15+20")
    dset = set(doily_pts)
    doily_lines = tuple(c for c in q.lines() if dset.issuperset(c.points))
    if len(doily_lines) != 15:
        raise GeometryError(f"{len(doily_lines)} doily lines, expected 15")

    pairs = []
    seen = set()
    for x in off:
        if x in seen:
            continue
        y = x + u
        if y not in on_q or y in dset:
            raise GeometryError(f"{x.label} + u leaves the off-doily points")
        seen.update((x, y))
        pairs.append((x, y))
    if len(pairs) != 10:
        raise GeometryError("off-doily points do not form 10 pairs")
    pair_of = {x: k for k, pr in enumerate(pairs) for x in pr}

    grids = []
    for x, y in pairs:
        gx = frozenset(d for d in doily_pts if symplectic_product(x, d) == 0)
        gy = frozenset(d for d in doily_pts if symplectic_product(y, d) == 0)
        if gx != gy or len(gx) != 9:
            raise GeometryError("pair does not determine a single 9-point grid")
        grids.append(gx)

    off_lines = [c for c in q.lines() if not dset.issuperset(c.points)]
    if len(off_lines) != 90:
        raise GeometryError(f"{len(off_lines)} off-doily lines, expected 90")
    # lines joining pairs (a, b), keyed by the shared doily point
    joins: dict[tuple[int, int], list[Context]] = {}
    for c in off_lines:
        offs = [x for x in c.points if x not in dset]
        ds = [x for x in c.points if x in dset]
        if len(offs) != 2 or len(ds) != 1:
            raise GeometryError(f"off-doily line {c.name} does not meet the doily in one point")
        a, b = sorted(pair_of[x] for x in offs)
        if a == b:
            raise GeometryError("a line joins the two points of one pair")
        joins.setdefault((a, b), []).append(c)
    if len(joins) != 45:
        raise GeometryError("pairs are not joined pairwise")

    groups: list[list[Context]] = [[] for _ in pairs]
    for (a, b), cs in sorted(joins.items()):
        if len(cs) != 2:
            raise GeometryError("two pairs must be joined by exactly two lines")
        lo = pairs[a][0]
        first = next((c for c in cs if lo in c.points), None)
        if first is None:
            raise GeometryError("joining lines miss the lower point of their pair")
        second = cs[1] if first is cs[0] else cs[0]
        groups[a].append(first)
        groups[b].append(second)

    for k, g in enumerate(groups):
        hit = {x for c in g for x in c.points if x in dset}
        if len(g) != 9 or hit != grids[k]:
            raise GeometryError(f"group {k} does not meet the doily in its grid")
    doily_conf = IncidenceConfiguration("doily", n, doily_pts, doily_lines)
    for gset in grids:
        if not geometric_hyperplane_check(gset, doily_conf):
            raise GeometryError("grid is not a geometric hyperplane of the doily")
        if len(doily_conf.restrict(gset, "grid").contexts) != 6:
            raise GeometryError("grid does not carry 6 lines")
    if len(set(grids)) != 10:
        raise GeometryError("pairs do not yield 10 distinct grids")

    return QuadricDecomposition(
        q, u, doily_pts, doily_lines, tuple(pairs), tuple(tuple(g) for g in groups), tuple(grids)
    )
