"""Hypergraph and balanced products of group-symmetric bipartite graphs.

The balanced product quotients the Cartesian (hypergraph) product of two
graphs by the diagonal action of a common group that acts freely on both.
Every quotient vertex carries a canonical ``(h, r, s)`` label, and the two
boundary maps of the induced 3-term GF(2) chain complex are materialized as
bit matrices, with ``d1 @ d2 == 0`` asserted at construction time.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

from .errors import (
    InvalidParameterError,
    InvalidWedgeError,
    MultiplicityViolationError,
    SizeLimitError,
)
from .f2 import BitMatrix
from .graphs import (
    BipartiteGraph,
    ExpansionCertificate,
    Regularity,
    cayley_right,
    check_invariance,
    check_regularity,
)
from .groups import (
    FiniteGroup,
    GroupAction,
    OrbitLabeling,
    left_regular_action,
    orbit_labeling,
)

MAX_PRODUCT_VERTICES = 1 << 20

SubgraphName = Literal["*0", "*1", "0*", "1*"]


@dataclass(frozen=True)
class GraphAction:
    """A group action on a bipartite graph: one action per side."""

    on_v0: GroupAction
    on_v1: GroupAction

    @property
    def group(self) -> FiniteGroup:
        return self.on_v0.group


def regular_graph_action(g: FiniteGroup) -> GraphAction:
    """The left regular action on both sides of a Cayley graph on ``G``."""
    a = left_regular_action(g)
    return GraphAction(a, a)


@dataclass(frozen=True)
class HypergraphProduct:
    """The Cartesian product of two bipartite graphs, with faces."""

    x: BipartiteGraph
    y: BipartiteGraph
    v00: int
    v10: int
    v01: int
    v11: int
    e_s0: frozenset[tuple[int, int]]  # V00 - V10
    e_s1: frozenset[tuple[int, int]]  # V01 - V11
    e_0s: frozenset[tuple[int, int]]  # V00 - V01
    e_1s: frozenset[tuple[int, int]]  # V10 - V11
    faces: tuple[tuple[int, int, int, int], ...]

    def idx(self, alpha: int, x: int, y: int) -> int:
        ny = self.y.v0_size if alpha in (0, 2) else self.y.v1_size
        return x * ny + y


def hypergraph_product(x: BipartiteGraph, y: BipartiteGraph) -> HypergraphProduct:
    """All four corner vertex sets, four edge sets and the face set.

    Corner ``(alpha, beta)`` vertices are pairs ``(x_alpha, y_beta)`` indexed
    as ``x * |V_{Y,beta}| + y``.
    """
    sizes = (
        x.v0_size * y.v0_size,
        x.v1_size * y.v0_size,
        x.v0_size * y.v1_size,
        x.v1_size * y.v1_size,
    )
    if max(sizes) > MAX_PRODUCT_VERTICES:
        raise SizeLimitError(f"product corner of size {max(sizes)} exceeds cap")
    ny0, ny1 = y.v0_size, y.v1_size

    e_s0 = frozenset(
        (x0 * ny0 + y0, x1 * ny0 + y0) for (x0, x1) in x.edges for y0 in range(ny0)
    )
    e_s1 = frozenset(
        (x0 * ny1 + y1, x1 * ny1 + y1) for (x0, x1) in x.edges for y1 in range(ny1)
    )
    e_0s = frozenset(
        (x0 * ny0 + y0, x0 * ny1 + y1) for x0 in range(x.v0_size) for (y0, y1) in y.edges
    )
    e_1s = frozenset(
        (x1 * ny0 + y0, x1 * ny1 + y1) for x1 in range(x.v1_size) for (y0, y1) in y.edges
    )
    faces = tuple(
        sorted(
            (x0 * ny0 + y0, x1 * ny0 + y0, x0 * ny1 + y1, x1 * ny1 + y1)
            for (x0, x1) in x.edges
            for (y0, y1) in y.edges
        )
    )
    return HypergraphProduct(x, y, *sizes, e_s0, e_s1, e_0s, e_1s, faces)


@dataclass(frozen=True)
class BalancedProductComplex:
    """The quotient product with labels, edge sets, faces and boundary maps.

    Corner ``(alpha, beta)`` vertices carry labels ``(h, i_r, i_s)`` where
    ``i_r`` indexes the orbit representatives of the first factor's side
    ``alpha`` and ``i_s`` those of the second factor's side ``beta``; the
    index order is lexicographic in ``(i_r, i_s, h)``.
    """

    group: FiniteGroup
    x: BipartiteGraph
    y: BipartiteGraph
    ax: GraphAction
    ay: GraphAction
    labelings: tuple[OrbitLabeling, OrbitLabeling, OrbitLabeling, OrbitLabeling]
    sizes: tuple[int, int, int, int]  # |V00|, |V10|, |V01|, |V11|
    e_s0: frozenset[tuple[int, int]]
    e_s1: frozenset[tuple[int, int]]
    e_0s: frozenset[tuple[int, int]]
    e_1s: frozenset[tuple[int, int]]
    faces: tuple[tuple[int, int, int, int], ...]
    reg_x: Regularity
    reg_y: Regularity
    d2: BitMatrix
    d1: BitMatrix
    wedge_to_face: dict

    # --- degree shorthands (down/up from the first factor, right/left second)
    @property
    def w_down(self) -> int:
        return self.reg_x.w0

    @property
    def w_up(self) -> int:
        return self.reg_x.w1

    @property
    def w_right(self) -> int:
        return self.reg_y.w0

    @property
    def w_left(self) -> int:
        return self.reg_y.w1

    @property
    def n00(self) -> int:
        return self.sizes[0]

    @property
    def n10(self) -> int:
        return self.sizes[1]

    @property
    def n01(self) -> int:
        return self.sizes[2]

    @property
    def n11(self) -> int:
        return self.sizes[3]

    def label(self, corner: int, index: int) -> tuple[int, int, int]:
        """``(h, i_r, i_s)`` of a vertex; corner is 0:00, 1:10, 2:01, 3:11."""
        ns = self._s_orbits(corner)
        g_order = self.group.order
        h = index % g_order
        rest = index // g_order
        return (h, rest // ns, rest % ns)

    def vertex_index(self, corner: int, h: int, i_r: int, i_s: int) -> int:
        return (i_r * self._s_orbits(corner) + i_s) * self.group.order + h

    def _s_orbits(self, corner: int) -> int:
        # corners 0, 1 pair with the Y side 0; corners 2, 3 with the Y side 1
        y_lab = self._y_labeling(corner)
        return y_lab.num_orbits

    def _x_labeling(self, corner: int) -> OrbitLabeling:
        return self.labelings[0] if corner in (0, 2) else self.labelings[1]

    def _y_labeling(self, corner: int) -> OrbitLabeling:
        return self.labelings[2] if corner in (0, 1) else self.labelings[3]

    def complete_square(self, x00: int, x10: int, x01: int) -> int:
        """The unique ``x11`` making ``(x00, x10, x01, x11)`` a face."""
        key = (x00, x10, x01)
        if key not in self.wedge_to_face:
            raise InvalidWedgeError(
                f"({x00}, {x10}, {x01}) is not a wedge of this complex"
            )
        return self.wedge_to_face[key]


def balanced_product(
    x: BipartiteGraph,
    y: BipartiteGraph,
    ax: GraphAction,
    ay: GraphAction,
) -> BalancedProductComplex:
    """Quotient the hypergraph product of two G-graphs by the diagonal action.

    Both actions must be free and leave their graph invariant.  Any doubled
    incidence created by the quotient is rejected (it would cancel in GF(2)).
    """
    g = ax.group
    if ay.group.order != g.order or ay.group.table != g.table:
        raise InvalidParameterError("the two factors must share one group")
    if not check_invariance(x, ax.on_v0, ax.on_v1):
        raise InvalidParameterError("first factor is not invariant under its action")
    if not check_invariance(y, ay.on_v0, ay.on_v1):
        raise InvalidParameterError("second factor is not invariant under its action")

    # orbit labelings; freeness is enforced here (raises with a witness)
    lab_x0 = orbit_labeling(ax.on_v0)
    lab_x1 = orbit_labeling(ax.on_v1)
    lab_y0 = orbit_labeling(ay.on_v0)
    lab_y1 = orbit_labeling(ay.on_v1)
    labelings = (lab_x0, lab_x1, lab_y0, lab_y1)

    n_r = (lab_x0.num_orbits, lab_x1.num_orbits)
    n_s = (lab_y0.num_orbits, lab_y1.num_orbits)
    sizes = (
        n_r[0] * n_s[0] * g.order,
        n_r[1] * n_s[0] * g.order,
        n_r[0] * n_s[1] * g.order,
        n_r[1] * n_s[1] * g.order,
    )
    if max(sizes) > MAX_PRODUCT_VERTICES:
        raise SizeLimitError(f"quotient corner of size {max(sizes)} exceeds cap")

    def quotient_index(corner: int, x_vertex: int, y_vertex: int) -> int:
        x_lab = labelings[0] if corner in (0, 2) else labelings[1]
        y_lab = labelings[2] if corner in (0, 1) else labelings[3]
        gx, i_r = x_lab.label[x_vertex]
        gy, i_s = y_lab.label[y_vertex]
        h = g.mul(g.inv(gx), gy)
        ns = n_s[0] if corner in (0, 1) else n_s[1]
        return (i_r * ns + i_s) * g.order + h

    def quotient_edges(
        pairs: Iterable[tuple[tuple[int, int], tuple[int, int]]],
        corner_a: int,
        corner_b: int,
        expected: int,
        what: str,
    ) -> frozenset[tuple[int, int]]:
        counts: Counter = Counter()
        for (xa, ya), (xb, yb) in pairs:
            counts[
                (quotient_index(corner_a, xa, ya), quotient_index(corner_b, xb, yb))
            ] += 1
        for pair, cnt in counts.items():
            if cnt != g.order:
                raise MultiplicityViolationError(
                    f"{what}: incidence {pair} has multiplicity {cnt}/{g.order}"
                )
        if len(counts) != expected:
            raise MultiplicityViolationError(
                f"{what}: got {len(counts)} edge orbits, expected {expected}"
            )
        return frozenset(counts)

    e_s0 = quotient_edges(
        (((x0, y0), (x1, y0)) for (x0, x1) in x.edges for y0 in range(y.v0_size)),
        0, 1, len(x.edges) * y.v0_size // g.order, "E*0",
    )
    e_s1 = quotient_edges(
        (((x0, y1), (x1, y1)) for (x0, x1) in x.edges for y1 in range(y.v1_size)),
        2, 3, len(x.edges) * y.v1_size // g.order, "E*1",
    )
    e_0s = quotient_edges(
        (((x0, y0), (x0, y1)) for x0 in range(x.v0_size) for (y0, y1) in y.edges),
        0, 2, x.v0_size * len(y.edges) // g.order, "E0*",
    )
    e_1s = quotient_edges(
        (((x1, y0), (x1, y1)) for x1 in range(x.v1_size) for (y0, y1) in y.edges),
        1, 3, x.v1_size * len(y.edges) // g.order, "E1*",
    )

    face_counts: Counter = Counter()
    for (x0, x1) in x.edges:
        for (y0, y1) in y.edges:
            face_counts[
                (
                    quotient_index(0, x0, y0),
                    quotient_index(1, x1, y0),
                    quotient_index(2, x0, y1),
                    quotient_index(3, x1, y1),
                )
            ] += 1
    for face, cnt in face_counts.items():
        if cnt != g.order:
            raise MultiplicityViolationError(
                f"face {face} has multiplicity {cnt}/{g.order}"
            )
    faces = tuple(sorted(face_counts))

    wedge_to_face: dict = {}
    for (i00, i10, i01, i11) in faces:
        key = (i00, i10, i01)
        if key in wedge_to_face:
            raise MultiplicityViolationError(f"wedge {key} completed by two faces")
        wedge_to_face[key] = i11

    reg_x = check_regularity(x)
    reg_y = check_regularity(y)

    d2 = _adjacency(sizes[1], sizes[0], e_s0, flip=True).vstack(
        _adjacency(sizes[2], sizes[0], e_0s, flip=True)
    )
    d1 = _adjacency(sizes[3], sizes[1], e_1s, flip=True).hstack(
        _adjacency(sizes[3], sizes[2], e_s1, flip=True)
    )
    product = d1.matmul(d2)
    if not product.is_zero():
        bad = product.nonzero_entries()[0]
        raise MultiplicityViolationError(
            f"chain condition d1 d2 = 0 violated at entry {bad}"
        )

    return BalancedProductComplex(
        group=g,
        x=x,
        y=y,
        ax=ax,
        ay=ay,
        labelings=labelings,
        sizes=sizes,
        e_s0=e_s0,
        e_s1=e_s1,
        e_0s=e_0s,
        e_1s=e_1s,
        faces=faces,
        reg_x=reg_x,
        reg_y=reg_y,
        d2=d2,
        d1=d1,
        wedge_to_face=wedge_to_face,
    )


def _adjacency(
    rows: int, cols: int, edges: Iterable[tuple[int, int]], flip: bool = False
) -> BitMatrix:
    """Adjacency as a rows x cols bit matrix; ``flip`` swaps the pair order."""
    m = BitMatrix(rows, cols)
    for a, b in edges:
        i, j = (b, a) if flip else (a, b)
        m.set(i, j, 1)
    return m


def complex_manifest(bp: BalancedProductComplex) -> dict:
    """Sizes, degrees and canonical labels of a complex, JSON-ready."""
    return {
        "group_order": bp.group.order,
        "group_name": bp.group.name,
        "sizes": list(bp.sizes),
        "degrees": {
            "w_down": bp.w_down,
            "w_up": bp.w_up,
            "w_right": bp.w_right,
            "w_left": bp.w_left,
        },
        "labels": {
            str(corner): [list(bp.label(corner, i)) for i in range(bp.sizes[corner])]
            for corner in range(4)
        },
        "faces": [list(f) for f in bp.faces],
    }


def verify_chain_identity(
    d1: BitMatrix, d2: BitMatrix
) -> tuple[bool, tuple[int, int] | None]:
    """Recheck ``d1 @ d2 == 0``; returns the first offending entry if any."""
    product = d1.matmul(d2)
    if product.is_zero():
        return True, None
    return False, product.nonzero_entries()[0]


def left_right_cayley(
    g: FiniteGroup, a_set: Iterable[int], b_set: Iterable[int]
) -> BalancedProductComplex:
    """Balanced product of the two right Cayley graphs on ``A^-1`` and ``B``.

    All four corners biject with ``G`` and the faces are the squares
    ``(g, ag, gb, agb)``.
    """
    a_inv = [g.inv(a) for a in a_set]
    x = cayley_right(g, a_inv)
    y = cayley_right(g, list(b_set))
    return balanced_product(x, y, regular_graph_action(g), regular_graph_action(g))


@dataclass(frozen=True)
class OneDSubgraph:
    """A corner-to-corner subgraph plus its decomposition into factor copies.

    ``copy_of[v]`` gives the copy index of each left/right vertex, and
    ``iso_left`` / ``iso_right`` map subgraph vertices to vertices of the
    factor graph, restricting to a graph isomorphism on every copy.
    """

    which: SubgraphName
    graph: BipartiteGraph
    factor: BipartiteGraph
    num_copies: int
    copy_of_left: tuple[int, ...]
    copy_of_right: tuple[int, ...]
    iso_left: tuple[int, ...]
    iso_right: tuple[int, ...]


_SUBGRAPH_CORNERS: dict[str, tuple[int, int, str]] = {
    "*0": (0, 1, "x"),
    "*1": (2, 3, "x"),
    "0*": (0, 2, "y"),
    "1*": (1, 3, "y"),
}


def one_d_subgraph(bp: BalancedProductComplex, which: SubgraphName) -> OneDSubgraph:
    """Extract one of the four corner-to-corner subgraphs with its copy witness.

    The subgraph decomposes into disjoint copies of the matching factor, one
    copy per orbit of the other factor's paired side.
    """
    if which not in _SUBGRAPH_CORNERS:
        raise InvalidParameterError(f"unknown subgraph selector: {which!r}")
    ca, cb, factor_kind = _SUBGRAPH_CORNERS[which]
    edges = {
        "*0": bp.e_s0,
        "*1": bp.e_s1,
        "0*": bp.e_0s,
        "1*": bp.e_1s,
    }[which]
    graph = BipartiteGraph(bp.sizes[ca], bp.sizes[cb], edges)
    g = bp.group

    if factor_kind == "x":
        factor = bp.x
        act0, act1 = bp.ax.on_v0, bp.ax.on_v1

        # copies are labeled by i_s; (h, r) maps to the factor vertex h^-1 . r
        def project(corner: int, index: int) -> tuple[int, int]:
            h, i_r, i_s = bp.label(corner, index)
            lab = bp._x_labeling(corner)
            act = act0 if corner in (0, 2) else act1
            return i_s, act.act(g.inv(h), lab.representatives[i_r])

    else:
        factor = bp.y
        act0, act1 = bp.ay.on_v0, bp.ay.on_v1

        # copies are labeled by i_r; (h, s) maps to the factor vertex h . s
        def project(corner: int, index: int) -> tuple[int, int]:
            h, i_r, i_s = bp.label(corner, index)
            lab = bp._y_labeling(corner)
            act = act0 if corner in (0, 1) else act1
            return i_r, act.act(h, lab.representatives[i_s])

    copy_left, iso_left = zip(*(project(ca, i) for i in range(bp.sizes[ca])))
    copy_right, iso_right = zip(*(project(cb, i) for i in range(bp.sizes[cb])))
    num_copies = len(set(copy_left) | set(copy_right))

    return OneDSubgraph(
        which=which,
        graph=graph,
        factor=factor,
        num_copies=num_copies,
        copy_of_left=copy_left,
        copy_of_right=copy_right,
        iso_left=iso_left,
        iso_right=iso_right,
    )


def verify_copy_decomposition(sub: OneDSubgraph) -> bool:
    """Check the copy witness: the projection is a per-copy graph isomorphism."""
    # edges stay within one copy and project onto factor edges
    seen_per_copy: dict[int, set[tuple[int, int]]] = {}
    for (u, v) in sub.graph.edges:
        if sub.copy_of_left[u] != sub.copy_of_right[v]:
            return False
        img = (sub.iso_left[u], sub.iso_right[v])
        if img not in sub.factor.edges:
            return False
        seen_per_copy.setdefault(sub.copy_of_left[u], set()).add(img)
    # each copy covers the whole factor edge set, and vertex maps are bijective
    if len(seen_per_copy) != sub.num_copies:
        return False
    for imgs in seen_per_copy.values():
        if imgs != sub.factor.edges:
            return False
    for copy_of, iso, size in (
        (sub.copy_of_left, sub.iso_left, sub.factor.v0_size),
        (sub.copy_of_right, sub.iso_right, sub.factor.v1_size),
    ):
        per_copy: dict[int, set[int]] = {}
        for c, im in zip(copy_of, iso):
            bucket = per_copy.setdefault(c, set())
            if im in bucket:
                return False
            bucket.add(im)
        if any(len(b) != size for b in per_copy.values()):
            return False
    return True


def inherited_expansion(
    bp: BalancedProductComplex,
    factor_cert: ExpansionCertificate,
    which: SubgraphName,
) -> ExpansionCertificate:
    """Certificate for a 1-d subgraph inherited from its factor's certificate.

    The cutoff scales by |factor left side| / |subgraph left side| and epsilon
    carries over unchanged.
    """
    if not factor_cert.certifies:
        raise InvalidParameterError("inheritance needs an exhaustive factor certificate")
    ca, _, factor_kind = _SUBGRAPH_CORNERS[which]
    factor = bp.x if factor_kind == "x" else bp.y
    scale = Fraction(factor.v0_size, bp.sizes[ca])
    return ExpansionCertificate(
        c=factor_cert.c * scale,
        epsilon=factor_cert.epsilon,
        w0=factor_cert.w0,
        mode="exhaustive",
        max_checked_size=factor_cert.max_checked_size,
        worst_witness=None,
    )
