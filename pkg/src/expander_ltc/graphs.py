"""Bipartite graphs, Cayley constructions, and expansion certification.

Graphs are simple (edge sets, no multi-edges).  Neighborhoods are cached as
integer bitmasks so that subset-expansion scans reduce to OR + popcount.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import (
    BudgetExceededError,
    InvalidParameterError,
    IrregularGraphError,
    PreconditionViolationError,
)
from .groups import FiniteGroup, GroupAction

#: Default cap on exhaustive subset evaluations in ``certify_expansion``.
DEFAULT_SUBSET_BUDGET = 20_000_000


class BipartiteGraph:
    """A simple bipartite graph on vertex sets ``0..v0_size-1`` / ``0..v1_size-1``."""

    __slots__ = ("v0_size", "v1_size", "edges", "_left_masks", "_right_masks")

    def __init__(self, v0_size: int, v1_size: int, edges: Iterable[tuple[int, int]]):
        if v0_size <= 0 or v1_size <= 0:
            raise InvalidParameterError("vertex sets must be nonempty")
        edge_set = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in edge_set:
            if not (0 <= u < v0_size and 0 <= v < v1_size):
                raise InvalidParameterError(f"edge ({u}, {v}) out of range")
        self.v0_size = v0_size
        self.v1_size = v1_size
        self.edges = edge_set
        self._left_masks: list[int] | None = None
        self._right_masks: list[int] | None = None

    @property
    def left_masks(self) -> list[int]:
        """Neighborhood of each left vertex as a bitmask over the right side."""
        if self._left_masks is None:
            masks = [0] * self.v0_size
            for u, v in self.edges:
                masks[u] |= 1 << v
            self._left_masks = masks
        return self._left_masks

    @property
    def right_masks(self) -> list[int]:
        if self._right_masks is None:
            masks = [0] * self.v1_size
            for u, v in self.edges:
                masks[v] |= 1 << u
            self._right_masks = masks
        return self._right_masks

    def left_neighbors(self, u: int) -> list[int]:
        return _mask_to_list(self.left_masks[u])

    def right_neighbors(self, v: int) -> list[int]:
        return _mask_to_list(self.right_masks[v])

    def left_degree(self, u: int) -> int:
        return self.left_masks[u].bit_count()

    def right_degree(self, v: int) -> int:
        return self.right_masks[v].bit_count()

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(
            self.v1_size, self.v0_size, ((v, u) for u, v in self.edges)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteGraph)
            and self.v0_size == other.v0_size
            and self.v1_size == other.v1_size
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.v0_size}+{self.v1_size}, {len(self.edges)} edges)"


def _mask_to_list(mask: int) -> list[int]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


@dataclass(frozen=True)
class Regularity:
    w0: int
    w1: int


@dataclass(frozen=True)
class ExpansionCertificate:
    """Result of a small-set vertex-expansion scan.

    ``mode == "exhaustive"`` means every left subset of size < ``c * v0_size``
    was checked and ``epsilon`` is tight.  ``mode == "sampled"`` is explicitly
    non-certifying: ``epsilon`` is only the worst ratio seen over ``samples``
    random subsets.
    """

    c: Fraction
    epsilon: Fraction
    w0: int
    mode: str
    max_checked_size: int
    worst_witness: tuple[frozenset, Fraction] | None = None
    samples: int = 0
    seed: int | None = None

    @property
    def certifies(self) -> bool:
        return self.mode == "exhaustive"

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "epsilon": str(self.epsilon),
            "w0": self.w0,
            "mode": self.mode,
            "max_checked_size": self.max_checked_size,
            "worst_witness": (
                {
                    "subset": sorted(self.worst_witness[0]),
                    "ratio": str(self.worst_witness[1]),
                }
                if self.worst_witness
                else None
            ),
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class DegreeSplit:
    """Split of ``deg_{v1}`` into a heavy part d1 and an ``eps*w0``-capped d2."""

    d1: tuple[Fraction, ...]
    d2: tuple[Fraction, ...]


def cayley_left(g: FiniteGroup, a_set: Sequence[int]) -> BipartiteGraph:
    """Bipartite Cayley graph with edges ``(x, a*x)`` for ``a`` in ``a_set``."""
    gens = _check_generators(g, a_set)
    edges = [(x, g.mul(a, x)) for x in g.elements() for a in gens]
    return BipartiteGraph(g.order, g.order, edges)


def cayley_right(g: FiniteGroup, b_set: Sequence[int]) -> BipartiteGraph:
    """Bipartite Cayley graph with edges ``(x, x*b)`` for ``b`` in ``b_set``."""
    gens = _check_generators(g, b_set)
    edges = [(x, g.mul(x, b)) for x in g.elements() for b in gens]
    return BipartiteGraph(g.order, g.order, edges)


def _check_generators(g: FiniteGroup, gens: Sequence[int]) -> list[int]:
    out = list(gens)
    if not out:
        raise InvalidParameterError("generating set must be nonempty")
    if len(set(out)) != len(out):
        raise InvalidParameterError("generating set contains duplicates")
    for a in out:
        if not 0 <= a < g.order:
            raise InvalidParameterError(f"generator {a} outside group of order {g.order}")
    return out


def check_regularity(x: BipartiteGraph) -> Regularity:
    """The (w0, w1) degree pair; raises with the offending vertex otherwise."""
    w0 = x.left_degree(0)
    for u in range(x.v0_size):
        if x.left_degree(u) != w0:
            raise IrregularGraphError(
                f"left vertex {u} has degree {x.left_degree(u)} != {w0}", 0, u
            )
    w1 = x.right_degree(0)
    for v in range(x.v1_size):
        if x.right_degree(v) != w1:
            raise IrregularGraphError(
                f"right vertex {v} has degree {x.right_degree(v)} != {w1}", 1, v
            )
    return Regularity(w0, w1)


def check_invariance(x: BipartiteGraph, a0: GroupAction, a1: GroupAction) -> bool:
    """Whether every group element maps edges to edges."""
    if a0.set_size != x.v0_size or a1.set_size != x.v1_size:
        raise InvalidParameterError("action set sizes do not match the graph")
    if a0.group.order != a1.group.order or a0.group.table != a1.group.table:
        raise InvalidParameterError("the two actions use different groups")
    for g in a0.group.elements():
        for (u, v) in x.edges:
            if (a0.act(g, u), a1.act(g, v)) not in x.edges:
                return False
    return True


def unique_neighbors(x: BipartiteGraph, v0: Iterable[int]) -> frozenset[int]:
    """Right vertices adjacent to exactly one member of ``v0``."""
    counts: dict[int, int] = {}
    for u in set(v0):
        for w in x.left_neighbors(u):
            counts[w] = counts.get(w, 0) + 1
    return frozenset(w for w, c in counts.items() if c == 1)


def _max_subset_size(c: Fraction, v0_size: int) -> int:
    # largest k with k < c * v0_size
    bound = c * v0_size
    k = int(bound)
    if k == bound:
        k -= 1
    return min(k, v0_size)


def certify_expansion(
    x: BipartiteGraph,
    c: Fraction,
    mode: str = "exhaustive",
    sample_budget: int = 20_000,
    seed: int = 0,
    max_evals: int = DEFAULT_SUBSET_BUDGET,
) -> ExpansionCertificate:
    """Tightest epsilon with ``|N(v0)| >= (1-eps) w0 |v0|`` for small subsets.

    Exhaustive mode scans every left subset with ``|v0| < c * |V0|`` and the
    returned epsilon is a true certificate.  Sampled mode draws random subsets
    with a seeded PRNG and never claims certification.
    """
    if not 0 < c <= 1:
        raise InvalidParameterError(f"c must lie in (0, 1], got {c}")
    reg = check_regularity(x)
    w0 = reg.w0
    kmax = _max_subset_size(Fraction(c), x.v0_size)
    masks = x.left_masks

    worst_eps = Fraction(0)
    witness: tuple[frozenset, Fraction] | None = None

    def consider(subset: tuple[int, ...], union: int):
        nonlocal worst_eps, witness
        k = len(subset)
        ratio = Fraction(union.bit_count(), k)
        eps = 1 - ratio / w0
        if eps > worst_eps or witness is None:
            worst_eps = max(eps, Fraction(0))
            witness = (frozenset(subset), ratio)

    if mode == "exhaustive":
        total = sum(comb(x.v0_size, k) for k in range(1, kmax + 1))
        if total > max_evals:
            raise BudgetExceededError(
                "exhaustive certification too large; use sampled mode",
                total,
                max_evals,
            )
        for k in range(1, kmax + 1):
            for subset in itertools.combinations(range(x.v0_size), k):
                union = 0
                for u in subset:
                    union |= masks[u]
                consider(subset, union)
        return ExpansionCertificate(
            c=Fraction(c),
            epsilon=worst_eps,
            w0=w0,
            mode="exhaustive",
            max_checked_size=kmax,
            worst_witness=witness,
        )
    if mode == "sampled":
        rng = random.Random(seed)
        n_samples = 0
        for _ in range(sample_budget):
            if kmax < 1:
                break
            k = rng.randint(1, kmax)
            subset = tuple(rng.sample(range(x.v0_size), k))
            union = 0
            for u in subset:
                union |= masks[u]
            consider(subset, union)
            n_samples += 1
        return ExpansionCertificate(
            c=Fraction(c),
            epsilon=worst_eps,
            w0=w0,
            mode="sampled",
            max_checked_size=kmax,
            worst_witness=witness,
            samples=n_samples,
            seed=seed,
        )
    raise InvalidParameterError(f"unknown certification mode: {mode!r}")


def check_unique_neighbor_lemma(
    x: BipartiteGraph, cert: ExpansionCertificate
) -> tuple[bool, tuple[frozenset, int] | None]:
    """Verify ``|unique(v0)| >= (1-2 eps) w0 |v0|`` over all certified subsets.

    A ``False`` result signals an implementation bug (the bound is a theorem
    for certified expanders) and returns the counterexample.
    """
    if not cert.certifies:
        raise PreconditionViolationError("lemma check needs an exhaustive certificate")
    bound_coeff = (1 - 2 * cert.epsilon) * cert.w0
    worst: tuple[frozenset, int] | None = None
    for k in range(1, cert.max_checked_size + 1):
        for subset in itertools.combinations(range(x.v0_size), k):
            un = len(unique_neighbors(x, subset))
            if Fraction(un) < bound_coeff * k:
                return False, (frozenset(subset), un)
            if worst is None or Fraction(un, k) < Fraction(worst[1], len(worst[0])):
                worst = (frozenset(subset), un)
    return True, worst


def check_edge_count_lemma(
    x: BipartiteGraph,
    cert: ExpansionCertificate,
    v0: Iterable[int],
    v1: Iterable[int],
) -> bool:
    """``|E(v0, v1)| <= eps w0 |v0| + |v1|`` for a certified small ``v0``."""
    if not cert.certifies:
        raise PreconditionViolationError("lemma check needs an exhaustive certificate")
    v0s, v1s = set(v0), set(v1)
    if len(v0s) > cert.max_checked_size:
        raise PreconditionViolationError(
            f"|v0|={len(v0s)} exceeds certified size {cert.max_checked_size}"
        )
    v1_mask = 0
    for v in v1s:
        v1_mask |= 1 << v
    n_edges = sum((x.left_masks[u] & v1_mask).bit_count() for u in v0s)
    return Fraction(n_edges) <= cert.epsilon * cert.w0 * len(v0s) + len(v1s)


def degree_split(
    x: BipartiteGraph, cert: ExpansionCertificate, v1: Iterable[int]
) -> DegreeSplit:
    """Split ``deg_{v1}`` into d1 (total <= |v1|) and d2 (capped at eps*w0).

    Exact rational arithmetic throughout; ``d1 = max(deg - eps*w0, 0)`` and
    ``d2`` is the remainder.
    """
    if not cert.certifies:
        raise PreconditionViolationError("degree split needs an exhaustive certificate")
    if cert.epsilon >= 1:
        raise PreconditionViolationError("epsilon must be < 1")
    reg = check_regularity(x)
    v1s = set(v1)
    limit = Fraction(cert.c) * x.v0_size / reg.w1
    if not Fraction(len(v1s)) < limit:
        raise PreconditionViolationError(
            f"|v1|={len(v1s)} not below the smallness bound {limit}"
        )
    v1_mask = 0
    for v in v1s:
        v1_mask |= 1 << v
    cap = cert.epsilon * reg.w0
    d1 = []
    d2 = []
    for u in range(x.v0_size):
        deg = (x.left_masks[u] & v1_mask).bit_count()
        heavy = max(Fraction(deg) - cap, Fraction(0))
        d1.append(heavy)
        d2.append(Fraction(deg) - heavy)
    split = DegreeSplit(tuple(d1), tuple(d2))
    _check_split(split, cap, reg.w1, len(v1s))
    return split


def _check_split(split: DegreeSplit, cap: Fraction, w1: int, v1_size: int) -> None:
    assert sum(split.d1) <= v1_size
    if cap == 0:
        target: list[Fraction] = []
    else:
        count = -((-w1 * v1_size) // cap)  # ceil(w1 |v1| / (eps w0))
        target = [cap] * int(count)
    assert all(d <= cap for d in split.d2)
    assert majorizes(target, list(split.d2))


def majorizes(a: Sequence, b: Sequence) -> bool:
    """Prefix-sum dominance of descending sorts, zero-padded to equal length."""
    aa = sorted((Fraction(v) for v in a), reverse=True)
    bb = sorted((Fraction(v) for v in b), reverse=True)
    n = max(len(aa), len(bb))
    aa += [Fraction(0)] * (n - len(aa))
    bb += [Fraction(0)] * (n - len(bb))
    pa = pb = Fraction(0)
    for va, vb in zip(aa, bb):
        pa += va
        pb += vb
        if pa < pb:
            return False
    return True


def graph_to_edge_list(x: BipartiteGraph) -> str:
    """One "u v" pair per line, sorted, 0-indexed, left vertex first."""
    lines = [f"{x.v0_size} {x.v1_size}"]
    lines += [f"{u} {v}" for u, v in sorted(x.edges)]
    return "\n".join(lines) + "\n"


def graph_from_edge_list(text: str) -> BipartiteGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParameterError("empty edge list")
    n0, n1 = (int(t) for t in lines[0].split())
    edges = []
    for ln in lines[1:]:
        u, v = (int(t) for t in ln.split())
        edges.append((u, v))
    return BipartiteGraph(n0, n1, edges)
