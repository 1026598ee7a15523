"""Randomized search for pairs of small expanding Cayley-type factors.

The search draws random generating sets, builds the two factor graphs (layered
when a degree skew is requested), certifies their expansion exhaustively, and
scores each trial by the combined loss parameter the testability inequality
depends on.  Nothing is ever reported as certified unless the exhaustive scan
said so; a fully failed search raises with the complete trial log attached.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InvalidParameterError,
    MultiplicityViolationError,
    SearchExhaustedError,
)
from .graphs import (
    BipartiteGraph,
    ExpansionCertificate,
    certify_expansion,
)
from .groups import (
    FiniteGroup,
    GroupAction,
    OrbitLabeling,
    block_action,
    left_regular_action,
)
from .products import BalancedProductComplex, GraphAction, balanced_product


def random_cayley(g: FiniteGroup, degree: int, seed: int) -> BipartiteGraph:
    """A right-multiplication Cayley graph on a seeded random generating set."""
    rng = random.Random(seed)
    from .graphs import cayley_right

    return cayley_right(g, random_generating_set(g, degree, rng))


def random_generating_set(g: FiniteGroup, size: int, rng: random.Random) -> list[int]:
    """A duplicate-free random subset of group elements of the given size."""
    if size > g.order:
        raise InvalidParameterError(
            f"cannot draw {size} distinct generators from order {g.order}"
        )
    return sorted(rng.sample(range(g.order), size))


def layered_cayley(
    g: FiniteGroup, layers: int, degree: int, rng: random.Random
) -> tuple[BipartiteGraph, GraphAction, list[list[int]]]:
    """A (degree, layers*degree)-biregular graph with a free G-action.

    The left side is ``layers`` disjoint copies of ``G`` (copy ``i`` holds the
    indices ``i*|G| .. i*|G|+|G|-1``), the right side is ``G``, and copy ``i``
    is a right-multiplication Cayley graph on its own random generating set.
    Left multiplication acts freely on both sides and preserves the edges.
    """
    if layers < 1 or degree < 1:
        raise InvalidParameterError("layers and degree must be positive")
    gen_sets = [random_generating_set(g, degree, rng) for _ in range(layers)]
    edges = [
        (i * g.order + x, g.mul(x, b))
        for i, gens in enumerate(gen_sets)
        for x in g.elements()
        for b in gens
    ]
    graph = BipartiteGraph(layers * g.order, g.order, edges)
    action = GraphAction(
        block_action(left_regular_action(g), layers), left_regular_action(g)
    )
    return graph, action, gen_sets


def unbalance(
    x: BipartiteGraph, labeling: OrbitLabeling, t: int
) -> tuple[BipartiteGraph, GroupAction]:
    """Merge left orbits in chunks of ``t``, multiplying the left degree by ``t``.

    The left side must decompose into orbits of a free action (``labeling``)
    whose count is divisible by ``t``; merged vertices keep the group
    coordinate, so the shrunken action stays free.  A neighbor shared by two
    merged vertices would cancel over GF(2) and is rejected.
    """
    k = labeling.num_orbits
    if k % t:
        raise InvalidParameterError(
            f"orbit count {k} is not divisible by chunk size {t}"
        )
    g = labeling.action.group
    if labeling.action.set_size != x.v0_size:
        raise InvalidParameterError("labeling does not cover the left vertex set")
    new_v0 = (k // t) * g.order
    counts: Counter = Counter()
    for (u, v) in x.edges:
        h, i = labeling.label[u]
        counts[((i // t) * g.order + h, v)] += 1
    for pair, cnt in counts.items():
        if cnt != 1:
            raise MultiplicityViolationError(
                f"merged edge {pair} has multiplicity {cnt}"
            )
    merged = BipartiteGraph(new_v0, x.v1_size, counts)
    action = block_action(left_regular_action(g), k // t)
    return merged, action


@dataclass(frozen=True)
class SearchSpec:
    """Target shape for one random expander-pair search."""

    group: FiniteGroup
    w_down: int
    w_up: int
    w_right: int
    w_left: int
    c_x: Fraction
    c_y: Fraction
    trials: int = 50
    seed: int = 0
    eps_target: Fraction | None = None
    ratio_x_interval: tuple[Fraction, Fraction] | None = None
    ratio_y_interval: tuple[Fraction, Fraction] | None = None
    subset_budget: int = 2_000_000

    def __post_init__(self):
        if min(self.w_down, self.w_up, self.w_right, self.w_left) < 1:
            raise InvalidParameterError("degrees must be >= 1")
        if self.w_up % self.w_down or self.w_left % self.w_right:
            raise InvalidParameterError(
                "skewed degrees must be integer multiples of the base degrees"
            )
        if self.eps_target is not None and not 0 < self.eps_target < 1:
            raise InvalidParameterError("eps target must lie in (0, 1)")
        for interval, ratio, tag in (
            (self.ratio_x_interval, Fraction(self.w_down, self.w_up), "first"),
            (self.ratio_y_interval, Fraction(self.w_right, self.w_left), "second"),
        ):
            if interval is not None and not interval[0] <= ratio <= interval[1]:
                raise InvalidParameterError(
                    f"{tag} factor degree ratio {ratio} outside {interval}"
                )


@dataclass(frozen=True)
class SearchResult:
    """Best trial of a search, with the full monotone trial log."""

    complex: BalancedProductComplex
    cert_x: ExpansionCertificate
    cert_y: ExpansionCertificate
    epsilon: Fraction
    trial: int
    seed: int
    gen_sets_x: tuple[tuple[int, ...], ...]
    gen_sets_y: tuple[tuple[int, ...], ...]
    log: tuple[dict, ...] = field(repr=False)
    inequalities: dict | None = None  # measured conditions vs the eps target


def combined_epsilon(
    w_up: int, cert_x: ExpansionCertificate, cert_y: ExpansionCertificate
) -> Fraction:
    """``max(w_up * eps_y, eps_y, eps_x)``, the loss the inequality pays for."""
    return max(w_up * cert_y.epsilon, cert_y.epsilon, cert_x.epsilon)


def search_pair(spec: SearchSpec) -> SearchResult:
    """Random search over generating sets; returns the best certified trial.

    Every trial gets its own derived seed, so runs are reproducible and
    individual trials can be replayed.  A missed ``eps_target`` is recorded in
    ``inequalities`` rather than hidden; ``SearchExhaustedError`` (with the
    trial log) is raised only when no trial produced a certifiable pair.
    """
    g = spec.group
    layers_x = spec.w_up // spec.w_down
    layers_y = spec.w_left // spec.w_right
    log: list[dict] = []
    best: SearchResult | None = None

    for trial in range(spec.trials):
        trial_seed = spec.seed * 1_000_003 + trial
        rng = random.Random(trial_seed)
        entry: dict = {"trial": trial, "seed": trial_seed}
        try:
            x, ax, gens_x = layered_cayley(g, layers_x, spec.w_down, rng)
            y, ay, gens_y = layered_cayley(g, layers_y, spec.w_right, rng)
            bp = balanced_product(x, y, ax, ay)
            cert_x = certify_expansion(x, spec.c_x, max_evals=spec.subset_budget)
            cert_y = certify_expansion(y, spec.c_y, max_evals=spec.subset_budget)
        except MultiplicityViolationError as exc:
            entry["status"] = "degenerate"
            entry["detail"] = str(exc)
            log.append(entry)
            continue
        eps = combined_epsilon(spec.w_up, cert_x, cert_y)
        entry.update(
            status="certified",
            eps_x=str(cert_x.epsilon),
            eps_y=str(cert_y.epsilon),
            eps=str(eps),
        )
        log.append(entry)
        if best is None or eps < best.epsilon:
            best = SearchResult(
                complex=bp,
                cert_x=cert_x,
                cert_y=cert_y,
                epsilon=eps,
                trial=trial,
                seed=trial_seed,
                gen_sets_x=tuple(tuple(s) for s in gens_x),
                gen_sets_y=tuple(tuple(s) for s in gens_y),
                log=tuple(log),
            )

    if best is None:
        raise SearchExhaustedError("no trial produced a certifiable pair", tuple(log))
    inequalities = None
    if spec.eps_target is not None:
        t = spec.eps_target
        inequalities = {
            "w_up_eps_y_le_eps": spec.w_up * best.cert_y.epsilon <= t,
            "eps_y_le_eps": best.cert_y.epsilon <= t,
            "eps_x_le_eps": best.cert_x.epsilon <= t,
        }
    # refresh the log on the returned best so it covers every trial
    return SearchResult(
        complex=best.complex,
        cert_x=best.cert_x,
        cert_y=best.cert_y,
        epsilon=best.epsilon,
        trial=best.trial,
        seed=best.seed,
        gen_sets_x=best.gen_sets_x,
        gen_sets_y=best.gen_sets_y,
        log=tuple(log),
        inequalities=inequalities,
    )
