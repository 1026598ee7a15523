"""Finite groups as explicit multiplication tables, plus free actions.

Elements are indices ``0..order-1``.  Tables keep everything exhaustively
checkable at desk scale (orders up to a few hundred), which is exactly the
regime the rest of the library operates in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import FreenessViolationError, InvalidParameterError, SizeLimitError

#: Hard cap on group orders; products beyond this raise ``SizeLimitError``.
MAX_GROUP_ORDER = 4096

#: Orders up to this bound get a full associativity/identity/inverse audit
#: at construction time.
AXIOM_CHECK_ORDER = 256


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full multiplication table."""

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    name: str = ""

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order=%d' % self.order})"


@dataclass(frozen=True)
class GroupAction:
    """A left action of ``group`` on the point set ``0..set_size-1``."""

    group: FiniteGroup
    set_size: int
    table: tuple[tuple[int, ...], ...]  # table[g][x] = g.x

    def act(self, g: int, x: int) -> int:
        return self.table[g][x]


@dataclass(frozen=True)
class OrbitLabeling:
    """Bijective ``(g, r)`` labels for the points of a free action.

    ``label[x] = (g, i)`` where ``representatives[i]`` is the orbit
    representative and ``x = g . representatives[i]``.
    """

    action: GroupAction
    representatives: tuple[int, ...]
    label: tuple[tuple[int, int], ...]
    _point: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    @property
    def num_orbits(self) -> int:
        return len(self.representatives)

    def point_of(self, g: int, rep_index: int) -> int:
        return self._point[(g, rep_index)]


def check_group_axioms(g: FiniteGroup) -> None:
    """Exhaustively verify associativity, identity and inverses.

    Cubic in the order; intended for orders up to ``AXIOM_CHECK_ORDER``.
    """
    n = g.order
    if len(g.table) != n or any(len(row) != n for row in g.table):
        raise InvalidParameterError("multiplication table has wrong shape")
    e = g.identity
    for a in range(n):
        if g.mul(e, a) != a or g.mul(a, e) != a:
            raise InvalidParameterError(f"identity axiom fails at element {a}")
        if g.mul(a, g.inv(a)) != e or g.mul(g.inv(a), a) != e:
            raise InvalidParameterError(f"inverse axiom fails at element {a}")
    for a in range(n):
        for b in range(n):
            ab = g.mul(a, b)
            for c in range(n):
                if g.mul(ab, c) != g.mul(a, g.mul(b, c)):
                    raise InvalidParameterError(
                        f"associativity fails on triple ({a}, {b}, {c})"
                    )


def _maybe_check(g: FiniteGroup) -> FiniteGroup:
    if g.order <= AXIOM_CHECK_ORDER:
        check_group_axioms(g)
    return g


def make_cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order ``n`` with addition mod ``n``."""
    if n < 1:
        raise InvalidParameterError(f"cyclic group order must be >= 1, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inverse = tuple((-a) % n for a in range(n))
    return _maybe_check(FiniteGroup(n, table, 0, inverse, name=f"Z{n}"))


def make_direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Componentwise product under the pairing ``(a, b) -> a*|h| + b``."""
    order = g.order * h.order
    if order > MAX_GROUP_ORDER:
        raise SizeLimitError(f"product order {order} exceeds cap {MAX_GROUP_ORDER}")
    m = h.order

    def pair(a: int, b: int) -> int:
        return a * m + b

    table = tuple(
        tuple(
            pair(g.mul(a1, a2), h.mul(b1, b2))
            for a2 in range(g.order)
            for b2 in range(h.order)
        )
        for a1 in range(g.order)
        for b1 in range(h.order)
    )
    inverse = tuple(
        pair(g.inv(a), h.inv(b)) for a in range(g.order) for b in range(h.order)
    )
    identity = pair(g.identity, h.identity)
    name = f"({g.name or g.order}x{h.name or h.order})"
    return _maybe_check(FiniteGroup(order, table, identity, inverse, name=name))


def group_from_spec(spec: dict) -> FiniteGroup:
    """Build a group from its config-file description.

    Supported kinds: ``{"kind": "cyclic", "n": 12}`` and
    ``{"kind": "product", "factors": [...]}`` with recursive factors.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidParameterError(f"bad group spec: {spec!r}")
    kind = spec["kind"]
    if kind == "cyclic":
        extra = set(spec) - {"kind", "n"}
        if extra:
            raise InvalidParameterError(f"unknown group spec keys: {sorted(extra)}")
        return make_cyclic(int(spec["n"]))
    if kind == "product":
        extra = set(spec) - {"kind", "factors"}
        if extra:
            raise InvalidParameterError(f"unknown group spec keys: {sorted(extra)}")
        factors = [group_from_spec(f) for f in spec["factors"]]
        if not factors:
            raise InvalidParameterError("product group needs at least one factor")
        g = factors[0]
        for f in factors[1:]:
            g = make_direct_product(g, f)
        return g
    raise InvalidParameterError(f"unknown group kind: {kind!r}")


def make_action(group: FiniteGroup, set_size: int, act) -> GroupAction:
    """Tabulate and validate an action given as a callable ``act(g, x)``."""
    table = tuple(
        tuple(act(g, x) for x in range(set_size)) for g in group.elements()
    )
    a = GroupAction(group, set_size, table)
    check_action_axioms(a)
    return a


def check_action_axioms(a: GroupAction) -> None:
    g = a.group
    for x in range(a.set_size):
        if a.act(g.identity, x) != x:
            raise InvalidParameterError(f"identity does not fix point {x}")
    for g1 in g.elements():
        for g2 in g.elements():
            g12 = g.mul(g1, g2)
            for x in range(a.set_size):
                if a.act(g1, a.act(g2, x)) != a.act(g12, x):
                    raise InvalidParameterError(
                        f"action not compatible on ({g1}, {g2}, {x})"
                    )


def left_regular_action(g: FiniteGroup) -> GroupAction:
    """G acting on itself by left multiplication; always free."""
    return GroupAction(g, g.order, g.table)


def right_regular_action_as_left(g: FiniteGroup) -> GroupAction:
    """The right regular action encoded as a left action, ``a.x = x a^-1``."""
    table = tuple(
        tuple(g.mul(x, g.inv(a)) for x in g.elements()) for a in g.elements()
    )
    return GroupAction(g, g.order, table)


def trivial_action(g: FiniteGroup, set_size: int) -> GroupAction:
    table = tuple(tuple(range(set_size)) for _ in g.elements())
    return GroupAction(g, set_size, table)


def block_action(a: GroupAction, blocks: int) -> GroupAction:
    """Extend an action to ``blocks`` disjoint copies of the point set.

    Point ``i*set_size + x`` lives in copy ``i``; the group fixes the copy
    index.  Used for layered graphs with several orbits per side.
    """
    n = a.set_size
    table = tuple(
        tuple(i * n + a.act(g, x) for i in range(blocks) for x in range(n))
        for g in a.group.elements()
    )
    return GroupAction(a.group, n * blocks, table)


def subgroup(g: FiniteGroup, elements: Sequence[int]) -> tuple[FiniteGroup, GroupAction]:
    """A subgroup as a standalone group, plus its left action on ``G``.

    ``elements`` must be closed under multiplication and contain the identity.
    """
    elems = list(dict.fromkeys(elements))
    if g.identity not in elems:
        raise InvalidParameterError("subgroup must contain the identity")
    index = {x: i for i, x in enumerate(elems)}
    k = len(elems)
    try:
        table = tuple(
            tuple(index[g.mul(a, b)] for b in elems) for a in elems
        )
        inverse = tuple(index[g.inv(a)] for a in elems)
    except KeyError as exc:
        raise InvalidParameterError(
            f"subset not closed under multiplication (missing {exc.args[0]})"
        ) from None
    sub = _maybe_check(
        FiniteGroup(k, table, index[g.identity], inverse, name=f"sub{k}<{g.name}>")
    )
    act_table = tuple(tuple(g.mul(a, x) for x in g.elements()) for a in elems)
    return sub, GroupAction(sub, g.order, act_table)


def is_free_action(a: GroupAction) -> bool:
    """True iff only the identity has fixed points."""
    return _freeness_witness(a) is None


def _freeness_witness(a: GroupAction) -> tuple[int, int] | None:
    e = a.group.identity
    for g in a.group.elements():
        if g == e:
            continue
        row = a.table[g]
        for x in range(a.set_size):
            if row[x] == x:
                return (g, x)
    return None


def orbit_labeling(a: GroupAction) -> OrbitLabeling:
    """Label each point uniquely as ``g . r`` with ``r`` a minimal orbit rep.

    Raises ``FreenessViolationError`` (with a witness pair) for non-free
    actions, where no such bijective labeling exists.
    """
    witness = _freeness_witness(a)
    if witness is not None:
        raise FreenessViolationError(
            f"action is not free: g={witness[0]} fixes x={witness[1]}", witness
        )
    label: list[tuple[int, int] | None] = [None] * a.set_size
    reps: list[int] = []
    for x in range(a.set_size):
        if label[x] is not None:
            continue
        rep_index = len(reps)
        reps.append(x)  # x is minimal in its orbit by scan order
        for g in a.group.elements():
            y = a.act(g, x)
            if label[y] is None:
                label[y] = (g, rep_index)
    point = {
        (g, i): a.act(g, r)
        for i, r in enumerate(reps)
        for g in a.group.elements()
    }
    return OrbitLabeling(a, tuple(reps), tuple(label), point)
