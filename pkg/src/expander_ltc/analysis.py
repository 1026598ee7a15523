"""Code-level analyses of a balanced-product chain complex.

Everything here is a pure function of an immutable complex: code parameters,
exhaustive soundness, weighted local minimality and greedy flipping, the two
distance notions they induce, square counting, and the small-set testability
inequality with its sharp example.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    BudgetExceededError,
    DegenerateCodeError,
    InvalidParameterError,
    PreconditionViolationError,
)
from .f2 import BitMatrix, BitVector, kernel_basis, min_weight_nonzero, rank
from .graphs import ExpansionCertificate, unique_neighbors
from .products import BalancedProductComplex, one_d_subgraph

DEFAULT_SOUNDNESS_BUDGET = 1 << 20
DEFAULT_KERNEL_BUDGET = 1 << 24


# ---------------------------------------------------------------------------
# code instances


@dataclass(frozen=True)
class CodeInstance:
    """The classical code with the complex's lower boundary map as checks."""

    h: BitMatrix
    n: int
    m: int
    k: int
    locality: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)


def code_from_complex(bp: BalancedProductComplex) -> CodeInstance:
    """Assemble ``C(H = d2)``: bits on V00, checks on V10 and V01.

    Asserts the structural rate bound ``k/n >= 1 - w_down/w_up -
    w_right/w_left`` and that every check row touches at most
    ``max(w_up, w_left)`` bits.
    """
    h = bp.d2
    n = bp.n00
    m = bp.n10 + bp.n01
    k = n - rank(h)
    locality = max(bp.w_up, bp.w_left)
    for i in range(h.rows):
        w = h.row_bits[i].bit_count()
        expected = bp.w_up if i < bp.n10 else bp.w_left
        if w != expected:
            raise InvalidParameterError(
                f"check row {i} has weight {w}, expected {expected}"
            )
    rate_bound = 1 - Fraction(bp.w_down, bp.w_up) - Fraction(bp.w_right, bp.w_left)
    assert Fraction(k, n) >= rate_bound
    return CodeInstance(h=h, n=n, m=m, k=k, locality=locality)


# ---------------------------------------------------------------------------
# C1 vectors and weighted norms


@dataclass(frozen=True)
class C1Vector:
    """An element of the middle chain space, split by check corner."""

    v10: BitVector
    v01: BitVector

    @classmethod
    def zero(cls, bp: BalancedProductComplex) -> "C1Vector":
        return cls(BitVector(bp.n10), BitVector(bp.n01))

    @classmethod
    def from_supports(
        cls, bp: BalancedProductComplex, s10: Iterable[int], s01: Iterable[int]
    ) -> "C1Vector":
        return cls(
            BitVector.from_support(bp.n10, s10),
            BitVector.from_support(bp.n01, s01),
        )

    @classmethod
    def from_stacked(cls, bp: BalancedProductComplex, v: BitVector) -> "C1Vector":
        if v.length != bp.n10 + bp.n01:
            raise InvalidParameterError("stacked vector has wrong length")
        mask10 = (1 << bp.n10) - 1
        return cls(
            BitVector(bp.n10, v.bits & mask10),
            BitVector(bp.n01, v.bits >> bp.n10),
        )

    def stacked(self) -> BitVector:
        return BitVector(
            self.v10.length + self.v01.length,
            self.v10.bits | (self.v01.bits << self.v10.length),
        )

    def weight(self) -> int:
        return self.v10.weight() + self.v01.weight()

    def is_zero(self) -> bool:
        return self.v10.bits == 0 and self.v01.bits == 0


def weighted_norm(c1: C1Vector, bp: BalancedProductComplex) -> Fraction:
    """``|v10| / w_down + |v01| / w_right`` as an exact rational."""
    return Fraction(c1.v10.weight(), bp.w_down) + Fraction(c1.v01.weight(), bp.w_right)


def c0_weighted_norm(c0: BitVector, bp: BalancedProductComplex) -> Fraction:
    """``|c0| / (w_down * w_right)``."""
    return Fraction(c0.weight(), bp.w_down * bp.w_right)


def boundary_1(bp: BalancedProductComplex, c1: C1Vector) -> BitVector:
    return bp.d1.mul_vec(c1.stacked())


def _d2_column_masks(bp: BalancedProductComplex) -> tuple[list[int], list[int]]:
    """Per-bit boundary supports, split into the V10 and V01 check parts."""
    lo = []
    hi = []
    mask10 = (1 << bp.n10) - 1
    d2t = bp.d2.transpose()
    for bits in d2t.row_bits:
        lo.append(bits & mask10)
        hi.append(bits >> bp.n10)
    return lo, hi


def _flip_delta(
    bp: BalancedProductComplex, c1: C1Vector, col10: int, col01: int
) -> Fraction:
    o10 = (col10 & c1.v10.bits).bit_count()
    o01 = (col01 & c1.v01.bits).bit_count()
    return Fraction(bp.w_down - 2 * o10, bp.w_down) + Fraction(
        bp.w_right - 2 * o01, bp.w_right
    )


def is_locally_minimal(
    c1: C1Vector, bp: BalancedProductComplex
) -> tuple[bool, int | None]:
    """Weighted local minimality; returns an improving bit index if not."""
    lo, hi = _d2_column_masks(bp)
    for j in range(bp.n00):
        if _flip_delta(bp, c1, lo[j], hi[j]) < 0:
            return False, j
    return True, None


@dataclass(frozen=True)
class FlipResult:
    final: C1Vector
    flips: BitVector  # accumulated toggles over V00
    steps: int


def greedy_flip(c1: C1Vector, bp: BalancedProductComplex) -> FlipResult:
    """Apply weight-reducing boundary flips until weighted locally minimal.

    Among improving flips the one with the largest weighted decrease wins,
    ties broken by lowest bit index, so runs are deterministic.  The syndrome
    ``d1 c1`` is invariant throughout.
    """
    lo, hi = _d2_column_masks(bp)
    cur = c1
    flips = 0
    steps = 0
    while True:
        best_j = None
        best_delta = Fraction(0)
        for j in range(bp.n00):
            delta = _flip_delta(bp, cur, lo[j], hi[j])
            if delta < best_delta:
                best_delta = delta
                best_j = j
        if best_j is None:
            break
        cur = C1Vector(
            BitVector(bp.n10, cur.v10.bits ^ lo[best_j]),
            BitVector(bp.n01, cur.v01.bits ^ hi[best_j]),
        )
        flips ^= 1 << best_j
        steps += 1
    return FlipResult(final=cur, flips=BitVector(bp.n00, flips), steps=steps)


# ---------------------------------------------------------------------------
# soundness


@dataclass(frozen=True)
class SoundnessReport:
    """Exact or sampled minimum of ``(|Hx| / m) * (n / d(x, C))``."""

    s: Fraction
    witness: BitVector
    method: str
    samples: int = 0

    def ratio_of(self, code: CodeInstance) -> Fraction:
        syn = code.h.mul_vec(self.witness)
        dist = self.witness.weight()  # witness is stored as a coset leader
        return Fraction(syn.weight() * code.n, code.m * dist)


def soundness_exhaustive(
    code: CodeInstance, budget: int = DEFAULT_SOUNDNESS_BUDGET
) -> SoundnessReport:
    """Exact soundness by one Gray-coded sweep of the full space.

    For each syndrome coset the sweep finds the coset-leader weight, which is
    exactly ``d(x, C)`` for any ``x`` in the coset; the minimum ratio is then
    taken over nonzero syndromes.  The witness is the coset leader itself.
    """
    n, m = code.n, code.m
    if m == 0 or rank(code.h) == 0:
        raise DegenerateCodeError("code equals the full space; soundness undefined")
    if (1 << n) > budget:
        raise BudgetExceededError(f"2^{n} vectors exceed budget", 1 << n, budget)
    col_syndromes = [code.h.column(j).bits for j in range(n)]
    leader: dict[int, tuple[int, int]] = {}  # syndrome -> (weight, x bits)
    x = 0
    syn = 0
    for i in range(1, 1 << n):
        j = (i & -i).bit_length() - 1
        x ^= 1 << j
        syn ^= col_syndromes[j]
        if syn == 0:
            continue
        w = x.bit_count()
        cur = leader.get(syn)
        if cur is None or w < cur[0] or (w == cur[0] and x < cur[1]):
            leader[syn] = (w, x)
    best: Fraction | None = None
    best_x = None
    for syn, (w, xbits) in sorted(leader.items()):
        ratio = Fraction(syn.bit_count() * n, m * w)
        if best is None or ratio < best:
            best = ratio
            best_x = xbits
    return SoundnessReport(
        s=best, witness=BitVector(n, best_x), method="exhaustive"
    )


def soundness_sampled(
    code: CodeInstance,
    samples: int = 2000,
    seed: int = 0,
    kernel_budget: int = DEFAULT_KERNEL_BUDGET,
) -> SoundnessReport:
    """Non-certifying upper estimate of soundness from random non-codewords."""
    from .f2 import nearest_codeword_distance

    if code.m == 0 or rank(code.h) == 0:
        raise DegenerateCodeError("code equals the full space; soundness undefined")
    rng = random.Random(seed)
    best: Fraction | None = None
    best_x = None
    drawn = 0
    while drawn < samples:
        xbits = rng.getrandbits(code.n)
        x = BitVector(code.n, xbits)
        syn = code.h.mul_vec(x)
        if syn.bits == 0:
            continue
        drawn += 1
        dist = nearest_codeword_distance(code.h, x, budget=kernel_budget)
        ratio = Fraction(syn.weight() * code.n, code.m * dist)
        if best is None or ratio < best:
            best = ratio
            # replace the sample by its coset leader so the stored witness
            # reproduces the ratio through ratio_of()
            best_x = _coset_leader(code.h, x, kernel_budget)
    return SoundnessReport(s=best, witness=best_x, method="sampled", samples=drawn)


def _coset_leader(h: BitMatrix, x: BitVector, budget: int) -> BitVector:
    basis = kernel_basis(h)
    best = x.bits
    cur = x.bits
    for i in range(1, 1 << len(basis)):
        j = (i & -i).bit_length() - 1
        cur ^= basis[j].bits
        if cur.bit_count() < best.bit_count() or (
            cur.bit_count() == best.bit_count() and cur < best
        ):
            best = cur
    return BitVector(x.length, best)


# ---------------------------------------------------------------------------
# locally minimal / locally testable distances


@dataclass(frozen=True)
class LocallyMinimalDistance:
    """Minimum plain weight over nonzero weighted-locally-minimal kernel vectors.

    ``d_lm is None`` signals that no such vector exists.  ``weighted_min`` is
    the corresponding minimum of the weighted norm, kept as a diagnostic.
    """

    d_lm: int | None
    witness: C1Vector | None
    weighted_min: Fraction | None


def locally_minimal_distance(
    bp: BalancedProductComplex, budget: int = DEFAULT_KERNEL_BUDGET
) -> LocallyMinimalDistance:
    basis = kernel_basis(bp.d1)
    if (1 << len(basis)) > budget:
        raise BudgetExceededError(
            f"kernel dimension {len(basis)} too large", 1 << len(basis), budget
        )
    best_w: int | None = None
    best: C1Vector | None = None
    best_norm: Fraction | None = None
    cur = 0
    length = bp.n10 + bp.n01
    for i in range(1, 1 << len(basis)):
        j = (i & -i).bit_length() - 1
        cur ^= basis[j].bits
        w = cur.bit_count()
        if best_w is not None and w > best_w:
            continue
        c1 = C1Vector.from_stacked(bp, BitVector(length, cur))
        if not is_locally_minimal(c1, bp)[0]:
            continue
        norm = weighted_norm(c1, bp)
        if best_w is None or w < best_w or (w == best_w and norm < best_norm):
            best_w, best, best_norm = w, c1, norm
    return LocallyMinimalDistance(d_lm=best_w, witness=best, weighted_min=best_norm)


@dataclass(frozen=True)
class LTProfile:
    """Worst minimal-preimage weight per weight of an image vector.

    ``table[w]`` is the maximum over image vectors of weight ``w`` of the
    minimum weight of a preimage under the upper boundary map.  ``kappa`` is
    the largest ratio ``table[w] / w`` over the profiled range, materializing
    the otherwise-unquantified linearity constant.  ``d_lt`` is the largest
    weight threshold below which every image vector admits a preimage of
    weight at most ``kappa`` times its own.
    """

    table: dict[int, int]
    witnesses: dict[int, tuple[BitVector, BitVector]]  # w -> (image, preimage)
    kappa: Fraction
    d_lt: int
    max_weight_profiled: int
    image_fully_enumerated: bool


def lt_profile(
    bp: BalancedProductComplex,
    max_c1_weight: int,
    budget: int = DEFAULT_KERNEL_BUDGET,
) -> LTProfile:
    """Profile minimum preimage weights over the full image of ``d2``."""
    n = bp.n00
    if (1 << n) > budget:
        raise BudgetExceededError(f"2^{n} preimages exceed budget", 1 << n, budget)
    lo, hi = _d2_column_masks(bp)
    cols = [l | (h << bp.n10) for l, h in zip(lo, hi)]
    m = bp.n10 + bp.n01
    minpre: dict[int, tuple[int, int]] = {0: (0, 0)}  # image -> (pre weight, pre bits)
    c2 = 0
    img = 0
    for i in range(1, 1 << n):
        j = (i & -i).bit_length() - 1
        c2 ^= 1 << j
        img ^= cols[j]
        w = c2.bit_count()
        cur = minpre.get(img)
        if cur is None or w < cur[0] or (w == cur[0] and c2 < cur[1]):
            minpre[img] = (w, c2)
    table: dict[int, int] = {}
    witnesses: dict[int, tuple[BitVector, BitVector]] = {}
    for img, (w, c2bits) in sorted(minpre.items()):
        iw = img.bit_count()
        if iw == 0:
            continue
        if iw not in table or w > table[iw]:
            table[iw] = w
            witnesses[iw] = (BitVector(m, img), BitVector(n, c2bits))
    profiled = [w for w in table if w <= max_c1_weight]
    kappa = max(
        (Fraction(table[w], w) for w in profiled), default=Fraction(0)
    )
    d_lt = (max(table) if table else 0) + 1
    for w in sorted(table):
        if kappa == 0 or Fraction(table[w], w) > kappa:
            d_lt = w
            break
    return LTProfile(
        table=table,
        witnesses=witnesses,
        kappa=kappa,
        d_lt=d_lt,
        max_weight_profiled=max_c1_weight,
        image_fully_enumerated=True,
    )


def soundness_from_lt(code: CodeInstance, ltp: LTProfile) -> Fraction:
    """Lower bound ``min(n / (m * kappa), d_lt / m)`` on exact soundness."""
    terms = [Fraction(ltp.d_lt, code.m)]
    if ltp.kappa > 0:
        terms.append(Fraction(code.n, code.m) / ltp.kappa)
    return min(terms)


# ---------------------------------------------------------------------------
# squares and the small-set inequality


def square_count(bp: BalancedProductComplex, c1: C1Vector) -> int:
    """Number of faces with one side in ``v10`` and one in ``v01``.

    Computed both as a per-bit degree-product sum and by direct face
    enumeration; the two must agree.
    """
    lo, hi = _d2_column_masks(bp)
    by_degrees = sum(
        (l & c1.v10.bits).bit_count() * (h & c1.v01.bits).bit_count()
        for l, h in zip(lo, hi)
    )
    by_faces = sum(
        1
        for (_, i10, i01, _) in bp.faces
        if c1.v10[i10] and c1.v01[i01]
    )
    assert by_degrees == by_faces, "square counting methods disagree"
    return by_faces


@dataclass(frozen=True)
class SmallSetCheck:
    """One evaluation of the small-set testability inequality."""

    lhs: Fraction
    rhs: Fraction
    holds: bool
    epsilon: Fraction
    c1_weight: int
    unique_to_v10: int
    unique_to_v01: int
    squares: int

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs


def small_set_epsilon(
    bp: BalancedProductComplex,
    cert_x: ExpansionCertificate,
    cert_y: ExpansionCertificate,
) -> Fraction:
    """``max(w_up * eps_right, eps_right, eps_down)`` from the two certificates."""
    return max(bp.w_up * cert_y.epsilon, cert_y.epsilon, cert_x.epsilon)


def small_set_smallness_bounds(
    bp: BalancedProductComplex,
    cert_x: ExpansionCertificate,
    cert_y: ExpansionCertificate,
) -> tuple[Fraction, Fraction]:
    """Strict upper bounds on ``|v10|`` and ``|v01|`` for the lemma to apply."""
    c_down, c_right = cert_x.c, cert_y.c
    v0x = bp.x.v0_size
    v0y = bp.y.v0_size
    bound10 = min(c_down * v0x / bp.w_up, Fraction(c_right * v0y))
    bound01 = min(c_right * v0y / bp.w_left, Fraction(c_down * v0x))
    return bound10, bound01


def small_set_ltc_check(
    bp: BalancedProductComplex,
    cert_x: ExpansionCertificate,
    cert_y: ExpansionCertificate,
    c1: C1Vector,
) -> SmallSetCheck:
    """Evaluate ``(1/2 - 8 eps) |c1|_w <= |d1 c1|_w`` for a small minimal c1."""
    if not (cert_x.certifies and cert_y.certifies):
        raise PreconditionViolationError("both certificates must be exhaustive")
    minimal, improving = is_locally_minimal(c1, bp)
    if not minimal:
        raise PreconditionViolationError(
            f"c1 is not locally minimal (bit {improving} improves it)"
        )
    bound10, bound01 = small_set_smallness_bounds(bp, cert_x, cert_y)
    if not Fraction(c1.v10.weight()) < bound10:
        raise PreconditionViolationError(
            f"|v10|={c1.v10.weight()} not below bound {bound10}"
        )
    if not Fraction(c1.v01.weight()) < bound01:
        raise PreconditionViolationError(
            f"|v01|={c1.v01.weight()} not below bound {bound01}"
        )
    eps = small_set_epsilon(bp, cert_x, cert_y)
    lhs = (Fraction(1, 2) - 8 * eps) * weighted_norm(c1, bp)
    c0 = boundary_1(bp, c1)
    rhs = c0_weighted_norm(c0, bp)

    sub_1s = one_d_subgraph(bp, "1*")
    sub_s1 = one_d_subgraph(bp, "*1")
    uniq10 = len(unique_neighbors(sub_1s.graph, c1.v10.support()))
    uniq01 = len(unique_neighbors(sub_s1.graph, c1.v01.support()))
    return SmallSetCheck(
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
        epsilon=eps,
        c1_weight=c1.weight(),
        unique_to_v10=uniq10,
        unique_to_v01=uniq01,
        squares=square_count(bp, c1),
    )


def enumerate_small_c1(
    bp: BalancedProductComplex, bound10: Fraction, bound01: Fraction
) -> Iterator[C1Vector]:
    """All c1 with component weights strictly below the given bounds."""
    max10 = max(-1, _strict_floor(bound10))
    max01 = max(-1, _strict_floor(bound01))
    for k10 in range(0, max10 + 1):
        for s10 in itertools.combinations(range(bp.n10), k10):
            for k01 in range(0, max01 + 1):
                for s01 in itertools.combinations(range(bp.n01), k01):
                    yield C1Vector.from_supports(bp, s10, s01)


def _strict_floor(bound: Fraction) -> int:
    k = int(bound)
    return k - 1 if k == bound else k


def small_set_suite(
    bp: BalancedProductComplex,
    cert_x: ExpansionCertificate,
    cert_y: ExpansionCertificate,
    include_zero: bool = False,
) -> list[SmallSetCheck]:
    """Run the inequality on every enumerable locally minimal small c1."""
    bound10, bound01 = small_set_smallness_bounds(bp, cert_x, cert_y)
    out = []
    for c1 in enumerate_small_c1(bp, bound10, bound01):
        if c1.is_zero() and not include_zero:
            continue
        if not is_locally_minimal(c1, bp)[0]:
            continue
        out.append(small_set_ltc_check(bp, cert_x, cert_y, c1))
    return out


# ---------------------------------------------------------------------------
# the sharp example


def sharp_example(bp: BalancedProductComplex, x00: int) -> C1Vector:
    """Half-neighborhood vector at ``x00`` attaining the 1 : 1/2 norm ratio.

    Requires both degrees even.  Asserts the three defining facts: unit
    weighted norm, local minimality, and a boundary matching the explicit
    half-neighborhood square pattern of size ``w_down * w_right / 2``.
    """
    if bp.w_down % 2 or bp.w_right % 2:
        raise PreconditionViolationError(
            f"degrees (w_down={bp.w_down}, w_right={bp.w_right}) must both be even"
        )
    if not 0 <= x00 < bp.n00:
        raise InvalidParameterError(f"vertex {x00} outside V00")
    n10_all = sorted(v for (u, v) in bp.e_s0 if u == x00)
    n01_all = sorted(v for (u, v) in bp.e_0s if u == x00)
    n10 = n10_all[: bp.w_down // 2]
    n01 = n01_all[: bp.w_right // 2]
    c1 = C1Vector.from_supports(bp, n10, n01)

    assert weighted_norm(c1, bp) == 1
    assert is_locally_minimal(c1, bp)[0]

    # boundary by the explicit square-completion formula
    expected = set()
    for a in n10:
        for b in n01_all[bp.w_right // 2:]:
            expected.add(bp.complete_square(x00, a, b))
    for a in n10_all[bp.w_down // 2:]:
        for b in n01:
            expected.add(bp.complete_square(x00, a, b))
    c0 = boundary_1(bp, c1)
    if set(c0.support()) != expected:
        raise PreconditionViolationError(
            "instance is not generic enough: boundary collides outside the "
            "half-neighborhood square pattern"
        )
    assert c0.weight() == bp.w_down * bp.w_right // 2
    assert c0_weighted_norm(c0, bp) == Fraction(1, 2)
    return c1


# ---------------------------------------------------------------------------
# distance certificate


@dataclass(frozen=True)
class DistanceReport:
    bound: Fraction
    exact: int | None
    witness: BitVector | None


def distance_certificate(
    code: CodeInstance,
    bp: BalancedProductComplex,
    subgraph_cert: ExpansionCertificate,
    budget: int = DEFAULT_KERNEL_BUDGET,
) -> DistanceReport:
    """Expansion-implied lower bound on distance, with exact value if feasible.

    ``subgraph_cert`` must be an exhaustive certificate for the downward
    subgraph on (V00, V10); its cutoff times ``|V00|`` lower-bounds the
    distance whenever epsilon < 1.
    """
    if not subgraph_cert.certifies:
        raise PreconditionViolationError("distance bound needs an exhaustive certificate")
    if subgraph_cert.epsilon >= 1:
        raise PreconditionViolationError("epsilon >= 1 vacates the bound")
    bound = subgraph_cert.c * bp.n00
    basis = kernel_basis(code.h)
    exact = None
    witness = None
    if (1 << len(basis)) <= budget:
        res = min_weight_nonzero(basis, budget=budget)
        if res is not None:
            exact, witness = res
            assert Fraction(exact) >= bound
    return DistanceReport(bound=bound, exact=exact, witness=witness)
