"""Tests for code-level analyses, with independent brute-force oracles."""

import random
from fractions import Fraction

import pytest

from expander_ltc.analysis import (
    C1Vector,
    boundary_1,
    c0_weighted_norm,
    code_from_complex,
    distance_certificate,
    greedy_flip,
    is_locally_minimal,
    locally_minimal_distance,
    lt_profile,
    sharp_example,
    small_set_ltc_check,
    small_set_suite,
    soundness_exhaustive,
    soundness_from_lt,
    square_count,
    weighted_norm,
)
from expander_ltc.errors import (
    DegenerateCodeError,
    PreconditionViolationError,
)
from expander_ltc.f2 import BitMatrix, BitVector
from expander_ltc.graphs import BipartiteGraph, certify_expansion
from expander_ltc.groups import make_cyclic, trivial_action
from expander_ltc.products import (
    GraphAction,
    balanced_product,
    inherited_expansion,
    left_right_cayley,
)


def brute_force_soundness(h: BitMatrix):
    """Oracle: min over non-codewords of (|Hx| * n) / (m * d(x, C))."""
    n, m = h.cols, h.rows
    codewords = [
        x for x in range(1 << n) if h.mul_vec(BitVector(n, x)).bits == 0
    ]
    best = None
    for x in range(1 << n):
        syn = h.mul_vec(BitVector(n, x))
        if syn.bits == 0:
            continue
        dist = min((x ^ c).bit_count() for c in codewords)
        ratio = Fraction(syn.weight() * n, m * dist)
        if best is None or ratio < best:
            best = ratio
    return best


class TestCodeFromComplex:
    def test_z7_parameters(self):
        bp = left_right_cayley(make_cyclic(7), [1], [1, 2, 3])
        code = code_from_complex(bp)
        assert (code.n, code.m) == (7, 14)
        assert code.locality == max(bp.w_up, bp.w_left) == 3
        # every bit feeds w_down checks of the first kind and w_right of the second
        for j in range(code.n):
            col = code.h.column(j)
            low = col.bits & ((1 << bp.n10) - 1)
            assert low.bit_count() == bp.w_down == 1
            assert (col.bits >> bp.n10).bit_count() == bp.w_right == 3

    def test_k_at_least_n_minus_m(self):
        for a, b in ([1], [1, 2]), ([1, 2], [2, 3]):
            bp = left_right_cayley(make_cyclic(9), a, b)
            code = code_from_complex(bp)
            assert code.k >= code.n - code.m

    def test_rate_bound(self):
        bp = left_right_cayley(make_cyclic(8), [1, 2], [1, 3])
        code = code_from_complex(bp)
        bound = 1 - Fraction(bp.w_down, bp.w_up) - Fraction(bp.w_right, bp.w_left)
        assert code.rate >= bound


class TestSoundness:
    def test_three_bit_chain_code_matches_oracle(self):
        h = BitMatrix.from_entries([[1, 1, 0], [0, 1, 1]])
        from expander_ltc.analysis import CodeInstance

        code = CodeInstance(h=h, n=3, m=2, k=1, locality=2)
        rep = soundness_exhaustive(code)
        assert rep.s == brute_force_soundness(h)
        assert rep.ratio_of(code) == rep.s

    def test_balanced_product_instance_matches_oracle(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        code = code_from_complex(bp)
        rep = soundness_exhaustive(code)
        assert rep.s == brute_force_soundness(code.h)
        assert rep.ratio_of(code) == rep.s

    def test_degenerate_code_rejected(self):
        from expander_ltc.analysis import CodeInstance

        code = CodeInstance(h=BitMatrix(2, 4), n=4, m=2, k=4, locality=0)
        with pytest.raises(DegenerateCodeError):
            soundness_exhaustive(code)

    def test_duplicate_rows_recomputed_exactly(self):
        from expander_ltc.analysis import CodeInstance

        h = BitMatrix.from_entries([[1, 1, 0], [0, 1, 1]])
        doubled = h.vstack(h)
        code = CodeInstance(h=doubled, n=3, m=4, k=1, locality=2)
        rep = soundness_exhaustive(code)
        assert rep.s == brute_force_soundness(doubled)


class TestWeightedNorms:
    def test_zero_vector(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        assert weighted_norm(C1Vector.zero(bp), bp) == 0
        assert c0_weighted_norm(BitVector(bp.n11), bp) == 0

    def test_additivity(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        one = C1Vector.from_supports(bp, [0], [1])
        two = C1Vector.from_supports(bp, [0, 2], [1, 3])
        assert weighted_norm(two, bp) == 2 * weighted_norm(one, bp)


class TestLocalMinimality:
    def test_zero_is_minimal(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        assert is_locally_minimal(C1Vector.zero(bp), bp) == (True, None)

    def test_single_boundary_not_minimal(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        col = bp.d2.column(0)
        c1 = C1Vector.from_stacked(bp, col)
        minimal, improving = is_locally_minimal(c1, bp)
        assert not minimal
        assert improving == 0

    def test_matches_definition_brute_force(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        rng = random.Random(0)
        for _ in range(60):
            c1 = C1Vector(
                BitVector(bp.n10, rng.getrandbits(bp.n10)),
                BitVector(bp.n01, rng.getrandbits(bp.n01)),
            )
            base = weighted_norm(c1, bp)
            by_definition = all(
                weighted_norm(
                    C1Vector.from_stacked(
                        bp, c1.stacked() ^ bp.d2.column(j)
                    ),
                    bp,
                )
                >= base
                for j in range(bp.n00)
            )
            assert is_locally_minimal(c1, bp)[0] == by_definition


class TestGreedyFlip:
    def test_single_boundary_one_step(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        c1 = C1Vector.from_stacked(bp, bp.d2.column(4))
        res = greedy_flip(c1, bp)
        assert res.final.is_zero()
        assert res.flips.support() == [4]
        assert res.steps == 1

    def test_already_minimal_zero_steps(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        res = greedy_flip(C1Vector.zero(bp), bp)
        assert res.steps == 0

    def test_random_inputs_postconditions(self):
        bp = left_right_cayley(make_cyclic(7), [1, 2], [1, 3])
        rng = random.Random(3)
        for _ in range(100):
            c1 = C1Vector(
                BitVector(bp.n10, rng.getrandbits(bp.n10)),
                BitVector(bp.n01, rng.getrandbits(bp.n01)),
            )
            res = greedy_flip(c1, bp)
            assert is_locally_minimal(res.final, bp)[0]
            # syndrome preserved
            assert boundary_1(bp, res.final).bits == boundary_1(bp, c1).bits
            # final = input + boundary of the accumulated flips
            assert (
                res.final.stacked().bits
                == c1.stacked().bits ^ bp.d2.mul_vec(res.flips).bits
            )
            assert res.steps <= weighted_norm(c1, bp) * max(bp.w_down, bp.w_right)


class TestLocallyMinimalDistance:
    def test_absent_signal(self):
        # trivial-group product of single-edge graphs: the only kernel vector
        # (1, 1) is removable by flipping the lone bit, so nothing qualifies
        g = make_cyclic(1)
        e = BipartiteGraph(1, 1, [(0, 0)])
        act = GraphAction(trivial_action(g, 1), trivial_action(g, 1))
        bp = balanced_product(e, e, act, act)
        res = locally_minimal_distance(bp)
        assert res.d_lm is None
        assert res.witness is None

    def test_matches_independent_brute_force(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        res = locally_minimal_distance(bp)
        # oracle: enumerate the whole middle space, filter kernel + minimality
        best = None
        for bits in range(1, 1 << (bp.n10 + bp.n01)):
            v = BitVector(bp.n10 + bp.n01, bits)
            if bp.d1.mul_vec(v).bits:
                continue
            c1 = C1Vector.from_stacked(bp, v)
            if is_locally_minimal(c1, bp)[0]:
                w = v.weight()
                if best is None or w < best:
                    best = w
        assert res.d_lm == best


class TestLTProfile:
    def test_single_column_preimage_weight_one(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        cols = [bp.d2.column(j).bits for j in range(bp.n00)]
        assert len(set(cols)) == len(cols) and all(cols)  # distinct, nonzero
        ltp = lt_profile(bp, max_c1_weight=bp.n10 + bp.n01)
        w_col = cols[0].bit_count()
        assert all(c.bit_count() == w_col for c in cols)
        assert ltp.table[w_col] >= 1
        # a single-column image has min preimage exactly 1
        img = BitVector(bp.n10 + bp.n01, cols[0])
        # recompute: no lighter preimage than the single bit exists
        found = min(
            c2.bit_count()
            for c2 in range(1 << bp.n00)
            if bp.d2.mul_vec(BitVector(bp.n00, c2)).bits == cols[0]
        )
        assert found == 1

    def test_witnesses_realize_entries(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        ltp = lt_profile(bp, max_c1_weight=4)
        for w, (img, pre) in ltp.witnesses.items():
            assert img.weight() == w
            assert bp.d2.mul_vec(pre).bits == img.bits
            assert pre.weight() == ltp.table[w]

    def test_flip_count_bounds_preimage_weight(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        rng = random.Random(6)
        minpre = {}
        for c2 in range(1 << bp.n00):
            img = bp.d2.mul_vec(BitVector(bp.n00, c2)).bits
            w = bin(c2).count("1")
            if img not in minpre or w < minpre[img]:
                minpre[img] = w
        for _ in range(200):
            c2 = rng.getrandbits(bp.n00)
            c1 = C1Vector.from_stacked(bp, bp.d2.mul_vec(BitVector(bp.n00, c2)))
            res = greedy_flip(c1, bp)
            if res.final.is_zero():
                assert minpre[c1.stacked().bits] <= res.flips.weight()


class TestSoundnessFromLT:
    def test_formula_with_kappa_one(self):
        from expander_ltc.analysis import CodeInstance, LTProfile

        code = CodeInstance(h=BitMatrix.identity(4), n=4, m=4, k=0, locality=1)
        ltp = LTProfile(
            table={1: 1},
            witnesses={},
            kappa=Fraction(1),
            d_lt=2,
            max_weight_profiled=4,
            image_fully_enumerated=True,
        )
        assert soundness_from_lt(code, ltp) == min(
            Fraction(4, 4), Fraction(2, 4)
        )

    def test_bound_below_exact(self):
        bp = left_right_cayley(make_cyclic(5), [1], [1, 2])
        code = code_from_complex(bp)
        ltp = lt_profile(bp, max_c1_weight=code.m)
        assert soundness_from_lt(code, ltp) <= soundness_exhaustive(code).s


class TestSquareCount:
    def test_zero(self):
        bp = left_right_cayley(make_cyclic(6), [1, 2], [1, 3])
        assert square_count(bp, C1Vector.zero(bp)) == 0

    def test_sharp_example_count(self):
        bp = left_right_cayley(make_cyclic(8), [1, 2], [1, 3])
        c1 = sharp_example(bp, 0)
        assert square_count(bp, c1) == 1  # |n10| * |n01| wedges at x00

    def test_methods_agree_on_random_inputs(self):
        bp = left_right_cayley(make_cyclic(7), [1, 2], [1, 3])
        rng = random.Random(9)
        for _ in range(300):
            c1 = C1Vector(
                BitVector(bp.n10, rng.getrandbits(bp.n10)),
                BitVector(bp.n01, rng.getrandbits(bp.n01)),
            )
            square_count(bp, c1)  # internal cross-check asserts agreement


class TestSmallSetCheck:
    def _instance(self):
        bp = left_right_cayley(make_cyclic(8), [1, 2], [1, 3])
        cert_x = certify_expansion(bp.x, Fraction(1, 2))
        cert_y = certify_expansion(bp.y, Fraction(1, 2))
        return bp, cert_x, cert_y

    def test_zero_vector(self):
        bp, cx, cy = self._instance()
        res = small_set_ltc_check(bp, cx, cy, C1Vector.zero(bp))
        assert res.lhs == 0 and res.rhs == 0 and res.holds

    def test_requires_local_minimality(self):
        bp, cx, cy = self._instance()
        c1 = C1Vector.from_stacked(bp, bp.d2.column(0))
        with pytest.raises(PreconditionViolationError):
            small_set_ltc_check(bp, cx, cy, c1)

    def test_requires_exhaustive_certs(self):
        bp, cx, cy = self._instance()
        sampled = certify_expansion(bp.x, Fraction(1, 2), mode="sampled")
        with pytest.raises(PreconditionViolationError):
            small_set_ltc_check(bp, sampled, cy, C1Vector.zero(bp))

    def test_suite_all_hold(self):
        bp, cx, cy = self._instance()
        checks = small_set_suite(bp, cx, cy)
        assert checks  # the enumeration is nonempty
        assert all(c.holds for c in checks)

    def test_sharp_ratio(self):
        bp, cx, cy = self._instance()
        c1 = sharp_example(bp, 0)
        norm1 = weighted_norm(c1, bp)
        norm0 = c0_weighted_norm(boundary_1(bp, c1), bp)
        assert norm0 / norm1 == Fraction(1, 2)


class TestSharpExample:
    def test_exact_norms(self):
        bp = left_right_cayley(make_cyclic(8), [1, 2], [1, 3])
        c1 = sharp_example(bp, 3)
        assert weighted_norm(c1, bp) == 1
        assert c0_weighted_norm(boundary_1(bp, c1), bp) == Fraction(1, 2)
        assert is_locally_minimal(c1, bp)[0]

    def test_boundary_weight(self):
        bp = left_right_cayley(make_cyclic(8), [1, 2], [1, 3])
        c1 = sharp_example(bp, 0)
        assert boundary_1(bp, c1).weight() == bp.w_down * bp.w_right // 2

    def test_odd_degree_rejected(self):
        bp = left_right_cayley(make_cyclic(7), [1, 2, 4], [1, 3])
        with pytest.raises(PreconditionViolationError):
            sharp_example(bp, 0)


class TestDistanceCertificate:
    def test_exact_at_least_bound(self):
        bp = left_right_cayley(make_cyclic(7), [1, 2], [1, 3])
        code = code_from_complex(bp)
        cert = certify_expansion(bp.x, Fraction(2, 7))
        sub_cert = inherited_expansion(bp, cert, "*0")
        rep = distance_certificate(code, bp, sub_cert)
        assert rep.exact is not None
        assert Fraction(rep.exact) >= rep.bound

    def test_eps_one_rejected(self):
        from expander_ltc.graphs import ExpansionCertificate

        bp = left_right_cayley(make_cyclic(7), [1, 2], [1, 3])
        code = code_from_complex(bp)
        vacuous = ExpansionCertificate(
            c=Fraction(1, 4),
            epsilon=Fraction(1),
            w0=2,
            mode="exhaustive",
            max_checked_size=1,
        )
        with pytest.raises(PreconditionViolationError):
            distance_certificate(code, bp, vacuous)

    def test_bound_scales_linearly(self):
        bounds = {}
        for order in (6, 12):
            bp = left_right_cayley(make_cyclic(order), [1, 2], [1, 3])
            code = code_from_complex(bp)
            cert = certify_expansion(bp.x, Fraction(1, 6))
            rep = distance_certificate(
                code, bp, inherited_expansion(bp, cert, "*0")
            )
            bounds[order] = rep.bound
        assert bounds[12] == 2 * bounds[6]
