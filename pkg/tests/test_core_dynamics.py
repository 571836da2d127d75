import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planejulia.core_dynamics import (
    BracketError,
    NoPreimage,
    NonRealError,
    NonUniquePreimage,
    RangeError,
    StabilityClass,
    apply,
    apply_inverse,
    bn_sequence,
    cn_sequence,
    fib_escape,
    fixed_points,
    g_inverse_chain,
    g_map,
    h1_map,
    jacobian,
    point_json,
    scalar_maps,
    sequences,
    stability,
    three_cycle,
)

# Reference values computed with 40-digit mpmath.
A1_HALF = -0.36602540378443864676
A2_HALF = 1.3660254037844386468
THETA_EIG_HALF = (2.0367230677868401911, -0.67069766400240154430)
ALPHA_EIG_HALF = complex(-0.18301270189221932338, 0.57665566391959448824)
CYCLE_EIG_HALF = (2.9211646096066227062, -0.17116460960662270618)
BN_HALF_W3 = (2.5621778264910705273, 2.2416697508022975921, 2.0070415551619845173,
              1.8352817950650647963, 1.7095449239782780888)
Z1_CHAIN_HALF = -0.86061078570282603576

params = st.floats(min_value=-0.999, max_value=-0.001)


def sup(a, b):
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


class TestApply:
    def test_examples(self):
        assert apply((1, 1), -0.8) == pytest.approx((0.2, 1))
        for c in (-0.9, -0.5, -0.1, 0.2):
            assert apply((-1, -1), c) == (1 + c, -1)
            assert apply((0.0, 123.0), c) == (c, 0.0)

    def test_overflow_is_range_error(self):
        with pytest.raises(RangeError):
            apply((1e200, 1e200), -0.5)

    def test_inverse_examples(self):
        assert apply_inverse((5.5, 2), -0.5) == (2, 3)
        fp = fixed_points(-0.5)
        assert sup(apply_inverse(fp.theta, -0.5), fp.theta) <= 1e-15

    def test_inverse_failures(self):
        for c in (-0.9, -0.3):
            with pytest.raises(NonUniquePreimage):
                apply_inverse((c, 0.0), c)
            with pytest.raises(NoPreimage):
                apply_inverse((c + 0.5, 0.0), c)
        with pytest.raises(NoPreimage):
            apply_inverse((1.0, 1e-301), -0.5)

    @settings(max_examples=500, deadline=None)
    @given(st.floats(-50, 50), st.floats(-50, 50), params)
    def test_round_trip(self, x, y, c):
        if abs(x) <= 1e-6:
            return
        back = apply_inverse(apply((x, y), c), c)
        assert back[0] == x
        assert math.isclose(back[1], y, rel_tol=1e-9, abs_tol=1e-9 * max(1.0, abs(c / x)))

    def test_round_trip_bulk(self):
        rng = random.Random(7)
        for _ in range(10_000):
            c = rng.uniform(-1, 0)
            x = rng.choice((-1, 1)) * 10 ** rng.uniform(-6, 1.5)
            y = rng.uniform(-30, 30)
            back = apply_inverse(apply((x, y), c), c)
            err = abs(back[1] - y) / max(abs(y), abs(c / x), 1.0)
            assert back[0] == x and err <= 1e-9


class TestFixedPoints:
    def test_examples(self):
        fp = fixed_points(0.0)
        assert fp.alpha == (0.0, 0.0) and fp.theta == (1.0, 1.0)
        fp = fixed_points(0.25)
        assert fp.a1 == fp.a2 == 0.5
        fp = fixed_points(-0.5)
        assert fp.a1 == pytest.approx(A1_HALF, abs=1e-16)
        assert fp.a2 == pytest.approx(A2_HALF, abs=2e-16)
        assert sup(apply(fp.alpha, -0.5), fp.alpha) <= 1e-12

    def test_non_real(self):
        with pytest.raises(NonRealError):
            fixed_points(0.3)
        with pytest.raises(ValueError):
            fixed_points(math.nan)

    def test_vieta(self):
        rng = random.Random(1)
        for _ in range(1000):
            c = rng.uniform(-5, 0.25)
            fp = fixed_points(c)
            assert abs(fp.a1 + fp.a2 - 1) <= 1e-12
            assert abs(fp.a1 * fp.a2 - c) <= 1e-12
            assert fp.a1 <= fp.a2

    def test_point_json(self):
        assert point_json(fixed_points(0.0).theta) == {"x": 1.0, "y": 1.0}


class TestThreeCycle:
    def test_constants(self):
        cyc = three_cycle(0.0)
        assert cyc.points() == ((-1, -1), (1, -1), (-1, 1))
        cyc = three_cycle(-0.5)
        assert cyc.points() == ((-1.0, -1.0), (0.5, -1.0), (-1.0, 0.5))

    @given(params)
    def test_closure_float(self, c):
        cyc = three_cycle(c)
        z = cyc.p
        for q in (cyc.fp, cyc.f2p, cyc.p):
            z = apply(z, c)
            assert sup(z, q) <= 1e-14

    def test_closure_exact(self):
        for c in (Fraction(-1, 2), Fraction(-7, 9), Fraction(-1, 1000)):
            cyc = three_cycle(c)
            assert apply(apply(apply(cyc.p, c), c), c) == cyc.p
            assert apply(cyc.p, c) == cyc.fp


class TestStability:
    def test_theta_half(self):
        rep = stability(-0.5, "Theta")
        assert rep.cls is StabilityClass.SADDLE
        got = sorted((e.real for e in rep.eigenvalues), reverse=True)
        assert got == pytest.approx(THETA_EIG_HALF, abs=1e-14)

    def test_alpha_half(self):
        rep = stability(-0.5, "Alpha")
        assert rep.cls is StabilityClass.ATTRACTING
        assert any(abs(e - ALPHA_EIG_HALF) < 1e-14 for e in rep.eigenvalues)

    def test_alpha_indifferent_at_minus_two(self):
        rep = stability(-2.0, "Alpha")
        assert rep.cls is StabilityClass.INDIFFERENT
        targets = (cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3))
        for t in targets:
            assert min(abs(e - t) for e in rep.eigenvalues) < 1e-12

    def test_cycle(self):
        rep = stability(-0.5, "Cycle")
        lam = rep.eigenvalues
        assert (lam[0] * lam[1]).real == pytest.approx(-0.5, abs=1e-14)
        assert sorted((e.real for e in lam), reverse=True) == pytest.approx(CYCLE_EIG_HALF,
                                                                            abs=1e-13)
        assert rep.cls is StabilityClass.SADDLE

    def test_consistency_random(self):
        rng = random.Random(3)
        for _ in range(1000):
            c = rng.uniform(-1, 0.25)
            if c in (-1.0, 0.25):
                continue
            assert stability(c, "Theta").cls is StabilityClass.SADDLE
            assert stability(c, "Alpha").cls is StabilityClass.ATTRACTING

    def test_non_real(self):
        with pytest.raises(NonRealError):
            stability(1.0, "Theta")

    def test_jacobian(self):
        assert jacobian((2.0, 3.0)) == ((3.0, 2.0), (1.0, 0.0))


class TestScalarMaps:
    @given(params)
    def test_g_fixed_points(self, c):
        fp = fixed_points(c)
        assert g_map(-1.0, c) == pytest.approx(-1.0, abs=1e-15)
        for t in (-1.0, fp.a1, fp.a2):
            assert abs(g_map(t, c) - t) <= 1e-12
        assert scalar_maps("G", 0.3, c) == g_map(0.3, c)

    def test_h1_below_diagonal(self):
        c = -0.5
        a1 = fixed_points(c).a1
        lo, hi = a1 * a1, abs(a1)
        for k in range(1000):
            x = lo + (hi - lo) * k / 999
            assert h1_map(x, c) - x < 0
        assert scalar_maps("H1", 0.2, c) == h1_map(0.2, c)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            scalar_maps("Q", 0.0, -0.5)


class TestInverseChain:
    def test_first_terms(self):
        chain = g_inverse_chain(-0.5, 3)
        assert chain[0] == pytest.approx(-math.sqrt(0.5), abs=1e-16)
        assert chain[1] == pytest.approx(Z1_CHAIN_HALF, abs=1e-13)
        assert abs(g_map(chain[1], -0.5) - chain[0]) <= 1e-12

    def test_limit_and_monotone(self):
        chain = g_inverse_chain(-0.5, 200)
        assert abs(chain[200] + 1) <= 1e-6
        assert all(b <= a for a, b in zip(chain, chain[1:]))
        assert all(v >= -1 for v in chain)

    def test_bracket_error(self):
        with pytest.raises(BracketError):
            g_inverse_chain(0.1, 3)


class TestSequences:
    def test_cn(self):
        assert cn_sequence(-0.5, 3) == [-0.5, -0.25, -0.4375, -0.30859375]
        cs = cn_sequence(-0.5, 3)
        a1 = fixed_points(-0.5).a1
        assert cs[0] < cs[2] < a1 < cs[3] < cs[1] < 0

    def test_bn(self):
        got = bn_sequence(-0.5, 3.0, 5)
        assert got == pytest.approx(BN_HALF_W3, abs=1e-14)
        long = bn_sequence(-0.5, 3.0, 200)
        assert all(b < a for a, b in zip(long[:40], long[1:40]))
        assert all(b <= a for a, b in zip(long, long[1:]))
        assert long[-1] == pytest.approx(A2_HALF, abs=1e-12)

    def test_bn_closed_form(self):
        c, w = -0.7, 4.0
        a2 = fixed_points(c).a2
        for n, b in enumerate(bn_sequence(c, w, 8), 1):
            closed = w / a2 ** n - (c / a2 ** n) * sum(a2 ** i for i in range(n))
            assert b == pytest.approx(closed, rel=1e-14)

    def test_fib_escape(self):
        assert fib_escape(-0.9) == 1
        for k in range(1, 10):
            c = -k / 10
            n = fib_escape(c)
            fib = [1, 2]
            while len(fib) < n + 1:
                fib.append(fib[-1] + fib[-2])
            assert (1 + c) ** fib[n - 1] + c < 0
            if n > 1:
                assert (1 + c) ** fib[n - 2] + c >= 0

    def test_dispatch(self):
        assert sequences("cn", -0.5, 1) == [-0.5, -0.25]
        assert sequences("fib", -0.9) == 1
        with pytest.raises(ValueError):
            sequences("bn", -0.5, 2)
        with pytest.raises(ValueError):
            sequences("zz", -0.5)
