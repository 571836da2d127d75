import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from planejulia import _interval as iv
from planejulia.core_dynamics import apply, fixed_points
from planejulia.interval_certifier import (
    CertifyOptions,
    IBox,
    Interval,
    PreconditionError,
    Status,
    certify_claim,
    certify_disjoint,
    certify_inclusion,
    certify_r0_exclusion,
    certify_range,
    certify_suite,
    f_image,
    literal_wall_claim,
    r0_threshold,
    report_lines,
    shape_bounds,
    suite_claims,
)
from planejulia.regions import RegionId

R = RegionId
WIDE = (-0.9, -0.1)
QUICK = CertifyOptions(max_depth=10)


class TestInterval:
    def test_validation(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)
        with pytest.raises(ValueError):
            Interval(math.nan, 0.0)

    def test_arithmetic_encloses(self):
        rng = random.Random(0)
        for _ in range(2000):
            a = sorted((rng.uniform(-3, 3), rng.uniform(-3, 3)))
            b = sorted((rng.uniform(-3, 3), rng.uniform(-3, 3)))
            A, B = Interval(*a), Interval(*b)
            x, y = rng.uniform(*a), rng.uniform(*b)
            assert (A + B).contains(x + y)
            assert (A - B).contains(x - y)
            assert (A * B).contains(x * y)
            assert (-A).contains(-x)

    @given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6),
           st.floats(-1e6, 1e6))
    def test_exact_enclosure(self, a, b, u, v):
        A, B = Interval(*sorted((a, b))), Interval(*sorted((u, v)))
        for op, fop in ((iv.add, lambda p, q: p + q), (iv.sub, lambda p, q: p - q),
                        (iv.mul, lambda p, q: p * q)):
            lo, hi = op(A.pair, B.pair)
            for p in (A.lo, A.hi):
                for q in (B.lo, B.hi):
                    exact = fop(Fraction(p), Fraction(q))
                    assert Fraction(lo) <= exact <= Fraction(hi)

    def test_exact_results_stay_points(self):
        assert iv.mul((1.0, 1.0), (0.2, 0.2)) == (0.2, 0.2)
        assert iv.add((0.5, 0.5), (0.25, 0.25)) == (0.75, 0.75)

    def test_outward_rounding(self):
        s = Interval.point(0.1) + Interval.point(0.2)
        assert Fraction(s.lo) < Fraction(0.1) + Fraction(0.2) < Fraction(s.hi)
        assert s.hi == math.nextafter(s.lo, 1.0)

    def test_zero_kills_infinity(self):
        assert iv.mul((0.0, 0.0), (1.0, math.inf)) == (0.0, 0.0)

    def test_json(self):
        assert Interval(-math.inf, 1.0).to_json() == ["-inf", 1.0]


class TestImage:
    def test_examples(self):
        img = f_image(IBox.from_bounds(1, 2, 1, 2), -0.5)
        assert img.xi.lo <= 0.5 and img.xi.hi >= 3.5
        assert img.xi.lo == pytest.approx(0.5, abs=1e-15)
        assert img.xi.hi == pytest.approx(3.5, abs=2e-15)
        assert img.yi == Interval(1, 2)
        pt = f_image(IBox.from_bounds(1, 1, 1, 1), -0.8)
        z = apply((1.0, 1.0), -0.8)
        assert pt.contains(z)
        assert pt.xi.hi - pt.xi.lo <= math.ulp(0.2)
        img = f_image(IBox.from_bounds(-1, 0, 0, 0.5), Interval(-0.9, -0.1))
        assert img.xi.lo == pytest.approx(-1.4, abs=1e-15)
        assert img.xi.hi == pytest.approx(-0.1, abs=1e-15)
        assert img.yi == Interval(-1, 0)

    def test_enclosure_soundness(self):
        rng = np.random.default_rng(11)
        n = 100_000
        x = rng.uniform(-10, 10, n)
        y = rng.uniform(-10, 10, n)
        c = rng.uniform(-1, 0, n)
        wx = rng.exponential(1.0, (n, 2))
        wy = rng.exponential(1.0, (n, 2))
        for k in range(n):
            box = IBox.from_bounds(x[k] - wx[k, 0], x[k] + wx[k, 1], y[k] - wy[k, 0],
                                   y[k] + wy[k, 1])
            assert f_image(box, Interval(c[k], c[k])).contains(apply((x[k], y[k]), c[k]))

    def test_sampled_hull(self):
        box = IBox.from_bounds(-1, 0, 0, 0.5)
        img = f_image(box, Interval(-0.9, -0.1))
        rng = np.random.default_rng(2)
        xs, ys = rng.uniform(-1, 0, 100_000), rng.uniform(0, 0.5, 100_000)
        cs = rng.uniform(-0.9, -0.1, 100_000)
        u = xs * ys + cs
        assert img.xi.lo <= u.min() and u.max() <= img.xi.hi

    def test_monotone_refinement(self):
        rng = random.Random(4)
        for _ in range(500):
            x0, y0 = rng.uniform(-3, 3), rng.uniform(-3, 3)
            w, h = rng.uniform(0, 2), rng.uniform(0, 2)
            parent = f_image(IBox.from_bounds(x0, x0 + w, y0, y0 + h), -0.4)
            for half in (IBox.from_bounds(x0, x0 + w / 2, y0, y0 + h),
                         IBox.from_bounds(x0 + w / 2, x0 + w, y0, y0 + h)):
                img = f_image(half, -0.4)
                assert parent.xi.lo <= img.xi.lo and img.xi.hi <= parent.xi.hi


class TestInclusion:
    def test_r1_into_r2(self):
        cert = certify_inclusion(R.R1, [R.R2], WIDE, CertifyOptions(max_depth=20))
        assert cert.status is Status.CERTIFIED

    def test_l_tail(self):
        cert = certify_inclusion(R.L, [R.L], WIDE)
        assert cert.certified
        names = [p.claim for p in cert.parts]
        assert {n.split("/", 1)[1] for n in names} == {"tail:x+", "tail:y+", "tail:x+y+"}
        assert all(p.certified for p in cert.parts)

    def test_r0_into_r2_fails(self):
        cert = certify_inclusion(R.R0, [R.R2], -0.5)
        assert cert.status is Status.FAILED
        a2 = fixed_points(-0.5).a2
        mid = cert.counterexample.midpoint()
        assert 0.0 <= mid[0] <= 0.5 and 0.0 <= mid[1] <= a2
        img = apply(mid, cert.counterexample_c)
        assert not (-1 <= img[0] <= 0 and -1 <= img[1] <= 0)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            certify_inclusion(R.Y, [R.Y], (0.01, 0.02))
        with pytest.raises(PreconditionError):
            certify_inclusion(R.Y, [R.Y], (-0.2, -0.3))

    def test_json(self):
        line = certify_inclusion(R.Y, [R.Y], (-0.6, -0.4), claim_id="trap").to_json()
        assert line == {"claim": "trap", "status": "Certified", "depth": 0, "c": [-0.6, -0.4]}
        bad = certify_inclusion(R.R0, [R.R2], -0.5).to_json()
        assert set(bad["counterexample"]) == {"x", "y"}

    def test_deterministic(self):
        a = certify_inclusion(R.R0, [R.R2], (-0.7, -0.3))
        b = certify_inclusion(R.R0, [R.R2], (-0.7, -0.3))
        assert a == b


class TestDisjoint:
    def test_examples(self):
        assert certify_disjoint(R.M, R.A, WIDE).certified
        assert certify_disjoint(R.Y, R.L, WIDE).certified
        cert = certify_disjoint(R.R0, R.R0, -0.1)
        assert cert.status is Status.FAILED

    def test_iterated_r0(self):
        k, certs = certify_r0_exclusion(-0.3, extra=2)
        assert k == 4
        assert [c.claim for c in certs] == ["R0-x-R0@8", "R0-x-R0@9", "R0-x-R0@10"]
        assert all(c.certified for c in certs)
        early = certify_disjoint(R.R0, R.R0, -0.3, QUICK, steps=1, interior=False)
        assert early.status is Status.FAILED


class TestThreshold:
    def test_values(self):
        assert r0_threshold(-0.3) == 4
        assert r0_threshold(-0.6) == 1

    @pytest.mark.parametrize("c", [-0.95, -0.6, -0.3, -0.1, -0.02])
    def test_matches_float_formula(self, c):
        a2 = fixed_points(c).a2

        def lhs(n):
            return (-c / a2 ** n) * sum(a2 ** i for i in range(n))

        k = r0_threshold(c)
        assert lhs(k) > 1 + c
        if k > 1:
            assert lhs(k - 1) <= 1 + c + 1e-12

    def test_interval_threshold_covers_endpoints(self):
        k = r0_threshold((-0.31, -0.29))
        assert k >= max(r0_threshold(-0.31), r0_threshold(-0.29))


class TestSuite:
    def test_corpus_shape(self):
        claims = suite_claims()
        assert len(claims) == 42
        ids = [c.claim_id for c in claims]
        assert len(set(ids)) == 42
        assert sum(i.startswith("inv.") for i in ids) == 17
        assert sum(i.startswith("AH.") for i in ids) == 9

    def test_half(self):
        certs = certify_suite((-0.51, -0.49))
        assert all(c.certified for c in certs)
        assert max(c.max_depth_used for c in certs) <= 16

    def test_boundary_stress(self):
        assert all(c.certified for c in certify_suite((-0.99, -0.98)))

    def test_refuses_outside_regime(self):
        with pytest.raises(PreconditionError):
            certify_suite((0.01, 0.02))

    def test_literal_wall_is_false(self):
        # The violation sits in B near y = 1; a small cut-off keeps B's core short
        # so longest-side bisection reaches it quickly.
        cert = certify_claim(literal_wall_claim(), (-0.6, -0.4), CertifyOptions(r_max=10.0))
        assert cert.status is Status.FAILED

    def test_range_workers_agree(self):
        one = certify_range(-0.6, -0.4, pieces=4, workers=1)
        many = certify_range(-0.6, -0.4, pieces=4, workers=2)
        assert report_lines(one) == report_lines(many)
        assert [c.c_interval.lo for c in one[::42]] == pytest.approx([-0.6, -0.55, -0.5, -0.45])


# --- soundness by sampling -------------------------------------------------

def _members(claim):
    if claim.kind == "family":
        return [("disjoint", s, (a,)) for s, a in claim.members]
    return [(claim.kind, claim.source, tuple(claim.targets))]


def _sample(bounds, n, rng, cap=1e3):
    x0, x1, y0, y1 = (max(min(v, cap), -cap) for v in bounds)
    return rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)


@pytest.mark.parametrize("claim", suite_claims(), ids=lambda c: c.claim_id)
def test_certified_claims_survive_sampling(claim):
    c_lo, c_hi = -0.95, -0.05
    assert certify_claim(claim, (c_lo, c_hi)).certified
    rng = np.random.default_rng(abs(hash(claim.claim_id)) % 2**32)
    per_c = 10_000
    for c in np.linspace(c_lo, c_hi, 10):
        for kind, src, targets in _members(claim):
            xs, ys = _sample(shape_bounds(src, c), per_c, rng)
            u, v = xs * ys + c, xs
            tb = [shape_bounds(t, c) for t in targets]
            eps = 1e-12
            if kind == "inclusion":
                ok = np.zeros(per_c, dtype=bool)
                for x0, x1, y0, y1 in tb:
                    ok |= (u >= x0 - eps) & (u <= x1 + eps) & (v >= y0 - eps) & (v <= y1 + eps)
                assert ok.all(), (src, c)
            else:
                for x0, x1, y0, y1 in tb:
                    hit = (u > x0 + eps) & (u < x1 - eps) & (v > y0 + eps) & (v < y1 - eps)
                    assert not hit.any(), (src, targets, c)


MUTANTS = [
    ("inclusion", R.R0, (R.R0,)),
    ("inclusion", R.A, (R.B, R.R0, R.R1, R.H1)),
    ("inclusion", R.H2, (R.B, R.A)),
    ("inclusion", R.QR, (R.QS,)),
    ("inclusion", R.E, (R.R2, R.G)),
    ("inclusion", R.Y, (R.QU,)),
    ("inclusion", R.P, (R.N,)),
    ("disjoint", R.H2, (R.A,)),
    ("disjoint", R.F, (R.C,)),
    ("disjoint", R.R2, (R.R3,)),
]


@pytest.mark.parametrize("kind,src,targets", MUTANTS, ids=lambda v: str(v))
def test_mutated_claims_never_certify(kind, src, targets):
    run = certify_inclusion if kind == "inclusion" else certify_disjoint
    arg = list(targets) if kind == "inclusion" else targets[0]
    cert = run(src, arg, (-0.7, -0.3), QUICK)
    assert cert.status is not Status.CERTIFIED


def test_failed_counterexamples_are_honest():
    for kind, src, targets in MUTANTS:
        run = certify_inclusion if kind == "inclusion" else certify_disjoint
        arg = list(targets) if kind == "inclusion" else targets[0]
        cert = run(src, arg, (-0.7, -0.3), QUICK)
        if cert.status is not Status.FAILED:
            continue
        c = cert.counterexample_c
        u, v = apply(cert.counterexample.midpoint(), c)
        boxes = [shape_bounds(t, c) for t in targets]
        if kind == "inclusion":
            assert not any(x0 <= u <= x1 and y0 <= v <= y1 for x0, x1, y0, y1 in boxes)
        else:
            assert any(x0 < u < x1 and y0 < v < y1 for x0, x1, y0, y1 in boxes)
