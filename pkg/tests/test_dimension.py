import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betashift import beta_from_expansion, family_10m1, golden_ratio
from betashift.dimension import (
    MarkovMeasure,
    auxiliary_q,
    counter_base,
    dim_level_set,
    dim_tail_bounds,
    dim_upper_bound,
    entropy_gap_counter,
    family_index,
    frequency_simulation,
    golden_ratio_level_set,
    golden_section_max,
    gth_stationary,
    local_dim_estimate,
    markov_entropy,
    markov_from_mu,
    markov_zero_frequency,
    sample_markov,
)
from betashift.errors import DomainError
from betashift.measures import CylWalkMeasure, cesaro_mp, mp_zero_interval
from betashift.verify import markov_identity_holds
from betashift.words import enumerate_admissible, is_admissible

LOG_GOLDEN = math.log((1 + math.sqrt(5)) / 2)

# Frozen from an independent 40-digit mpmath root of f_a' at a = 4/7.
X_STAR_HALF = 0.30500594466444415
GAP_HALF = 0.0065440472163202447


def eig_stationary(P):
    """Left Perron vector from numpy's eigensolver (oracle for GTH)."""
    P = np.asarray(P, dtype=float)
    vals, vecs = np.linalg.eig(P.T)
    v = np.real(vecs[:, np.argmin(abs(vals - 1))])
    return v / v.sum()


def binary_entropy(p):
    return -sum(x * math.log(x) for x in (p, 1 - p) if x > 0)


class TestStationary:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**31))
    def test_gth_matches_eigenvector(self, n, seed):
        rng = np.random.default_rng(seed)
        P = rng.random((n, n)) + 0.01
        P /= P.sum(axis=1, keepdims=True)
        assert np.allclose(gth_stationary(P.tolist()), eig_stationary(P), atol=1e-12)

    def test_gth_exact(self):
        P = [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1), Fraction(0)]]
        assert gth_stationary(P) == [Fraction(2, 3), Fraction(1, 3)]

    def test_gth_reducible(self):
        with pytest.raises(Exception):
            gth_stationary([[1.0, 0.0], [0.0, 1.0]])


class TestMarkovFromMu:
    def test_golden_half(self, golden):
        mm = markov_from_mu(golden, Fraction(1, 2))
        assert mm.states == ("0", "1")
        assert mm.trans == ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1), Fraction(0)))
        assert mm.pi == (Fraction(2, 3), Fraction(1, 3))

    def test_m1_chain(self, fam1):
        mm = markov_from_mu(fam1, Fraction(2, 5))
        assert mm.order == 2
        assert mm.states == ("00", "01", "10")
        assert mm.pi == (Fraction(5, 11), Fraction(3, 11), Fraction(3, 11))
        # "01" and "10" force the next digit
        assert mm.trans[1] == (0, 0, 1) and mm.trans[2] == (1, 0, 0)

    @settings(max_examples=30, deadline=None)
    @given(st.fractions(Fraction(1, 50), Fraction(49, 50)))
    def test_golden_zero_mass(self, p):
        mm = markov_from_mu(golden_ratio(), p)
        assert mm.pi[0] == 1 / (2 - p) == mp_zero_interval(p, 0)

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_stochastic_and_stationary(self, m):
        mm = markov_from_mu(family_10m1(m), Fraction(1, 3))
        assert all(s == 1 for s in mm.row_sums())
        assert mm.stationarity_residual() == 0
        assert mm.pi == tuple(gth_stationary([list(r) for r in mm.trans]))
        assert np.allclose([float(x) for x in mm.pi], eig_stationary([[float(x) for x in r] for r in mm.trans]))

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_overlap_and_admissibility(self, m):
        b = family_10m1(m)
        mm = markov_from_mu(b, Fraction(1, 3))
        for i, u in enumerate(mm.states):
            for j, v in enumerate(mm.states):
                if mm.trans[i][j]:
                    assert v[:-1] == u[1:]
                    assert is_admissible(u + v[-1], b)

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_linear_relations(self, m):
        p = Fraction(2, 5)
        mm = markov_from_mu(family_10m1(m), p)
        a = mp_zero_interval(p, m)
        for k in range(1, m + 3):
            assert mm.cylinder("0" * k) == k * a - k + 1
        for i in range(m + 2):
            for j in range(m + 2):
                assert mm.cylinder("0" * i + "1" + "0" * j) == 1 - a

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_markov_condition(self, m):
        mm = markov_from_mu(family_10m1(m), Fraction(2, 5))
        assert markov_identity_holds(mm.cylinder, m + 1, m + 7)

    @pytest.mark.parametrize("m", [0, 1])
    def test_matches_cesaro_limit(self, m):
        b = family_10m1(m)
        p = Fraction(1, 3)
        mm = markov_from_mu(b, p)
        mu = CylWalkMeasure(p, b)
        for n in range(1, m + 3):
            for w in enumerate_admissible(b, n):
                est = float(cesaro_mp(mu, w, 4000).value)
                assert abs(est - float(mm.cylinder(w.digits))) < 2e-3

    def test_cylinder_is_consistent(self, fam2):
        mm = markov_from_mu(fam2, Fraction(1, 4))
        for n in range(1, 8):
            assert sum(mm.cylinder(w.digits) for w in enumerate_admissible(fam2, n)) == 1

    def test_float_mode(self, fam1):
        mm = markov_from_mu(fam1, 0.4)
        assert not mm.exact
        assert sum(mm.pi) == pytest.approx(1.0)

    def test_family_index(self):
        assert family_index(family_10m1(2)) == 2
        assert family_index(golden_ratio()) == 0
        with pytest.raises(DomainError):
            markov_from_mu(beta_from_expansion("1110"), 0.5)

    def test_as_dict(self, golden):
        d = markov_from_mu(golden, Fraction(1, 2)).as_dict()
        assert d["order"] == 1 and d["states"] == ["0", "1"]


class TestEntropy:
    def test_golden_half(self, golden):
        h = markov_entropy(markov_from_mu(golden, Fraction(1, 2)))
        assert h == pytest.approx(math.log(2) / 1.5, abs=1e-15)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.9])
    def test_golden_formula(self, golden, p):
        h = markov_entropy(markov_from_mu(golden, p))
        assert h == pytest.approx(binary_entropy(p) / (2 - p), abs=1e-14)

    def test_deterministic_chain(self):
        mm = MarkovMeasure(1, ("0", "1"), (Fraction(1, 2), Fraction(1, 2)), ((0, 1), (1, 0)))
        assert markov_entropy(mm) == 0

    def test_variational_identity(self, golden):
        h = markov_entropy(markov_from_mu(golden, Fraction(2, 3)))
        assert h == pytest.approx(0.4773856262211096, abs=1e-12)
        assert abs(h / LOG_GOLDEN - dim_level_set(0.75, 0).dim) < 1e-10

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_zero_frequency(self, m):
        p = Fraction(4, 5)
        mm = markov_from_mu(family_10m1(m), auxiliary_q(p, m))
        assert markov_zero_frequency(mm) == p


class TestLevelSets:
    def test_examples(self):
        r = dim_level_set(0.75, 0)
        assert r.dim == pytest.approx(0.99205, abs=1e-4)
        assert r.q == pytest.approx(2 / 3, abs=1e-15)
        assert auxiliary_q(Fraction(3, 4), 0) == Fraction(2, 3)
        assert dim_level_set(Fraction(1, 2), 0).dim == 0
        assert dim_level_set(1, 0).dim == 0

    @pytest.mark.parametrize("m", [0, 1, 2, 3])
    def test_endpoints_exact(self, m):
        assert dim_level_set(Fraction(m + 1, m + 2), m).dim == 0.0
        assert dim_level_set((m + 1) / (m + 2), m).dim == 0.0
        assert dim_level_set(1, m).dim == 0.0
        assert dim_level_set(1.0, m).dim == 0.0

    def test_below_spectrum(self):
        r = dim_level_set(0.3, 0)
        assert r.dim == 0 and r.q is None

    def test_golden_formula(self):
        for i in range(1, 50):
            p = 0.5 + i / 100
            assert abs(dim_level_set(p, 0).dim - golden_ratio_level_set(p)) < 1e-12

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_bounded_and_peak(self, m):
        lo = (m + 1) / (m + 2)
        ps = np.linspace(lo, 1, 402)[1:-1]
        dims = [dim_level_set(float(p), m).dim for p in ps]
        assert all(0 < d <= 1 + 1e-12 for d in dims)
        # the peak is the full shift's dimension, attained at the Parry frequency
        assert max(dims) == pytest.approx(1, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            dim_level_set(1.5, 0)


class TestBounds:
    def test_upper_examples(self, golden):
        ub = dim_upper_bound(0.5, golden)
        assert ub.value == pytest.approx(math.log(2) / LOG_GOLDEN)
        assert ub.value == pytest.approx(1.4404, abs=1e-4)
        assert ub.exceeds_one
        assert dim_upper_bound(0, golden).value == 0

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_dominance(self, m):
        b = family_10m1(m)
        lo = (m + 1) / (m + 2)
        for p in np.linspace(lo, 1, 27)[1:-1]:
            assert dim_level_set(float(p), m).dim <= dim_upper_bound(float(p), b).value

    def test_tail_bounds(self, golden):
        low, high = dim_tail_bounds(0.5, golden)
        expect = (math.log(2) + 0.5 * math.log(2)) / LOG_GOLDEN
        assert low == pytest.approx(expect) and high == pytest.approx(expect)
        assert dim_tail_bounds(1e-9, golden)[0] < 1e-6
        assert dim_tail_bounds(1 - 1e-9, golden)[1] < 1e-6
        with pytest.raises(DomainError):
            dim_tail_bounds(0, golden)

    def test_numeric_beta(self):
        assert dim_upper_bound(0.5, 2.0).value == pytest.approx(1.0)


class TestLocalDimension:
    def test_all_zero_stream(self, golden):
        for p in (0.2, 0.7):
            r = local_dim_estimate(np.zeros(1000, dtype=np.int8), CylWalkMeasure(p, golden), [10, 1000])
            assert r == pytest.approx([-math.log(p) / LOG_GOLDEN] * 2, rel=1e-12)

    def test_one_then_zeros(self, golden):
        p = 0.3
        x = np.zeros(5000, dtype=np.int8)
        x[0] = 1
        r = local_dim_estimate(x, CylWalkMeasure(p, golden), [5000])
        assert r[0] == pytest.approx(-math.log(p) / LOG_GOLDEN, rel=1e-3)

    def test_too_short(self, golden):
        with pytest.raises(DomainError):
            local_dim_estimate([0, 0], CylWalkMeasure(0.5, golden), [5])

    def test_markov_stream_converges(self, golden):
        mm = markov_from_mu(golden, Fraction(2, 3))
        x = sample_markov(mm, 200_000, seed=3)[0]
        # the walk with the auxiliary parameter q = 2/3 carries the level set
        r = local_dim_estimate(x, CylWalkMeasure(Fraction(2, 3), golden), [200_000])
        assert abs(r[0] - dim_level_set(0.75, 0).dim) < 2e-2


class TestFrequency:
    def test_golden(self, golden):
        rep = frequency_simulation(markov_from_mu(golden, Fraction(2, 3)), 100_000, 16, seed=1)
        assert rep.predicted == 0.75
        assert abs(rep.z) < 4

    def test_m1(self, fam1):
        p = Fraction(4, 5)
        rep = frequency_simulation(markov_from_mu(fam1, auxiliary_q(p, 1)), 100_000, 16, seed=2)
        assert rep.predicted == pytest.approx(0.8)
        assert abs(rep.z) < 4

    def test_all_zero_chain(self):
        mm = MarkovMeasure(1, ("0", "1"), (Fraction(1), Fraction(0)), ((1, 0), (1, 0)))
        rep = frequency_simulation(mm, 1000, 4)
        assert rep.mean == 1.0 and rep.z == 0

    def test_samples_admissible(self, fam2):
        mm = markov_from_mu(fam2, 0.5)
        for x in sample_markov(mm, 3000, seed=4, streams=3):
            assert is_admissible(tuple(x.tolist()), fam2)


class TestEntropyGap:
    def test_half(self):
        g = entropy_gap_counter(Fraction(1, 2))
        assert (g.a, g.top, g.b) == (Fraction(4, 7), Fraction(1, 7), Fraction(2, 7))
        assert g.x_star == pytest.approx(X_STAR_HALF, abs=1e-15)
        assert g.x_star == pytest.approx((3 - 16 / 7 + math.sqrt(61) / 7) / 6, abs=1e-15)
        assert g.gap == pytest.approx(GAP_HALF, rel=1e-12)
        assert abs(g.x_search - g.x_star) < 1e-8

    def test_grid(self):
        for i in range(1, 100):
            g = entropy_gap_counter(Fraction(i, 100))
            assert g.a >= Fraction(1, 3)
            assert (1 - g.a) / 2 <= g.b <= min(g.a, 1 - g.a)
            assert g.b != g.x_star
            assert g.gap > 0
            assert abs(g.x_search - g.x_star) < 1e-8

    def test_gap_shrinks_near_one(self):
        gaps = [entropy_gap_counter(Fraction(i, 100)).gap for i in range(90, 100)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_counter_base(self):
        b = counter_base()
        assert b.finite_length == 3
        assert b.value == pytest.approx(1.839286755214161, abs=1e-14)

    def test_golden_section(self):
        x = golden_section_max(lambda t: -(t - 0.3) ** 2, 0, 1)
        assert abs(float(x) - 0.3) < 1e-20

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_gap_counter(1)
