import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betashift import beta_from_value, family_10m1
from betashift.dimension import markov_from_mu
from betashift.errors import DomainError, UndecidedError
from betashift.measures import CylWalkMeasure
from betashift.simulation import (
    DigitChain,
    SimStream,
    _initial_state,
    _sample_general,
    make_generator,
    sample_chain,
    sample_streams,
)
from betashift.words import is_admissible


def general(chain, n, seed, sid=0):
    gen = make_generator(seed, sid)
    return _sample_general(chain, _initial_state(chain, gen), n, gen)


class TestGenerators:
    def test_reproducible(self):
        a = make_generator(5, 3).random(4)
        b = make_generator(5, 3).random(4)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        assert not np.array_equal(make_generator(5, 0).random(4), make_generator(5, 1).random(4))
        assert not np.array_equal(make_generator(5, 0).random(4), make_generator(6, 0).random(4))

    def test_philox(self):
        assert isinstance(make_generator(0).bit_generator, np.random.Philox)


class TestBlockPath:
    @pytest.mark.parametrize("m", [0, 1, 2, 3])
    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32), n=st.integers(1, 3000), p=st.floats(0.05, 0.95))
    def test_matches_general_loop(self, m, seed, n, p):
        chain = CylWalkMeasure(p, family_10m1(m)).chain(n)
        assert chain.random_states.size == 1
        fast = sample_chain(chain, n, make_generator(seed, 0))
        assert np.array_equal(fast, general(chain, n, seed))

    def test_markov_chain_matches_general_loop(self):
        mm = markov_from_mu(family_10m1(1), 0.7)
        chain = mm.chain(5000)
        assert np.array_equal(sample_chain(chain, 5000, make_generator(4, 2)), general(chain, 5000, 4, 2))

    def test_long_stream_crosses_chunks(self):
        chain = CylWalkMeasure(0.5, family_10m1(0)).chain(200_000)
        assert np.array_equal(sample_chain(chain, 200_000, make_generator(1)), general(chain, 200_000, 1))


class TestStreams:
    def test_independent_of_batching(self, golden):
        mu = CylWalkMeasure(0.4, golden)
        together = sample_streams(mu, 500, seed=7, streams=6)
        for sid in range(6):
            alone = sample_streams(mu, 500, seed=7, stream_ids=[sid])[0]
            assert np.array_equal(together[sid], alone)
        reordered = sample_streams(mu, 500, seed=7, stream_ids=[5, 2])
        assert np.array_equal(reordered[0], together[5])
        assert np.array_equal(reordered[1], together[2])

    def test_prefix_stable(self, golden):
        s = SimStream(3, 1, CylWalkMeasure(0.4, golden))
        assert np.array_equal(s.digits(1000)[:300], s.digits(300))

    def test_empty(self, golden):
        mu = CylWalkMeasure(0.4, golden)
        assert sample_streams(mu, 10, 0, stream_ids=[]).shape == (0, 10)
        assert sample_chain(mu.chain(1), 0, make_generator(0)).size == 0

    @pytest.mark.parametrize("m", [0, 2])
    def test_samples_admissible(self, m):
        b = family_10m1(m)
        for x in sample_streams(CylWalkMeasure(0.3, b), 2000, seed=1, streams=3):
            assert is_admissible(tuple(x.tolist()), b)

    def test_zero_frequency_of_walk(self, golden):
        # the walk from a full state chooses 0 w.p. p at every random step,
        # and each 1 is followed by a forced 0, so the long-run zero frequency
        # is 1/(2 - p); the streams are i.i.d., so a 4-sigma band applies
        p = 0.3
        data = sample_streams(CylWalkMeasure(p, golden), 50_000, seed=2, streams=16)
        freq = 1 - data.mean(axis=1)
        se = freq.std(ddof=1) / 4
        assert abs(freq.mean() - 1 / (2 - p)) < 4 * se + 1e-4


class TestChains:
    def test_deterministic_chain(self):
        chain = DigitChain([1.0, 0.0], [0, 0], [1, 0], 1)
        out = sample_chain(chain, 6, make_generator(0))
        assert out.tolist() == [1, 0, 0, 0, 0, 0]

    def test_forced_cycle(self):
        chain = DigitChain([0.0, 1.0], [0, 0], [1, 1], 0)
        assert sample_chain(chain, 5, make_generator(0)).tolist() == [1, 0, 1, 0, 1]

    def test_bad_probabilities(self):
        with pytest.raises(DomainError):
            DigitChain([1.5], [0], [0])

    def test_random_initial_vector(self):
        chain = DigitChain([1.0, 0.0], [0, 0], [1, 1], np.array([0.25, 0.75]))
        firsts = [sample_chain(chain, 1, make_generator(9, i))[0] for i in range(4000)]
        assert abs(np.mean(firsts) - 0.75) < 4 * (0.75 * 0.25 / 4000) ** 0.5

    def test_truncated_base_raises(self):
        # 1.8 has an infinite expansion; a walk may reach the unknown depth
        b = beta_from_value("1.8", depth=8)
        mu = CylWalkMeasure(0.05, b)
        with pytest.raises(UndecidedError):
            for sid in range(50):
                sample_streams(mu, 400, seed=0, stream_ids=[sid])
