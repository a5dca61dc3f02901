"""Dimension and entropy computations for digit-frequency level sets.

The level set ``F_p`` collects points whose digit 0 occurs with frequency
``p``. For the bases with expansion ``1 0^m 1`` its Hausdorff dimension has a
closed form, and it is attained by a Markov measure of order ``m + 1``
obtained from the walk measure with an auxiliary parameter ``q``. Both sides
are computed here so that ``dim * log(beta) == entropy`` can be checked.
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from ._validation import check_digits, check_length, parse_probability
from .beta_core import BetaSpec, _mp, family_10m1, family_ones, make_beta
from .errors import BetaShiftError, DomainError
from .measures import CylWalkMeasure, _num
from .simulation import DigitChain, sample_streams
from .words import automaton, enumerate_admissible, stream_counters

__all__ = [
    "DimReport",
    "FrequencyReport",
    "GapReport",
    "MarkovMeasure",
    "UpperBound",
    "auxiliary_q",
    "dim_level_set",
    "dim_tail_bounds",
    "dim_upper_bound",
    "entropy_gap_counter",
    "family_index",
    "frequency_simulation",
    "golden_ratio_level_set",
    "golden_section_max",
    "gth_stationary",
    "local_dim_estimate",
    "markov_entropy",
    "markov_from_mu",
    "markov_zero_frequency",
    "sample_markov",
]


def _xlogx(x):
    x = float(x)
    return 0.0 if x == 0 else x * math.log(x)


@lru_cache(maxsize=None)
def _family(m):
    return family_10m1(m)


def family_index(b):
    """``m`` when the expansion of 1 of ``b`` is ``1 0^m 1``, else None."""
    e = b.expansion1
    if e is None or not e.is_finite:
        return None
    pre = e.preperiod
    if len(pre) >= 2 and pre[0] == 1 and pre[-1] == 1 and not any(pre[1:-1]):
        return len(pre) - 2
    return None


# -- Markov measures -----------------------------------------------------------


def gth_stationary(P):
    """Stationary row vector of the stochastic matrix ``P`` by
    Grassmann-Taksar-Heyman elimination.

    Only additions, multiplications and divisions of nonnegative numbers are
    used, so Fraction input gives the exact answer and float input loses no
    accuracy to cancellation.
    """
    A = [list(row) for row in P]
    n = len(A)
    for k in range(n - 1, 0, -1):
        s = sum(A[k][:k])
        if s == 0:
            raise BetaShiftError("stationary solve is singular: the chain is not irreducible")
        for i in range(k):
            A[i][k] = A[i][k] / s
        for i in range(k):
            aik = A[i][k]
            if aik:
                row_i, row_k = A[i], A[k]
                for j in range(k):
                    row_i[j] += aik * row_k[j]
    pi = [A[0][0] * 0 + 1]
    for j in range(1, n):
        pi.append(sum(pi[i] * A[i][j] for i in range(j)))
    total = sum(pi)
    return [x / total for x in pi]


@dataclass(frozen=True)
class MarkovMeasure:
    """A stationary Markov measure of ``order`` on binary words.

    ``states`` are words of length ``order``; ``trans[i][j]`` is the
    probability of moving from ``states[i]`` to ``states[j]``, nonzero only
    when the second drops the first digit of the first and appends one.
    """

    order: int
    states: Tuple[str, ...]
    pi: Tuple[object, ...]
    trans: Tuple[Tuple[object, ...], ...]

    @property
    def exact(self):
        return isinstance(self.pi[0], Fraction)

    def index(self, u):
        try:
            return self.states.index(u)
        except ValueError:
            return None

    def append_prob(self, u, d):
        """Probability of digit ``d`` after the state word ``u``."""
        i = self.index(u)
        j = self.index(u[1:] + str(d))
        if i is None or j is None:
            return 0
        return self.trans[i][j]

    def cylinder(self, w):
        """Measure of the cylinder of ``w``."""
        word = "".join(str(d) for d in check_digits(w))
        k = self.order
        zero = self.pi[0] * 0
        if len(word) < k:
            return sum((x for s, x in zip(self.states, self.pi) if s.startswith(word)), zero)
        i = self.index(word[:k])
        if i is None:
            return zero
        value = self.pi[i]
        u = word[:k]
        for d in word[k:]:
            value = value * self.append_prob(u, d)
            if not value:
                return zero
            u = u[1:] + d
        return value

    def row_sums(self):
        return [sum(row) for row in self.trans]

    def stationarity_residual(self):
        n = len(self.states)
        worst = 0
        for j in range(n):
            v = sum(self.pi[i] * self.trans[i][j] for i in range(n)) - self.pi[j]
            worst = max(worst, abs(v))
        return worst

    def chain(self, n=None):
        """Stationary :class:`~betashift.simulation.DigitChain` of this measure."""
        k = len(self.states)
        p0 = np.ones(k)
        nx0 = np.zeros(k, dtype=np.int64)
        nx1 = np.zeros(k, dtype=np.int64)
        for i, u in enumerate(self.states):
            j0 = self.index(u[1:] + "0")
            j1 = self.index(u[1:] + "1")
            t0 = float(self.trans[i][j0]) if j0 is not None else 0.0
            t1 = float(self.trans[i][j1]) if j1 is not None else 0.0
            p0[i] = t0 / (t0 + t1)
            nx0[i] = j0 if j0 is not None else i
            nx1[i] = j1 if j1 is not None else i
        pi = np.array([float(x) for x in self.pi])
        # only appended digits are emitted; by shift invariance they are
        # already a stationary sample
        return DigitChain(p0, nx0, nx1, pi)

    def as_dict(self):
        return {
            "order": self.order,
            "states": list(self.states),
            "pi": [_num(x) for x in self.pi],
            "trans": [[_num(x) for x in row] for row in self.trans],
        }


def markov_from_mu(b, p, order=None):
    """The stationary Markov measure built from the walk measure's
    conditional probabilities.

    ``b`` must have expansion of 1 equal to ``1 0^m 1``; the default order is
    ``m + 1``. Transitions are ``mu_p[u d] / mu_p[u]`` on the admissible words
    ``u`` of that length; inadmissible words are not states.
    """
    b = make_beta(b)
    m = family_index(b)
    if m is None:
        raise DomainError("Markov synthesis needs a base with expansion of 1 of the form 1 0^m 1")
    k = m + 1 if order is None else check_length(order, name="order")
    walk = CylWalkMeasure(p, b)
    words = enumerate_admissible(b, k)
    states = tuple(str(w) for w in words)
    idx = {s: i for i, s in enumerate(states)}
    aut = automaton(b)
    zero = walk.zero
    trans = []
    for w in words:
        row = [zero] * len(states)
        mw = walk.mu(w)
        for d in (0, 1):
            if aut.step(w.state, d) is None:
                continue
            row[idx[str(w)[1:] + str(d)]] = walk.mu(w.digits + (d,)) / mw
        trans.append(tuple(row))
    pi = gth_stationary(trans)
    return MarkovMeasure(k, states, tuple(pi), tuple(trans))


def markov_entropy(mm):
    """Entropy rate ``-sum_u pi_u sum_v P_uv log P_uv`` in nats."""
    h = 0.0
    for pu, row in zip(mm.pi, mm.trans):
        h -= float(pu) * sum(_xlogx(x) for x in row)
    return h + 0.0


def markov_zero_frequency(mm):
    """Stationary mass of the cylinder ``0``."""
    return mm.cylinder("0")


@dataclass(frozen=True)
class FrequencyReport:
    mean: float
    stderr: float
    predicted: float
    z: float
    streams: int
    n: int

    def as_dict(self):
        return asdict(self)


def sample_markov(mm, n, seed=0, streams=1):
    """Stationary digit streams of ``mm``, shape ``(streams, n)``."""
    return sample_streams(mm, n, seed, streams=streams)


def frequency_simulation(mm, n, streams, seed=0):
    """Empirical frequency of the digit 0 in stationary streams, compared with
    the stationary mass of the cylinder ``0``."""
    n = check_length(n)
    streams = check_length(streams, name="streams")
    data = sample_markov(mm, n, seed, streams)
    freq = 1.0 - data.mean(axis=1)
    mean = float(freq.mean())
    se = float(freq.std(ddof=1) / math.sqrt(streams)) if streams > 1 else float("nan")
    pred = float(markov_zero_frequency(mm))
    if se > 0:
        z = (mean - pred) / se
    else:
        z = 0.0 if mean == pred else math.inf
    return FrequencyReport(mean, se, pred, z, streams, n)


# -- level sets ----------------------------------------------------------------


def auxiliary_q(p, m):
    """Walk parameter whose invariant measure has zero frequency ``p``."""
    return (m * p - m + 2 * p - 1) / (m * p - m + p)


@dataclass(frozen=True)
class DimReport:
    p: object
    q: Optional[object]
    dim: float
    entropy: float
    m: int = 0

    def as_dict(self):
        return {"p": _num(self.p), "q": _num(self.q), "dim": self.dim, "entropy": self.entropy, "m": self.m}


def dim_level_set(p, m):
    """Hausdorff dimension of ``F_p`` for the base with expansion ``1 0^m 1``.

    Zero below the smallest attainable frequency ``(m+1)/(m+2)`` and at the
    endpoints; ``entropy`` is ``dim * log(beta)``.
    """
    p = parse_probability(p, open_interval=False)
    m = check_length(m, name="m", minimum=0)
    edge = Fraction(m + 1, m + 2)
    pf = Fraction(p)
    if isinstance(p, float) and p == float(edge):
        pf = edge  # the nearest double to the endpoint stands for it
    if pf <= edge or pf == 1:
        q = auxiliary_q(p, m) if pf >= edge else None
        return DimReport(p, q, 0.0, 0.0, m)
    q = auxiliary_q(p, m)
    a = m * p - m + p
    c = m * p - m + 2 * p - 1
    h = _xlogx(a) - _xlogx(c) - _xlogx(1 - p)
    h = max(h, 0.0)
    return DimReport(p, q, h / _family(m).log, h, m)


def golden_ratio_level_set(p):
    """The golden-ratio spectrum written out directly (``m = 0``)."""
    p = parse_probability(p, open_interval=False)
    if Fraction(p) <= Fraction(1, 2):
        return 0.0
    h = _xlogx(p) - _xlogx(2 * p - 1) - _xlogx(1 - p)
    return max(h, 0.0) / _family(0).log


@dataclass(frozen=True)
class UpperBound:
    value: float
    exceeds_one: bool

    def as_dict(self):
        return asdict(self)


def _log_beta(beta):
    if isinstance(beta, BetaSpec):
        return beta.log
    b = float(beta)
    if not b > 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    return math.log(b)


def dim_upper_bound(p, beta):
    """Binary-entropy bound ``H(p) / log(beta)``, returned unclamped."""
    p = parse_probability(p, open_interval=False)
    v = -(_xlogx(p) + _xlogx(1 - p)) / _log_beta(beta)
    return UpperBound(v + 0.0, v > 1)


def dim_tail_bounds(p, beta):
    """Bounds for the sets with zero frequency at most ``p`` and at least ``p``."""
    p = parse_probability(p)
    lb = _log_beta(beta)
    low = (-_xlogx(p) - math.log(1 - float(p))) / lb
    high = (-math.log(float(p)) - _xlogx(1 - p)) / lb
    return low, high


def local_dim_estimate(stream, m, depths):
    """``log mu_p[x|n] / log |I(x|n)|`` at each requested depth ``n``."""
    digits = np.asarray(stream, dtype=np.int8).ravel()
    depths = [check_length(n, name="depth") for n in depths]
    top = max(depths)
    if top > digits.size:
        raise DomainError(f"stream has {digits.size} digits, depth {top} requested")
    c0, c1, st = stream_counters(digits[:top], m.beta)
    lb = m.beta.log
    out = []
    for n in depths:
        log_mu = m.log_mu(int(c0[n]), int(c1[n]))
        log_len = -n * lb + float(_mp.log(m.beta.y(int(st[n]))))
        out.append(log_mu / log_len)
    return np.array(out)


# -- entropy gap for the base with expansion 1110 ------------------------------


def golden_section_max(f, lo, hi, tol=1e-30):
    """Maximiser of a unimodal ``f`` on ``[lo, hi]`` at 50-digit precision."""
    ctx = _mp
    lo, hi = ctx.mpf(lo), ctx.mpf(hi)
    r = (ctx.sqrt(5) - 1) / 2
    x1 = hi - r * (hi - lo)
    x2 = lo + r * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + r * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - r * (hi - lo)
            f1 = f(x1)
    return (lo + hi) / 2


def _f_gap(a):
    ctx = _mp
    a = ctx.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else ctx.mpf(a)

    def xlx(x):
        return 0 if x == 0 else x * ctx.log(x)

    def f(x):
        return xlx(a) - xlx(a - x) - xlx(1 - a - x) - xlx(2 * x + a - 1)

    return f


@dataclass(frozen=True)
class GapReport:
    p: object
    a: object
    top: object
    b: object
    h_upper: float
    x_star: float
    f_max: float
    gap: float
    x_search: float

    def as_dict(self):
        return {k: _num(v) for k, v in asdict(self).items()}


def entropy_gap_counter(p):
    """Entropy chain for the base with expansion of 1 equal to ``1110``.

    ``a`` and ``top`` are the invariant masses of ``[0, 1/beta)`` and of the
    cylinder ``11``; ``b = 1 - a - top``. The bound ``f_a(b)`` is compared
    with the maximum of ``f_a`` at the closed-form ``x_star``; ``x_search`` is
    the same maximiser found by golden-section search.
    """
    p = parse_probability(p)
    a, top = _pseudo_golden3(p)
    b = 1 - a - top
    lo, hi = (1 - a) / 2, min(a, 1 - a)
    if not lo <= b <= hi:
        raise BetaShiftError(f"b = {b} left the bracket [{lo}, {hi}]")
    f = _f_gap(a)
    af = float(a)
    x_star = (3 - 4 * af + math.sqrt(-8 * af * af + 12 * af - 3)) / 6
    bm = _mp.mpf(b.numerator) / b.denominator if isinstance(b, Fraction) else _mp.mpf(b)
    h_upper = f(bm)
    f_max = f(_mp.mpf(x_star))
    x_search = golden_section_max(f, float(lo), float(hi))
    return GapReport(
        p, a, top, b, float(h_upper), x_star, float(f_max), float(f_max - h_upper), float(x_search)
    )


def _pseudo_golden3(p):
    from .measures import mp_pseudo_golden

    return mp_pseudo_golden(p, 3)


def counter_base():
    """The base with expansion of 1 equal to ``1110``."""
    return family_ones(3)
