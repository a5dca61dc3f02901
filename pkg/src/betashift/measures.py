"""The random-walk cylinder measure and what is built from it.

The walk reads digits left to right: where a 1 is admissible it emits 0 with
probability ``p`` and 1 otherwise; where a 1 is forbidden it emits 0. The
measure of a cylinder is therefore ``p**N0(w) * (1-p)**N1(w)``.

Since the walk is a Markov chain on follower states, the pushed-forward
measure ``sigma^k mu[w]`` equals ``sum_t P(state t after k steps) * mu_t[w]``
where ``mu_t`` starts the walk in state ``t``. That is how shifted measures
and Cesaro averages are computed here; summing over all admissible prefixes
is kept as a second route (``method="enumerate"``).
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from ._validation import ENUMERATION_GUARD, check_digits, check_length, parse_probability, word_str
from .beta_core import BetaSpec, make_beta
from .errors import DomainError, UndecidedError
from .simulation import DigitChain, sample_streams
from .words import Word, all_admissible_upto, automaton, enumerate_admissible

__all__ = [
    "CesaroEstimate",
    "CylWalkMeasure",
    "HypothesisWarning",
    "RatioReport",
    "cesaro_mp",
    "cesaro_mp_shifted",
    "mp_pseudo_golden",
    "mp_zero_interval",
    "mu_cylinder",
    "nonsimple_witness",
    "quasi_bernoulli_report",
    "shifted_mu",
    "strong_quasi_invariance_report",
    "walk_sample",
]

#: Above this many Cesaro terms exact mode switches to float propagation.
EXACT_CESARO_LIMIT = 4096


class HypothesisWarning(UserWarning):
    """An operation whose theory needs a simple base was run on another one."""


def _num(x):
    """JSON-friendly rendering of an exact or float number."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return x


@dataclass(frozen=True)
class CylWalkMeasure:
    """``mu_p`` on the cylinders of base ``beta``.

    A :class:`~fractions.Fraction` ``p`` gives exact values throughout.
    """

    p: object
    beta: BetaSpec

    def __init__(self, p, beta):
        object.__setattr__(self, "p", parse_probability(p))
        b = make_beta(beta)
        automaton(b)  # rejects bases above 2
        object.__setattr__(self, "beta", b)

    @property
    def exact(self):
        return isinstance(self.p, Fraction)

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    @property
    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def word(self, w):
        return w if isinstance(w, Word) else Word.make(w, self.beta)

    def mu(self, w):
        w = self.word(w)
        return self.p**w.n0 * (1 - self.p) ** w.n1

    def log_mu(self, n0, n1):
        return n0 * math.log(self.p) + n1 * math.log(1 - self.p)

    def from_state(self, t, digits):
        """Probability that the walk started in state ``t`` emits ``digits``."""
        aut = automaton(self.beta)
        value = self.one
        p, q = self.p, 1 - self.p
        for d in digits:
            allowed = aut.one_allowed(t)
            if d == 1:
                if not allowed:
                    return self.zero
                value *= q
            elif allowed:
                value *= p
            t = aut.step(t, d)
        return value

    def step_distribution(self, dist):
        """One walk step applied to a state distribution (a dict)."""
        aut = automaton(self.beta)
        out = {}
        p, q = self.p, 1 - self.p
        for t, mass in dist.items():
            if aut.one_allowed(t):
                s0, s1 = aut.step(t, 0), aut.step(t, 1)
                out[s0] = out.get(s0, 0) + mass * p
                out[s1] = out.get(s1, 0) + mass * q
            else:
                s0 = aut.step(t, 0)
                out[s0] = out.get(s0, 0) + mass
        return out

    def state_distribution(self, k):
        dist = {0: self.one}
        for _ in range(k):
            dist = self.step_distribution(dist)
        return dist

    def chain(self, n=None):
        """The walk as a :class:`~betashift.simulation.DigitChain`.

        A non-simple base has infinitely many follower states; ``n`` bounds
        the states a stream of length ``n`` can reach.
        """
        aut = automaton(self.beta)
        if self.beta.is_simple:
            size, trap = self.beta.finite_length, None
        else:
            if n is None:
                raise DomainError("a stream length is needed to sample a non-simple base")
            size, trap = n + 1, None
        p0, nx0, nx1 = [], [], []
        for t in range(size):
            try:
                allowed = aut.one_allowed(t)
            except UndecidedError:
                trap = t
                p0.append(1.0)
                nx0.append(t)
                nx1.append(t)
                break
            p0.append(float(self.p) if allowed else 1.0)
            nx0.append(min(aut.step(t, 0), size - 1))
            nx1.append(min(aut.step(t, 1), size - 1) if allowed else 0)
        return DigitChain(np.array(p0), np.array(nx0), np.array(nx1), 0, trap)


def mu_cylinder(m, w):
    """``mu_p[w] = p**N0(w) * (1-p)**N1(w)``."""
    return m.mu(w)


def shifted_mu(m, w, k, method="propagate"):
    """``sigma^k mu_p[w]``, the measure of all points whose digits from
    position ``k + 1`` on start with ``w``."""
    digits = check_digits(w.digits if isinstance(w, Word) else w)
    k = check_length(k, name="k", minimum=0)
    if method == "enumerate":
        check_length(k + len(digits), name="k + |w|", guard=ENUMERATION_GUARD)
        aut = automaton(m.beta)
        if aut.run(digits) is None:
            return m.zero
        if k == 0:
            return m.mu(digits)
        total = m.zero
        for u in enumerate_admissible(m.beta, k):
            uw = u.digits + digits
            if aut.run(uw) is not None:
                total += m.mu(uw)
        return total
    if method != "propagate":
        raise DomainError(f"unknown method {method!r}")
    dist = m.state_distribution(k)
    return sum((mass * m.from_state(t, digits) for t, mass in dist.items()), m.zero)


@dataclass(frozen=True)
class CesaroEstimate:
    """Partial Cesaro average of shifted measures of ``target``."""

    value: float
    iterations: int
    target: str
    half_width: float = 0.0
    method: str = "propagate"
    hypothesis_violation: bool = False

    def as_dict(self):
        return {
            "value": _num(self.value),
            "iterations": self.iterations,
            "target": self.target,
            "half_width": self.half_width,
            "method": self.method,
            "hypothesis_violation": self.hypothesis_violation,
        }


def _cesaro(m, digits, K, start, method, seed, streams):
    simple = m.beta.is_simple
    if not simple:
        warnings.warn(
            "the Cesaro limit is only known to exist for simple bases; estimate is flagged",
            HypothesisWarning,
            stacklevel=3,
        )
    label = word_str(digits)
    if method == "propagate":
        exact = m.exact and K <= EXACT_CESARO_LIMIT
        mm = m if exact or not m.exact else CylWalkMeasure(float(m.p), m.beta)
        try:
            dist = mm.state_distribution(start)
            total = mm.zero
            cache = {}
            for _ in range(K):
                for t, mass in dist.items():
                    f = cache.get(t)
                    if f is None:
                        f = cache[t] = mm.from_state(t, digits)
                    total += mass * f
                dist = mm.step_distribution(dist)
            name = "propagate" if exact or not m.exact else "propagate-float"
            return CesaroEstimate(total / K, K, label, 0.0, name, not simple)
        except UndecidedError:
            method = "montecarlo"
    if method == "enumerate":
        check_length(start + K - 1 + len(digits), name="K + |w|", guard=ENUMERATION_GUARD)
        total = sum((shifted_mu(m, digits, k, "enumerate") for k in range(start, start + K)), m.zero)
        return CesaroEstimate(total / K, K, label, 0.0, "enumerate", not simple)
    if method != "montecarlo":
        raise DomainError(f"unknown method {method!r}")
    L = len(digits)
    n = start + K - 1 + L
    data = sample_streams(m, n, seed, streams=streams)
    pattern = np.asarray(digits, dtype=np.int8)
    windows = np.lib.stride_tricks.sliding_window_view(data, L, axis=1)[:, start : start + K]
    per_stream = np.all(windows == pattern, axis=2).mean(axis=1)
    mean = float(per_stream.mean())
    se = float(per_stream.std(ddof=1) / math.sqrt(streams)) if streams > 1 else float("nan")
    return CesaroEstimate(mean, K, label, 1.96 * se, "montecarlo", not simple)


def cesaro_mp(m, target, K, method="propagate", seed=0, streams=64):
    """``(1/K) * sum_{k<K} sigma^k mu_p[target]``.

    ``method`` is ``"propagate"`` (exact in rational mode up to
    ``EXACT_CESARO_LIMIT`` terms, float beyond), ``"enumerate"`` (prefix sums,
    guarded) or ``"montecarlo"``. Propagation falls back to Monte Carlo when
    the base's digits run out.
    """
    digits = check_digits(target.digits if isinstance(target, Word) else target)
    K = check_length(K, name="K")
    return _cesaro(m, digits, K, 0, method, seed, streams)


def cesaro_mp_shifted(m, target, K, method="propagate", seed=0, streams=64):
    """Same average taken over ``k = 1 .. K``."""
    digits = check_digits(target.digits if isinstance(target, Word) else target)
    K = check_length(K, name="K")
    return _cesaro(m, digits, K, 1, method, seed, streams)


def cesaro_table(m, target, Ks, method="propagate"):
    """Rows ``(K, estimate, half_width)`` for each ``K``."""
    return [(K, e.value, e.half_width) for K in Ks for e in [cesaro_mp(m, target, K, method)]]


# -- closed forms --------------------------------------------------------------


def mp_zero_interval(p, m):
    """Invariant mass of ``[0, 1/beta)`` for the base with expansion ``1 0^m 1``."""
    p = parse_probability(p)
    m = check_length(m, name="m", minimum=0)
    return (m * (1 - p) + 1) / ((m + 1) * (1 - p) + 1)


def mp_pseudo_golden(p, m):
    """Invariant masses of ``[0, 1/beta)`` and of the top cylinder ``1^(m-1)``
    for the base with expansion ``1^m``."""
    p = parse_probability(p)
    m = check_length(m, name="m", minimum=2)
    denom = 1 - (1 - p) ** m
    return p / denom, p * (1 - p) ** (m - 1) / denom


# -- ratio reports -------------------------------------------------------------


@dataclass(frozen=True)
class RatioReport:
    min_ratio: object
    max_ratio: object
    witness_pair: Tuple[str, ...]
    bound: Optional[object]
    holds: Optional[bool]
    checked: int = 0
    hypothesis_violation: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        out = {
            "min_ratio": _num(self.min_ratio),
            "max_ratio": _num(self.max_ratio),
            "witness_pair": list(self.witness_pair),
            "bound": _num(self.bound),
            "holds": self.holds,
            "checked": self.checked,
            "hypothesis_violation": self.hypothesis_violation,
        }
        out.update(self.extra)
        return out


def _simple_bound(m):
    M = m.beta.finite_length
    return None if M is None else m.one / m.p**M


def quasi_bernoulli_report(m, max_len):
    """Scan ``mu[ww'] / (mu[w] mu[w'])`` over admissible pairs with
    ``|w|, |w'| <= max_len`` and ``ww'`` admissible.

    For a simple base the ratio lies in ``[1, p**-M]``; ``holds`` says
    whether it did.
    """
    max_len = check_length(max_len, name="max_len", guard=ENUMERATION_GUARD)
    words = all_admissible_upto(m.beta, max_len)
    aut = automaton(m.beta)
    lo = hi = None
    lo_pair = hi_pair = ("", "")
    count = 0
    for w in words:
        mw = m.mu(w)
        for v in words:
            if aut.run(v.digits, w.state) is None:
                continue
            joint = m.mu(w.digits + v.digits)
            r = joint / (mw * m.mu(v))
            count += 1
            if hi is None or r > hi:
                hi, hi_pair = r, (str(w), str(v))
            if lo is None or r < lo:
                lo, lo_pair = r, (str(w), str(v))
    bound = _simple_bound(m)
    holds = None if bound is None else bool(lo >= 1 and hi <= bound)
    return RatioReport(
        lo,
        hi,
        hi_pair,
        bound,
        holds,
        count,
        bound is None,
        {"min_pair": list(lo_pair)},
    )


def strong_quasi_invariance_report(m, max_shift, max_len):
    """Scan ``sigma^k mu[w] / mu[w]`` for ``k <= max_shift``, ``|w| <= max_len``.

    For a simple base every ratio lies in ``[p**M, p**-M]``. A non-simple base
    is scanned anyway but reported as not applicable (``holds`` is None).
    """
    max_shift = check_length(max_shift, name="max_shift", minimum=0)
    max_len = check_length(max_len, name="max_len", guard=ENUMERATION_GUARD)
    words = all_admissible_upto(m.beta, max_len)
    lo = hi = None
    lo_pair = hi_pair = ("", "0")
    count = 0
    dist = {0: m.one}
    for k in range(max_shift + 1):
        for w in words:
            shifted = sum((mass * m.from_state(t, w.digits) for t, mass in dist.items()), m.zero)
            r = shifted / m.mu(w)
            count += 1
            if hi is None or r > hi:
                hi, hi_pair = r, (str(w), str(k))
            if lo is None or r < lo:
                lo, lo_pair = r, (str(w), str(k))
        dist = m.step_distribution(dist)
    bound = _simple_bound(m)
    holds = None if bound is None else bool(lo >= 1 / bound and hi <= bound)
    return RatioReport(lo, hi, hi_pair, bound, holds, count, bound is None, {"min_pair": list(lo_pair)})


def nonsimple_witness(m, depth):
    """Ratios that blow up when the expansion of 1 is infinite.

    With ``e`` the first ``depth`` digits of the quasi-greedy expansion of 1
    (the expansion itself when it is infinite): the product ratio
    ``mu[e] / (mu[e_1] mu[e_2 .. e_depth])`` and the shift ratio
    ``sigma mu[e_2 .. e_depth] / mu[e_2 .. e_depth]``. Both are bounded
    for a simple base and grow like ``p**-N0`` otherwise.
    """
    depth = check_length(depth, name="depth", minimum=2)
    e = tuple(m.beta.quasi_digit(i) for i in range(1, depth + 1))
    head, rest = Word.make(e[:1], m.beta), Word.make(e[1:], m.beta)
    product_ratio = m.mu(e) / (m.mu(head) * m.mu(rest))
    shift_ratio = shifted_mu(m, rest, 1) / m.mu(rest)
    return {
        "depth": depth,
        "word": word_str(e),
        "product_ratio": _num(product_ratio),
        "shift_ratio": _num(shift_ratio),
        "n0_tail": rest.n0,
    }


# -- sampling ------------------------------------------------------------------


def walk_sample(m, n, seed=0, stream_id=0):
    """One digit stream of length ``n`` whose law is ``mu_p``."""
    n = check_length(n, minimum=0)
    return sample_streams(m, n, seed, stream_ids=[stream_id])[0]
