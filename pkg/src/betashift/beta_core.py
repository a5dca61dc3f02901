"""Bases beta > 1: expansions of reals and of 1, the quasi-greedy expansion of 1,
simpleness detection and root solving for declared digit patterns.

A :class:`BetaSpec` is built in one of two modes:

``symbolic``
    the digits of the expansion of 1 are the ground truth (a :class:`DigitTail`)
    and beta is solved from them by bisection;
``numeric``
    beta is the ground truth and the expansion of 1 is computed by iterating
    the beta-transformation to a truncation depth.

Orbits are computed in exact rational arithmetic on the exact value of the
inputs (floats and mpf values are converted without rounding), so the only
source of doubt about a digit is the input itself being an approximation.
Whenever ``beta * T^(n-1)(x)`` lands within ``BOUNDARY_TOL`` of an integer
without being equal to it, a :class:`PrecisionError` is raised instead of
guessing.
"""

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

import mpmath

from ._validation import check_length, to_fraction
from .errors import DomainError, InvalidExpansionError, PrecisionError, UndecidedError

__all__ = [
    "BOUNDARY_TOL",
    "DEFAULT_DEPTH",
    "BetaSpec",
    "DigitTail",
    "SimpleCheck",
    "TruncationWarning",
    "beta_expand",
    "beta_from_expansion",
    "beta_from_value",
    "expansion_of_one",
    "family_10m1",
    "family_ones",
    "golden_ratio",
    "is_simple",
    "make_beta",
    "quasi_expansion",
]

BOUNDARY_TOL = Fraction(1, 10**25)
DEFAULT_DEPTH = 64
ROOT_RTOL = mpmath.mpf("1e-15")

# private context so callers' mpmath precision is never touched
_mp = mpmath.MPContext()
_mp.dps = 50


class TruncationWarning(UserWarning):
    """A numeric-mode answer is only known up to the truncation depth."""


# -- digit tails ---------------------------------------------------------------

_TOKEN = re.compile(
    r"per\((?P<per>[^)]*)\)"
    r"|(?P<rd>\d)\^(?P<rn>inf|∞|\d+)"
    r"|(?P<plain>\d+)"
    r"|(?P<bad>\S)"
)


def _parse_digits(text, allow_inf=True):
    out = []
    zero_tail = False
    for m in _TOKEN.finditer(text):
        if m.group("bad") is not None:
            raise InvalidExpansionError(f"unexpected character {m.group('bad')!r} in {text!r}")
        if m.group("per") is not None:
            raise InvalidExpansionError(f"nested per(...) in {text!r}")
        if zero_tail:
            raise InvalidExpansionError(f"digits after an infinite run in {text!r}")
        if m.group("plain") is not None:
            out.extend(int(c) for c in m.group("plain"))
            continue
        digit, count = int(m.group("rd")), m.group("rn")
        if count in ("inf", "∞"):
            if not allow_inf or digit != 0:
                raise InvalidExpansionError(f"only 0^inf may end a tail, got {m.group(0)!r}")
            zero_tail = True
        else:
            out.extend([digit] * int(count))
    return out


@dataclass(frozen=True)
class DigitTail:
    """An eventually periodic digit sequence ``preperiod (period)^inf``.

    An empty period means the sequence ends in ``0^inf``. The constructor
    normalises trailing zeros so that a finite tail ends in a nonzero digit.
    """

    preperiod: Tuple[int, ...] = ()
    period: Tuple[int, ...] = ()

    def __post_init__(self):
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        if any(d < 0 or d > 9 for d in pre + per):
            raise InvalidExpansionError("digits must lie in 0..9")
        if per and not any(per):
            per = ()
        if not per:
            while pre and pre[-1] == 0:
                pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text):
        """Parse ``"110"``, ``"1 0^3 1"``, ``"1 per(10)"``, ``"11 0^inf"``."""
        if isinstance(text, DigitTail):
            return text
        text = str(text).strip()
        per_match = list(re.finditer(r"per\(([^)]*)\)", text))
        if len(per_match) > 1:
            raise InvalidExpansionError(f"at most one per(...) group allowed: {text!r}")
        if per_match:
            m = per_match[0]
            if text[m.end():].strip():
                raise InvalidExpansionError(f"per(...) must close the tail: {text!r}")
            pre = _parse_digits(text[: m.start()])
            per = _parse_digits(m.group(1), allow_inf=False)
            if not per:
                raise InvalidExpansionError("empty period")
            return cls(tuple(pre), tuple(per))
        digits = _parse_digits(text)
        if not digits:
            raise InvalidExpansionError(f"no digits in {text!r}")
        return cls(tuple(digits), ())

    @property
    def is_finite(self):
        return not self.period

    def digit(self, i):
        """The ``i``-th digit, 1-based."""
        if i < 1:
            raise IndexError(i)
        p = len(self.preperiod)
        if i <= p:
            return self.preperiod[i - 1]
        if not self.period:
            return 0
        return self.period[(i - p - 1) % len(self.period)]

    def prefix(self, n):
        return tuple(self.digit(i) for i in range(1, n + 1))

    def shifted(self, k):
        """The tail of the sequence after dropping ``k`` digits."""
        p = len(self.preperiod)
        if k <= p:
            return DigitTail(self.preperiod[k:], self.period)
        if not self.period:
            return DigitTail((), ())
        r = (k - p) % len(self.period)
        return DigitTail((), self.period[r:] + self.period[:r])

    def compare_span(self):
        """Number of leading digits that decides any comparison between shifts."""
        return len(self.preperiod) + max(len(self.period), 1)

    def value(self, beta, start=0):
        """``sum_j d_{start+j} beta^-j`` evaluated in high precision."""
        beta = _mp.mpf(beta)
        tail = self.shifted(start)
        total = _mp.mpf(0)
        inv = 1 / beta
        power = _mp.mpf(1)
        for d in tail.preperiod:
            power *= inv
            total += d * power
        if tail.period:
            per_sum = _mp.mpf(0)
            q = _mp.mpf(1)
            for d in tail.period:
                q *= inv
                per_sum += d * q
            total += power * per_sum / (1 - q)
        return total

    def __str__(self):
        pre = "".join(map(str, self.preperiod))
        if self.period:
            per = "per(" + "".join(map(str, self.period)) + ")"
            return f"{pre} {per}" if pre else per
        return pre or "0"


def _lex_cmp(a, b):
    return (a > b) - (a < b)


def _check_self_admissible(tail):
    """Shifts of the sequence never exceed the sequence itself."""
    span = tail.compare_span()
    head = tail.prefix(span)
    for k in range(1, span + 1):
        if _lex_cmp(tail.shifted(k).prefix(span), head) > 0:
            raise InvalidExpansionError(
                f"{tail} is not self-admissible: its shift by {k} exceeds it"
            )


# -- the base ------------------------------------------------------------------


class SimpleCheck(NamedTuple):
    """Answer of :func:`is_simple`: ``simple`` is True, False or None (unknown)."""

    simple: Optional[bool]
    length: Optional[int]


@dataclass(frozen=True)
class BetaSpec:
    """A base beta together with its expansion of 1.

    ``value`` is an mpf. In symbolic mode ``expansion1``/``quasi`` are the
    declared tails. In numeric mode they are only present when the orbit of 1
    was seen to terminate; otherwise ``known_digits`` holds the first
    ``truncation_depth`` digits of the expansion of 1 and ``orbit`` the exact
    orbit points ``T^s(1)``.
    """

    value: mpmath.mpf
    expansion1: Optional[DigitTail]
    quasi: Optional[DigitTail]
    finite_length: Optional[int]
    mode: str
    truncation_depth: Optional[int] = None
    known_digits: Tuple[int, ...] = field(default=(), repr=False)
    orbit: Tuple[Fraction, ...] = field(default=(), repr=False, compare=False)

    @property
    def floor(self):
        return int(_mp.floor(self.value))

    @property
    def alphabet_max(self):
        """Largest digit of the alphabet."""
        f = self.floor
        return f - 1 if self.is_integer else f

    @property
    def is_integer(self):
        return self.value == _mp.floor(self.value)

    @property
    def is_simple(self):
        return self.finite_length is not None

    @property
    def determined(self):
        """True when the expansion of 1 is known to every depth."""
        return self.quasi is not None

    @property
    def log(self):
        return float(_mp.log(self.value))

    def __float__(self):
        return float(self.value)

    def eps_digit(self, i):
        """Digit ``i`` (1-based) of the expansion of 1."""
        if self.expansion1 is not None:
            return self.expansion1.digit(i)
        if i <= len(self.known_digits):
            return self.known_digits[i - 1]
        raise UndecidedError(
            f"digit {i} of the expansion of 1 is beyond the depth {self.truncation_depth}",
            reliable=len(self.known_digits),
        )

    def quasi_digit(self, i):
        """Digit ``i`` (1-based) of the quasi-greedy expansion of 1."""
        if self.quasi is not None:
            return self.quasi.digit(i)
        return self.eps_digit(i)

    def y(self, s):
        """``T^s(1)`` as an mpf; ``y(0) == 1``."""
        if s == 0:
            return _mp.mpf(1)
        if self.orbit:
            if s < len(self.orbit):
                return _mp.mpf(self.orbit[s].numerator) / self.orbit[s].denominator
            raise UndecidedError(f"T^{s}(1) is beyond the computed orbit", reliable=len(self.orbit) - 1)
        return self.expansion1.value(self.value, s)

    def power(self, n):
        """``beta**n`` as an mpf."""
        return _mp.power(self.value, n)

    def describe(self):
        if self.expansion1 is not None:
            return str(self.expansion1)
        return f"{_mp.nstr(self.value, 20)} (numeric, depth {self.truncation_depth})"


def _integer_spec(k, mode):
    tail = DigitTail((), (k - 1,))
    return BetaSpec(
        value=_mp.mpf(k),
        expansion1=tail,
        quasi=tail,
        finite_length=1,
        mode=mode,
        truncation_depth=None,
    )


def _quasi_from(tail):
    if not tail.is_finite:
        return tail, None
    pre = tail.preperiod
    return DigitTail((), pre[:-1] + (pre[-1] - 1,)), len(pre)


def _normalise_expansion(tail):
    """Turn a purely periodic (quasi-greedy) tail into the greedy one."""
    if tail.preperiod or not tail.period:
        return tail
    per = tail.period
    for L in range(1, len(per) + 1):
        if len(per) % L == 0 and per[:L] * (len(per) // L) == per:
            per = per[:L]
            break
    if len(per) == 1:
        return DigitTail((), per)  # integer base, keeps the (beta-1)^inf convention
    return DigitTail(per[:-1] + (per[-1] + 1,), ())


def beta_from_expansion(tail):
    """Solve for the base whose expansion of 1 is ``tail``.

    ``tail`` is a :class:`DigitTail` or text in the digit-tail grammar. The root
    of ``g(beta) = sum_j eps_j beta^-j - 1`` (strictly decreasing) is bracketed
    in ``(1, eps_1 + 1]`` and bisected to relative width 1e-15; the upper end of
    the final bracket is returned so that greedy digits of the returned value
    reproduce the declared ones.
    """
    tail = DigitTail.parse(tail)
    if not tail.preperiod and not tail.period:
        raise InvalidExpansionError("the expansion of 1 has a nonzero digit")
    _check_self_admissible(tail)
    tail = _normalise_expansion(tail)
    if not tail.preperiod and len(tail.period) == 1:
        return _integer_spec(tail.period[0] + 1, "symbolic")

    def g(b):
        return tail.value(b) - 1

    lo = _mp.mpf(1)
    hi = _mp.mpf(tail.digit(1) + 1)
    if tail.is_finite and sum(tail.preperiod) <= 1:
        raise DomainError(f"no base > 1 has expansion of 1 equal to {tail}")
    if g(hi) > 0:
        raise DomainError(f"no root of the expansion identity in (1, {hi}] for {tail}")
    while hi - lo > ROOT_RTOL * lo:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    quasi, M = _quasi_from(tail)
    return BetaSpec(value=hi, expansion1=tail, quasi=quasi, finite_length=M, mode="symbolic")


def _greedy(beta, x, n, alphabet_max):
    """First ``n`` greedy digits of ``x`` in base ``beta`` (both exact Fractions).

    Returns ``(digits, orbit)`` where ``orbit[i] = T^i(x)``.
    """
    digits = []
    orbit = [x]
    for i in range(n):
        v = beta * x
        d = v.numerator // v.denominator
        frac = v - d
        if frac and (frac < BOUNDARY_TOL or 1 - frac < BOUNDARY_TOL):
            raise PrecisionError(
                f"beta*T^{i}(x) is within 1e-25 of an integer; digit {i + 1} is unreliable",
                reliable=i,
            )
        if d > alphabet_max:
            raise PrecisionError(f"digit {d} escapes the alphabet at position {i + 1}", reliable=i)
        digits.append(d)
        x = frac
        orbit.append(x)
    return digits, orbit


def _as_beta_fraction(beta):
    if isinstance(beta, BetaSpec):
        beta = beta.value
    b = to_fraction(beta)
    if b <= 1:
        raise DomainError(f"beta must exceed 1, got {beta}")
    return b


def expansion_of_one(beta, n):
    """First ``n`` digits of the expansion of 1 in base ``beta``.

    ``beta`` may be a real or a :class:`BetaSpec`; a symbolic spec answers from
    its declared digits. For integer beta the digits are ``(beta-1)^inf``.
    """
    n = check_length(n)
    if isinstance(beta, BetaSpec) and beta.expansion1 is not None:
        return beta.expansion1.prefix(n)
    b = _as_beta_fraction(beta)
    if b.denominator == 1:
        return (int(b) - 1,) * n
    amax = b.numerator // b.denominator
    digits, _ = _greedy(b, Fraction(1), n, amax)
    return tuple(digits)


def quasi_expansion(b, n):
    """First ``n`` digits of the quasi-greedy expansion of 1.

    For an undetermined numeric spec only ``truncation_depth`` digits are known;
    those are returned with a :class:`TruncationWarning`.
    """
    n = check_length(n)
    if b.quasi is not None:
        return b.quasi.prefix(n)
    depth = len(b.known_digits)
    if n > depth:
        warnings.warn(
            f"simpleness undetermined at depth {depth}; returning {depth} digits",
            TruncationWarning,
            stacklevel=2,
        )
    return tuple(b.known_digits[: min(n, depth)])


def beta_expand(x, b, n):
    """Greedy digits ``eps_1(x) .. eps_n(x)`` of ``x`` in ``[0, 1)``."""
    n = check_length(n)
    xf = to_fraction(x)
    if not 0 <= xf < 1:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    if not isinstance(b, BetaSpec):
        b = make_beta(b)
    beta = to_fraction(b.value)
    digits, _ = _greedy(beta, xf, n, b.alphabet_max)
    digits = tuple(digits)
    if b.alphabet_max <= 1 and b.determined:
        from .words import is_admissible

        if not is_admissible(digits, b):
            raise PrecisionError(
                "greedy digits of the approximate base are not admissible for the declared one",
                reliable=0,
            )
    return digits


def beta_from_value(value, depth=DEFAULT_DEPTH):
    """Numeric-mode spec: beta is ground truth, digits of 1 are computed.

    Inputs are taken at their exact value (``"1.8"`` is 9/5; a float is its
    binary value). If the orbit of 1 reaches 0 within ``depth`` steps the base
    is recorded as simple. If a digit boundary is hit first, the base is
    truncated at the reliable depth with a :class:`TruncationWarning`.
    """
    depth = check_length(depth, name="depth")
    b = _as_beta_fraction(value)
    if b.denominator == 1:
        return _integer_spec(int(b), "numeric")
    amax = b.numerator // b.denominator
    x = Fraction(1)
    digits = []
    orbit = [x]
    for i in range(depth):
        try:
            d, o = _greedy(b, x, 1, amax)
        except PrecisionError:
            warnings.warn(
                f"expansion of 1 is unreliable beyond digit {i}; truncating", TruncationWarning, stacklevel=2
            )
            break
        digits.append(d[0])
        x = o[1]
        orbit.append(x)
        if x == 0:
            tail = DigitTail(tuple(digits), ())
            quasi, M = _quasi_from(tail)
            return BetaSpec(
                value=_mp.mpf(b.numerator) / b.denominator,
                expansion1=tail,
                quasi=quasi,
                finite_length=M,
                mode="numeric",
                truncation_depth=depth,
                known_digits=tuple(digits),
                orbit=tuple(orbit),
            )
    return BetaSpec(
        value=_mp.mpf(b.numerator) / b.denominator,
        expansion1=None,
        quasi=None,
        finite_length=None,
        mode="numeric",
        truncation_depth=len(digits),
        known_digits=tuple(digits),
        orbit=tuple(orbit),
    )


def is_simple(b):
    """Three-valued simpleness: ``(True, M)``, ``(False, None)`` or ``(None, None)``."""
    if b.finite_length is not None:
        return SimpleCheck(True, b.finite_length)
    if b.expansion1 is not None:
        return SimpleCheck(False, None)
    return SimpleCheck(None, None)


def family_10m1(m):
    """The base with expansion of 1 equal to ``1 0^m 1``."""
    m = check_length(m, name="m", minimum=0)
    return beta_from_expansion(DigitTail((1,) + (0,) * m + (1,)))


def family_ones(m):
    """The pseudo-golden base with expansion of 1 equal to ``1^m``."""
    m = check_length(m, name="m", minimum=2)
    return beta_from_expansion(DigitTail((1,) * m))


def make_beta(spec, depth=DEFAULT_DEPTH):
    """Build a spec from a :class:`BetaSpec`, a digit tail or a number.

    Text containing ``.`` or ``/`` is read as a numeric value; any other text
    is read in the digit-tail grammar.
    """
    if isinstance(spec, BetaSpec):
        return spec
    if isinstance(spec, DigitTail):
        return beta_from_expansion(spec)
    if isinstance(spec, str) and not ("." in spec or "/" in spec):
        return beta_from_expansion(spec)
    return beta_from_value(spec, depth=depth)


def golden_ratio():
    return beta_from_expansion(DigitTail((1, 1)))
