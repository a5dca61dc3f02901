"""Input validation and coercion helpers shared by the public API."""

from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .errors import DomainError

#: Largest word length accepted by exhaustive operations.
ENUMERATION_GUARD = 32


def parse_probability(value, *, open_interval=True, name="p"):
    """Coerce ``value`` to a probability.

    Strings such as ``"2/3"`` and Python rationals become :class:`Fraction`
    (which switches downstream code to exact arithmetic); strings like
    ``"0.25"`` and floats stay floats.
    """
    if isinstance(value, str):
        text = value.strip()
        try:
            value = Fraction(text) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{name}: cannot parse {text!r} as a probability") from exc
    elif isinstance(value, bool):
        raise DomainError(f"{name}: expected a number, got bool")
    elif isinstance(value, Rational):
        value = Fraction(value)
    elif isinstance(value, Real):
        value = float(value)
    else:
        raise DomainError(f"{name}: expected a number, got {type(value).__name__}")

    if open_interval:
        if not 0 < value < 1:
            raise DomainError(f"{name} must lie in (0, 1), got {value}")
    elif not 0 <= value <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value


def is_exact(value):
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def to_fraction(value):
    """Exact rational value of an int, Fraction, float, decimal string or mpf."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("expected a number, got bool")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as a number") from exc
    if hasattr(value, "man_exp"):  # mpf from any mpmath context
        man, exp = value.man_exp
        man = int(man)
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    if isinstance(value, Rational):
        return Fraction(value)
    raise DomainError(f"cannot convert {type(value).__name__} to an exact number")


def check_digits(digits, alphabet_max=1):
    """Return ``digits`` as a tuple of ints, checking the alphabet."""
    if isinstance(digits, str):
        text = digits.strip()
        if not text.isdigit():
            raise DomainError(f"word must be a string of digits, got {digits!r}")
        out = tuple(int(c) for c in text)
    else:
        out = tuple(int(d) for d in np.asarray(digits).ravel())
    for d in out:
        if d < 0 or d > alphabet_max:
            raise DomainError(f"digit {d} outside alphabet {{0..{alphabet_max}}}")
    return out


def check_length(n, *, name="n", minimum=1, guard=None):
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n}")
    if guard is not None and n > guard:
        from .errors import GuardError

        raise GuardError(f"{name}={n} exceeds the guard {guard}")
    return n


def word_str(digits):
    return "".join(str(d) for d in digits)
