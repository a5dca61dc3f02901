"""Admissible words of a beta-shift with 1 < beta <= 2.

Everything here runs on the follower automaton: the state of a word is the
length of its current match against the quasi-greedy expansion of 1. Reading
digit ``d`` in state ``t`` compares ``d`` with ``e = eps*_{t+1}``:

* ``d > e`` rejects,
* ``d < e`` returns to state 0 (the word just became full),
* ``d == e`` advances to ``t + 1``, wrapping to 0 after a full period ``M``
  when the base is simple.

State 0 is exactly the set of full words. The state also equals the length of
the longest suffix that is a prefix of the expansion of 1; the naive suffix
scan :func:`parry_state_naive` is kept as an oracle for that claim.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

import numpy as np

from ._validation import ENUMERATION_GUARD, check_digits, check_length, word_str
from .beta_core import BetaSpec, _mp, make_beta
from .errors import DomainError, InadmissibleWordError, UndecidedError

__all__ = [
    "CylinderInterval",
    "FollowerAutomaton",
    "Word",
    "ZeroRuns",
    "as_word",
    "count_admissible",
    "cylinder_interval",
    "enumerate_admissible",
    "is_admissible",
    "is_admissible_naive",
    "is_full",
    "m_index",
    "n0",
    "n1",
    "parry_state",
    "parry_state_naive",
    "stream_counters",
    "tau",
    "tau_prime",
    "zero_run_lengths",
]


def _require_binary(b):
    if b.alphabet_max > 1:
        raise DomainError(f"word operations need 1 < beta <= 2, got beta = {float(b.value):.6g}")


class FollowerAutomaton:
    """Deterministic automaton recognising the admissible words of ``b``.

    Transition rows are built lazily; for an undetermined numeric base a step
    that needs a digit beyond the truncation depth raises
    :class:`~betashift.errors.UndecidedError`.
    """

    def __init__(self, b):
        b = make_beta(b)
        _require_binary(b)
        self.beta = b
        self.period = b.finite_length
        self._rows = {}

    def _row(self, t):
        row = self._rows.get(t)
        if row is None:
            e = self.beta.quasi_digit(t + 1)
            nxt = t + 1
            if self.period is not None and nxt == self.period:
                nxt = 0
            row = tuple(0 if d < e else (nxt if d == e else None) for d in (0, 1))
            self._rows[t] = row
        return row

    def step(self, t, d):
        """Next state, or ``None`` when the digit is forbidden."""
        return self._row(t)[d]

    def one_allowed(self, t):
        return self._row(t)[1] is not None

    @property
    def states(self):
        """State set of a simple base (``0 .. M-1``)."""
        if self.period is None:
            raise UndecidedError("a non-simple base has infinitely many follower states")
        return tuple(range(self.period))

    def run(self, digits, state=0):
        """Final state after reading ``digits`` from ``state``; ``None`` if rejected."""
        for d in digits:
            state = self._row(state)[d]
            if state is None:
                return None
        return state


_AUTOMATA = {}


def automaton(b):
    """Cached :class:`FollowerAutomaton` for ``b``."""
    key = id(b)
    cached = _AUTOMATA.get(key)
    if cached is None or cached[0] is not b:
        cached = (b, FollowerAutomaton(b))
        _AUTOMATA[key] = cached
    return cached[1]


@dataclass(frozen=True)
class Word:
    """An admissible word with its follower state and digit counters.

    ``n0`` counts positions holding a 0 where a 1 would also have been
    admissible; ``n1`` counts 1-digits. ``tau_prime`` is the length of the
    longest full prefix.
    """

    digits: Tuple[int, ...]
    beta: BetaSpec = field(repr=False, compare=False)
    state: int = 0
    n0: int = 0
    n1: int = 0
    tau_prime: int = 0

    @classmethod
    def make(cls, digits, beta):
        beta = make_beta(beta)
        digits = check_digits(digits, alphabet_max=1)
        aut = automaton(beta)
        t = 0
        c0 = c1 = last_full = 0
        for i, d in enumerate(digits):
            if d == 0:
                if aut.one_allowed(t):
                    c0 += 1
            else:
                c1 += 1
            t = aut.step(t, d)
            if t is None:
                raise InadmissibleWordError(f"{word_str(digits)} is not admissible (fails at digit {i + 1})")
            if t == 0:
                last_full = i + 1
        return cls(digits, beta, t, c0, c1, last_full)

    @property
    def full(self):
        return self.state == 0

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        return word_str(self.digits)

    def extend(self, d):
        """``self + d`` as a Word, or ``None`` when inadmissible."""
        aut = automaton(self.beta)
        t = aut.step(self.state, d)
        if t is None:
            return None
        c0 = self.n0 + (1 if d == 0 and aut.one_allowed(self.state) else 0)
        c1 = self.n1 + d
        n = len(self.digits) + 1
        return Word(self.digits + (d,), self.beta, t, c0, c1, n if t == 0 else self.tau_prime)

    def __add__(self, other):
        other_digits = other.digits if isinstance(other, Word) else check_digits(other)
        return Word.make(self.digits + other_digits, self.beta)


def as_word(w, beta=None):
    if isinstance(w, Word):
        return w
    if beta is None:
        raise DomainError("a base is required to interpret a digit sequence")
    return Word.make(w, beta)


# -- admissibility -------------------------------------------------------------


def is_admissible(w, b):
    """Whether the digit sequence ``w`` is admissible in base ``b``."""
    b = make_beta(b)
    digits = check_digits(w.digits if isinstance(w, Word) else w, alphabet_max=1)
    return automaton(b).run(digits) is not None


def is_admissible_naive(w, b):
    """Parry's criterion checked shift by shift (quadratic oracle).

    Every suffix must be lexicographically at most the prefix of the
    quasi-greedy expansion of 1 of the same length.
    """
    b = make_beta(b)
    digits = check_digits(w, alphabet_max=1)
    n = len(digits)
    ref = tuple(b.quasi_digit(i) for i in range(1, n + 1))
    return all(digits[k:] <= ref[: n - k] for k in range(n))


def parry_state(w):
    return w.state


def parry_state_naive(w):
    """Longest ``t`` such that ``w`` ends with ``eps_1 .. eps_t`` (0 if none)."""
    digits = w.digits
    b = w.beta
    top = len(digits) if b.finite_length is None else min(len(digits), b.finite_length)
    for t in range(top, 0, -1):
        if digits[-t:] == tuple(b.eps_digit(i) for i in range(1, t + 1)):
            return t
    return 0


def is_full(w):
    return w.state == 0


def m_index(w):
    """First position where the zero-padded word drops below eps*."""
    b = w.beta
    k = 1
    while True:
        d = w.digits[k - 1] if k <= len(w.digits) else 0
        e = b.quasi_digit(k)
        if d < e:
            return k
        k += 1


def tau(w):
    """Length of the shortest full prefix of the zero-padded word."""
    m = m_index(w)
    M = w.beta.finite_length
    return m if M is None else min(m, M)


def tau_prime(w):
    return w.tau_prime


def n0(w):
    return w.n0


def n1(w):
    return w.n1


# -- enumeration ---------------------------------------------------------------


def enumerate_admissible(b, n, full_only=False, guard=ENUMERATION_GUARD):
    """All admissible words of length ``n`` in lexicographic order.

    Depth-first traversal pruned by the follower automaton.
    """
    b = make_beta(b)
    n = check_length(n, guard=guard)
    out = []
    stack = [Word((), b)]
    while stack:
        w = stack.pop()
        if len(w.digits) == n:
            if not full_only or w.state == 0:
                out.append(w)
            continue
        for d in (1, 0):  # pushed in reverse so 0 pops first
            child = w.extend(d)
            if child is not None:
                stack.append(child)
    return out


def count_admissible(b, n, full_only=False):
    """Number of admissible (or full) words of length ``n``, by state counting."""
    b = make_beta(b)
    n = check_length(n, minimum=0)
    aut = automaton(b)
    counts = {0: 1}
    for _ in range(n):
        nxt = {}
        for t, c in counts.items():
            for d in (0, 1):
                s = aut.step(t, d)
                if s is not None:
                    nxt[s] = nxt.get(s, 0) + c
        counts = nxt
    return counts.get(0, 0) if full_only else sum(counts.values())


def all_admissible_upto(b, n):
    """Admissible words of every length 1..n (lexicographic within each length)."""
    return [w for k in range(1, n + 1) for w in enumerate_admissible(b, k)]


# -- cylinders -----------------------------------------------------------------


@dataclass(frozen=True)
class CylinderInterval:
    left: float
    length: float
    order: int

    @property
    def right(self):
        return self.left + self.length


def cylinder_interval(w):
    """The interval of points whose expansion starts with ``w``.

    Its length is ``beta^-n * T^s(1)`` where ``s`` is the follower state, so
    a full word has length exactly ``beta^-n``.
    """
    b = w.beta
    n = len(w.digits)
    inv = 1 / b.value
    left = _mp.mpf(0)
    power = _mp.mpf(1)
    for d in w.digits:
        power *= inv
        if d:
            left += d * power
    length = _mp.power(b.value, -n) * b.y(w.state)
    return CylinderInterval(float(left), float(length), n)


def cylinder_length_constant(b):
    """``min_s T^s(1)`` over the follower states of a simple base."""
    aut = automaton(b)
    return min(float(b.y(s)) for s in aut.states)


class ZeroRuns(NamedTuple):
    lengths: Tuple[int, ...]
    max_run: int
    truncated: bool


def zero_run_lengths(b, n):
    """Runs of zeros following each of the first ``n`` digits of eps*.

    ``max_run`` is the largest run seen in the window, which is evidence (not
    proof) that the runs stay bounded. ``truncated`` is set when a numeric
    base ran out of known digits before a run ended.
    """
    b = make_beta(b)
    n = check_length(n)
    lengths = []
    truncated = False
    for i in range(1, n + 1):
        run = 0
        while True:
            try:
                d = b.quasi_digit(i + run + 1)
            except UndecidedError:
                truncated = True
                break
            if d != 0:
                break
            run += 1
            if b.quasi is not None and run > b.quasi.compare_span() + n:
                raise DomainError("the quasi-greedy expansion of 1 cannot end in zeros")
        lengths.append(run)
    return ZeroRuns(tuple(lengths), max(lengths), truncated)


# -- long streams --------------------------------------------------------------


def stream_counters(digits, b):
    """Cumulative ``n0``, ``n1`` and the follower state along a digit stream.

    Returns three int arrays of length ``len(digits) + 1`` (index 0 is the
    empty prefix). Raises if the stream is inadmissible.
    """
    b = make_beta(b)
    aut = automaton(b)
    arr = np.asarray(digits, dtype=np.int8).ravel()
    n = arr.size
    c0 = np.zeros(n + 1, dtype=np.int64)
    c1 = np.zeros(n + 1, dtype=np.int64)
    st = np.zeros(n + 1, dtype=np.int64)
    t = 0
    a0 = a1 = 0
    step = aut.step
    allowed = aut.one_allowed
    for i, d in enumerate(arr.tolist()):
        if d == 0:
            if allowed(t):
                a0 += 1
        else:
            a1 += 1
        t = step(t, d)
        if t is None:
            raise InadmissibleWordError(f"stream is inadmissible at digit {i + 1}")
        c0[i + 1] = a0
        c1[i + 1] = a1
        st[i + 1] = t
    return c0, c1, st
