"""Seeded digit-stream sampling.

Every stream owns a Philox generator keyed by ``(seed, stream_id)`` through
:class:`numpy.random.SeedSequence`, so a stream's digits never depend on how
many other streams are sampled alongside it or in which order.

A stream is a deterministic function of its uniforms: the i-th uniform decides
the i-th *random* step (a state where both digits are possible). Forced steps
consume nothing. When a chain has a single random state the stream is a
sequence of i.i.d. blocks and is generated without a Python-level loop; the
general path gives the same digits, only slower.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ._validation import check_length
from .errors import DomainError, UndecidedError

__all__ = ["DigitChain", "SimStream", "make_generator", "sample_chain", "sample_streams"]

_CHUNK = 1 << 16


def make_generator(seed, stream_id=0):
    """Philox generator for one ``(seed, stream_id)`` pair."""
    seed = int(seed) & ((1 << 64) - 1)
    stream_id = int(stream_id) & ((1 << 64) - 1)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class DigitChain:
    """A finite-state binary digit source.

    ``p0[s]`` is the probability of emitting 0 in state ``s`` (1 forces a 0,
    0 forces a 1); ``next0``/``next1`` give the state after each digit.
    ``initial`` is either a state index or a probability vector.
    """

    p0: np.ndarray
    next0: np.ndarray
    next1: np.ndarray
    initial: Union[int, np.ndarray] = 0
    trap: Optional[int] = None  # state whose digits are unknown (truncated base)

    def __post_init__(self):
        p0 = np.asarray(self.p0, dtype=float)
        if np.any((p0 < 0) | (p0 > 1)):
            raise DomainError("digit probabilities must lie in [0, 1]")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "next0", np.asarray(self.next0, dtype=np.int64))
        object.__setattr__(self, "next1", np.asarray(self.next1, dtype=np.int64))

    @property
    def n_states(self):
        return self.p0.size

    @property
    def random_states(self):
        return np.flatnonzero((self.p0 > 0) & (self.p0 < 1))

    def forced_digit(self, s):
        return 0 if self.p0[s] >= 1 else 1

    def step(self, s, d):
        return int(self.next0[s] if d == 0 else self.next1[s])


def _forced_run(chain, s, stop):
    """Digits emitted from ``s`` until a state in ``stop`` is reached.

    Returns ``(digits, end_state)``; ``end_state`` is None when the forced
    path cycles without ever reaching ``stop``.
    """
    digits = []
    seen = set()
    while s not in stop:
        if s in seen:
            return digits, None
        seen.add(s)
        d = chain.forced_digit(s)
        digits.append(d)
        s = chain.step(s, d)
    return digits, s


def _cycle_fill(chain, s, n):
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        d = chain.forced_digit(s)
        out[i] = d
        s = chain.step(s, d)
    return out


def _initial_state(chain, gen):
    init = chain.initial
    if np.ndim(init) == 0:
        return int(init)
    cdf = np.cumsum(np.asarray(init, dtype=float))
    u = gen.random()
    return int(min(np.searchsorted(cdf, u * cdf[-1], side="right"), cdf.size - 1))


def _sample_blocks(chain, r, s, n, gen):
    """Single-random-state fast path."""
    stop = {r}
    head, at = _forced_run(chain, s, stop)
    if at is None:
        return _cycle_fill(chain, s, n)
    if len(head) >= n:
        return np.asarray(head[:n], dtype=np.int8)
    blocks = []
    for d in (0, 1):
        tail, end = _forced_run(chain, chain.step(r, d), stop)
        if end is None:
            return _sample_general(chain, s, n, gen)
        blocks.append(np.asarray([d] + tail, dtype=np.int8))
    lens = np.array([blocks[0].size, blocks[1].size])
    width = lens.max()
    table = np.zeros((2, width), dtype=np.int8)
    table[0, : lens[0]] = blocks[0]
    table[1, : lens[1]] = blocks[1]
    p0 = chain.p0[r]

    pieces = [np.asarray(head, dtype=np.int8)]
    have = len(head)
    while have < n:
        need = n - have
        count = min(max(need // int(lens.min()) + 1, 1), _CHUNK)
        u = gen.random(count)
        choice = (u >= p0).astype(np.int64)
        blens = lens[choice]
        total = np.cumsum(blens)
        # only keep blocks that start before position n
        keep = int(np.searchsorted(total - blens, need, side="left"))
        choice, blens, total = choice[:keep], blens[:keep], total[:keep]
        starts = total - blens
        idx = np.repeat(np.arange(keep), blens)
        offs = np.arange(int(total[-1])) - np.repeat(starts, blens)
        pieces.append(table[choice[idx], offs])
        have += int(total[-1])
        if keep < count:
            break
    return np.concatenate(pieces)[:n]


def _sample_general(chain, s, n, gen):
    out = np.empty(n, dtype=np.int8)
    p0 = chain.p0.tolist()
    n0 = chain.next0.tolist()
    n1 = chain.next1.tolist()
    buf = gen.random(min(n, _CHUNK)).tolist()
    j = 0
    trap = chain.trap
    for i in range(n):
        if s == trap:
            raise UndecidedError(
                f"stream reached follower state {s}, beyond the known digits of the base", reliable=i
            )
        q = p0[s]
        if q >= 1:
            d = 0
        elif q <= 0:
            d = 1
        else:
            if j == len(buf):
                buf = gen.random(min(n, _CHUNK)).tolist()
                j = 0
            d = 0 if buf[j] < q else 1
            j += 1
        out[i] = d
        s = n0[s] if d == 0 else n1[s]
    return out


def sample_chain(chain, n, gen):
    """One stream of ``n`` digits from ``chain`` using generator ``gen``."""
    n = check_length(n, minimum=0)
    s = _initial_state(chain, gen)
    if n == 0:
        return np.empty(0, dtype=np.int8)
    rand = chain.random_states
    if chain.trap is not None:
        return _sample_general(chain, s, n, gen)
    if rand.size == 0:
        return _cycle_fill(chain, s, n)
    if rand.size == 1:
        return _sample_blocks(chain, int(rand[0]), s, n, gen)
    return _sample_general(chain, s, n, gen)


@dataclass(frozen=True)
class SimStream:
    """A reproducible digit stream: ``law`` is a :class:`DigitChain` or any
    object with a ``chain(n)`` method returning one."""

    seed: int
    stream_id: int
    law: object

    def digits(self, n):
        chain = self.law if isinstance(self.law, DigitChain) else self.law.chain(n)
        return sample_chain(chain, n, make_generator(self.seed, self.stream_id))


def sample_streams(law, n, seed, stream_ids: Optional[Sequence[int]] = None, streams=1):
    """Stack of streams, shape ``(len(stream_ids), n)``.

    Stream ``i`` defaults to id ``i``; the result for a given id does not
    depend on which other ids are requested.
    """
    ids = range(streams) if stream_ids is None else stream_ids
    chain = law if isinstance(law, DigitChain) else law.chain(n)
    rows = [sample_chain(chain, n, make_generator(seed, sid)) for sid in ids]
    return np.vstack(rows) if rows else np.empty((0, n), dtype=np.int8)
