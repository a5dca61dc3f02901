"""Property suites run by ``betashift verify``.

Each check returns a :class:`Check`; a suite is a list of them. The checks are
exhaustive over small ranges or exact in rational arithmetic, so a failure is
a bug, not noise.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .beta_core import family_10m1, family_ones, golden_ratio
from .dimension import (
    auxiliary_q,
    dim_level_set,
    dim_upper_bound,
    entropy_gap_counter,
    markov_entropy,
    markov_from_mu,
)
from .measures import CylWalkMeasure, mp_pseudo_golden, mp_zero_interval, quasi_bernoulli_report, shifted_mu
from .measures import strong_quasi_invariance_report
from .words import Word, all_admissible_upto, automaton, count_admissible, cylinder_interval, enumerate_admissible

__all__ = ["Check", "SUITES", "brute_force_count", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _families():
    return [("golden", golden_ratio(), 0), ("1 0 1", family_10m1(1), 1), ("1 0 0 1", family_10m1(2), 2)]


# -- combinatorics -------------------------------------------------------------


def brute_force_count(b, n, full_only=False):
    """Admissible (or full) words of length ``n`` by filtering all ``2^n``
    binary words with the suffix criterion; no automaton involved.

    A word is admissible iff every suffix is at most the same-length prefix of
    the quasi-greedy expansion of 1; it is full iff moreover every suffix
    followed by anything admissible stays admissible, i.e. iff no nonempty
    suffix equals a prefix of the expansion of 1.
    """
    words = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(words.size, dtype=bool)
    full = np.ones(words.size, dtype=bool)
    for L in range(1, n + 1):
        suffix = words & ((1 << L) - 1)
        ref = int("".join(str(b.quasi_digit(i)) for i in range(1, L + 1)), 2)
        ok &= suffix <= ref
        M = b.finite_length
        if M is None or L < M:
            eps = int("".join(str(b.eps_digit(i)) for i in range(1, L + 1)), 2)
            full &= suffix != eps
    return int(np.count_nonzero(ok & full if full_only else ok))


def _pairs(b, max_len):
    words = all_admissible_upto(b, max_len)
    aut = automaton(b)
    for w in words:
        for v in words:
            if aut.run(v.digits, w.state) is not None:
                yield w, v, Word.make(w.digits + v.digits, b)


def combinatorics_suite(max_len=8, count_len=16):
    out = []
    for label, b, m in _families():
        M = b.finite_length
        super_ok = eq_ok = defect_ok = n1_ok = True
        for w, v, wv in _pairs(b, max_len):
            super_ok &= w.n0 <= wv.n0 <= w.n0 + v.n0
            if w.full:
                eq_ok &= wv.n0 == w.n0 + v.n0
            defect_ok &= wv.n0 >= w.n0 + v.n0 - M
            n1_ok &= wv.n1 == w.n1 + v.n1
        out.append(Check(f"[{label}] N0(w) <= N0(ww') <= N0(w) + N0(w')", super_ok))
        out.append(Check(f"[{label}] N0 is additive after a full word", eq_ok))
        out.append(Check(f"[{label}] N0(ww') >= N0(w) + N0(w') - M", defect_ok))
        out.append(Check(f"[{label}] N1 is additive", n1_ok))

        fulls = [w for w in all_admissible_upto(b, max_len) if w.full]
        aut = automaton(b)
        concat_ok = all(aut.run(w.digits + v.digits) == 0 for w in fulls for v in fulls)
        suffix_ok = all(Word.make(w.digits[k:], b).full for w in fulls for k in range(len(w)))
        last0_ok = all(w.digits[-1] == 0 for w in fulls)
        out.append(Check(f"[{label}] full words are closed under concatenation", concat_ok))
        out.append(Check(f"[{label}] every suffix of a full word is full", suffix_ok))
        out.append(Check(f"[{label}] full words end in 0", last0_ok))

        div_ok = all(
            Word.make(tuple(b.quasi_digit(i) for i in range(1, k + 1)), b).full == (k % M == 0)
            for k in range(1, 4 * M + 1)
        )
        out.append(Check(f"[{label}] a prefix of eps* is full iff M divides its length", div_ok))

        counts = [count_admissible(b, n) for n in range(1, count_len + 1)]
        brute = [brute_force_count(b, n) for n in range(1, count_len + 1)]
        full_counts = [count_admissible(b, n, True) for n in range(1, count_len + 1)]
        full_brute = [brute_force_count(b, n, True) for n in range(1, count_len + 1)]
        out.append(Check(f"[{label}] word counts match brute force up to n={count_len}", counts == brute))
        out.append(Check(f"[{label}] full-word counts match brute force", full_counts == full_brute))

        tel_ok = exact_ok = True
        for w in all_admissible_upto(b, max_len - 1):
            parent = cylinder_interval(w)
            kids = [cylinder_interval(c) for c in (w.extend(0), w.extend(1)) if c is not None]
            total = sum(c.length for c in kids)
            tel_ok &= math.isclose(total, parent.length, rel_tol=1e-12)
            tel_ok &= math.isclose(kids[0].left, parent.left, rel_tol=1e-12, abs_tol=1e-15)
            if w.full:
                exact_ok &= parent.length == float(b.power(-len(w)))
        out.append(Check(f"[{label}] sibling cylinder lengths add up to the parent", tel_ok))
        out.append(Check(f"[{label}] full cylinders have length beta^-n exactly", exact_ok))

    for m in range(4):
        b = family_10m1(m)
        ok = True
        for n in range(m + 2, 17):
            for w in enumerate_admissible(b, n):
                ok &= n <= w.n0 + (m + 2) * w.n1 <= n + m + 1
        out.append(Check(f"[1 0^{m} 1] n <= N0 + (m+2) N1 <= n + m + 1 for 2+m <= n <= 16", ok))
    return out


# -- measures ------------------------------------------------------------------


def measures_suite(max_len=12, pair_len=8, p_values=("1/3", "1/2", "2/5")):
    out = []
    bases = _families() + [("1 1 1", family_ones(3), None)]
    for label, b, m in bases:
        for ptxt in p_values:
            mu = CylWalkMeasure(ptxt, b)
            cons = True
            for n in range(1, max_len + 1):
                words = enumerate_admissible(b, n)
                cons &= sum(mu.mu(w) for w in words) == 1
            for w in all_admissible_upto(b, max_len - 1):
                kids = [c for c in (w.extend(0), w.extend(1)) if c is not None]
                cons &= sum(mu.mu(c) for c in kids) == mu.mu(w)
            out.append(Check(f"[{label}, p={ptxt}] children sum to parent and total mass is 1", cons))
        mu = CylWalkMeasure(Fraction(1, 2), b)
        qb = quasi_bernoulli_report(mu, pair_len)
        out.append(
            Check(
                f"[{label}] 1 <= mu[ww']/(mu[w]mu[w']) <= p^-M",
                bool(qb.holds),
                f"max ratio {qb.max_ratio}, bound {qb.bound}",
            )
        )
        sq = strong_quasi_invariance_report(mu, 6, 6)
        out.append(
            Check(
                f"[{label}] p^M <= sigma^k mu[w]/mu[w] <= p^-M",
                bool(sq.holds),
                f"range [{sq.min_ratio}, {sq.max_ratio}]",
            )
        )
    for m in range(3):
        for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            from .measures import cesaro_mp

            est = cesaro_mp(CylWalkMeasure(p, family_10m1(m)), "0", 10_000)
            target = mp_zero_interval(p, m)
            out.append(
                Check(
                    f"[1 0^{m} 1, p={p}] Cesaro average of the zero interval matches the closed form",
                    abs(float(est.value) - float(target)) < 1e-3,
                    f"{float(est.value):.6f} vs {float(target):.6f}",
                )
            )
    cross = all(
        mp_zero_interval(Fraction(i, 100), 0) == mp_pseudo_golden(Fraction(i, 100), 2)[0] for i in range(1, 100)
    )
    out.append(Check("golden ratio closed forms agree across both families", cross))
    return out


# -- markov --------------------------------------------------------------------


def markov_identity_holds(measure, k, max_len):
    """The order-``k`` Markov ratio condition, cross-multiplied, for every
    binary word of length ``k+1 .. max_len``."""
    for L in range(k + 2, max_len + 1):
        for bits in itertools.product((0, 1), repeat=L):
            n = L - k - 1
            whole, head = measure(bits), measure(bits[:-1])
            tail, tail_head = measure(bits[n:]), measure(bits[n:-1])
            if whole * tail_head != head * tail:
                return False
    return True


def markov_suite(ms=(0, 1, 2), p=Fraction(2, 5), shifts=4):
    out = []
    for m in ms:
        b = family_10m1(m)
        k = m + 1
        mu = CylWalkMeasure(p, b)
        aut = automaton(b)

        def walk(bits, j=0):
            if aut.run(bits) is None:
                return Fraction(0)
            return shifted_mu(mu, bits, j) if j else mu.mu(bits)

        ok = all(markov_identity_holds(lambda w, j=j: walk(w, j), k, m + 8) for j in range(shifts + 1))
        out.append(Check(f"[1 0^{m} 1, p={p}] mu and its shifts satisfy the order-{k} Markov condition", ok))

        mm = markov_from_mu(b, p)
        a = mp_zero_interval(p, m)
        zeros = all(mm.cylinder((0,) * j) == j * a - j + 1 for j in range(1, m + 3))
        blocks = all(
            mm.cylinder((0,) * i + (1,) + (0,) * j) == 1 - a for i in range(m + 2) for j in range(m + 2)
        )
        out.append(Check(f"[1 0^{m} 1] lambda[0^j] = j a - j + 1", zeros))
        out.append(Check(f"[1 0^{m} 1] lambda[0^i 1 0^j] = 1 - a", blocks))
        out.append(Check(f"[1 0^{m} 1] pi is stationary and rows are stochastic", mm.stationarity_residual() == 0
                         and all(s == 1 for s in mm.row_sums())))
    return out


# -- dimension -----------------------------------------------------------------


def dimension_suite(grid=25, ms=(0, 1, 2)):
    out = []
    for m in ms:
        b = family_10m1(m)
        lo = (m + 1) / (m + 2)
        ps = [lo + (1 - lo) * (i + 1) / (grid + 1) for i in range(grid)]
        worst = 0.0
        dominated = True
        for p in ps:
            r = dim_level_set(p, m)
            h = markov_entropy(markov_from_mu(b, auxiliary_q(p, m)))
            worst = max(worst, abs(h - r.dim * b.log))
            dominated &= r.dim <= dim_upper_bound(p, b).value
        out.append(Check(f"[1 0^{m} 1] Markov entropy equals dim * log(beta)", worst < 1e-10, f"max error {worst:.2e}"))
        out.append(Check(f"[1 0^{m} 1] level-set dimension is below the entropy bound", dominated))
        ends = dim_level_set(Fraction(m + 1, m + 2), m).dim == 0 and dim_level_set(1, m).dim == 0
        out.append(Check(f"[1 0^{m} 1] dimension vanishes at both ends of the spectrum", ends))
    gaps = [entropy_gap_counter(Fraction(i, 100)) for i in range(1, 100)]
    worst = min(gaps, key=lambda g: g.gap)
    out.append(Check("entropy gap for 1110 is positive and b != x_star on the 99-point grid",
                     all(g.gap > 0 and g.b != g.x_star for g in gaps), f"min gap {worst.gap:.3e}"))
    out.append(Check("entropy gap for 1110 exceeds 1e-6 on the 99-point grid", worst.gap > 1e-6,
                     f"min gap {worst.gap:.3e} at p={worst.p}"))
    out.append(Check("closed-form maximiser matches golden-section search",
                     all(abs(g.x_star - g.x_search) < 1e-8 for g in gaps)))
    return out


SUITES = {
    "combinatorics": combinatorics_suite,
    "measures": measures_suite,
    "markov": markov_suite,
    "dimension": dimension_suite,
}


def run_suite(name, **kwargs):
    if name == "all":
        return [c for key in SUITES for c in SUITES[key]()]
    return SUITES[name](**kwargs)
