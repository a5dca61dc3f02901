"""Command-line front end: ``betashift <subcommand> [options]``.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 usage
error, 2 domain error, 3 precision or size-guard error.
"""

import argparse
import csv
import io
import json
import os
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import beta_core, dimension, measures, words
from ._validation import check_digits, check_length, parse_probability, word_str
from .errors import BetaShiftError, DomainError, GuardError, PrecisionError
from .simulation import sample_streams

__all__ = ["main", "run"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output --------------------------------------------------------------------


class Table:
    def __init__(self, header, rows):
        self.header = list(header)
        self.rows = [list(r) for r in rows]


def _plain(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, tuple)):
        return " ".join(_plain(v) for v in x)
    if x is None:
        return "none"
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def render(data, fmt):
    if fmt == "json":
        if isinstance(data, Table):
            data = [dict(zip(data.header, r)) for r in data.rows]
        return json.dumps(data, default=_jsonable)
    if fmt == "csv":
        if not isinstance(data, Table):
            if isinstance(data, dict):
                data = Table(data.keys(), [data.values()])
            elif isinstance(data, list):
                data = Table(["value"], [[v] for v in data])
            else:
                data = Table(["value"], [[data]])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(data.header)
        for r in data.rows:
            writer.writerow([_plain(v) if not isinstance(v, str) else v for v in r])
        return buf.getvalue().rstrip("\n")
    if isinstance(data, Table):
        return "\n".join(" ".join(_plain(v) for v in r) for r in data.rows)
    if isinstance(data, dict):
        return "\n".join(f"{k}: {_plain(v)}" for k, v in data.items())
    if isinstance(data, list):
        return "\n".join(_plain(v) for v in data)
    return _plain(data)


# -- argument helpers ----------------------------------------------------------


def _beta(args, required=True):
    given = [x for x in (args.beta_expansion, args.beta, args.family) if x is not None]
    if len(given) > 1:
        raise UsageError("give exactly one of --beta-expansion, --beta, --family")
    if args.beta_expansion is not None:
        return beta_core.beta_from_expansion(args.beta_expansion)
    if args.beta is not None:
        return beta_core.beta_from_value(args.beta, depth=args.depth)
    if args.family is not None:
        if args.m is None:
            raise UsageError("--family needs --m")
        return beta_core.family_10m1(args.m) if args.family == "10m1" else beta_core.family_ones(args.m)
    if required:
        raise UsageError("a base is required: --beta-expansion, --beta or --family")
    return None


def _family_m(args):
    if args.family == "10m1" and args.m is not None and args.beta_expansion is None and args.beta is None:
        return args.m
    b = _beta(args)
    m = dimension.family_index(b)
    if m is None:
        raise DomainError("this command needs a base with expansion of 1 of the form 1 0^m 1")
    return m


def _word(args, b):
    if args.word is None:
        raise UsageError("--word is required")
    return check_digits(args.word, alphabet_max=b.alphabet_max)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("BETASHIFT_SEED")
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError as exc:
        raise UsageError(f"BETASHIFT_SEED is not an integer: {env!r}") from exc


def _grid(text):
    try:
        a, b, n = text.split(":")
        a, b, n = Fraction(a), Fraction(b), int(n)
    except ValueError as exc:
        raise UsageError(f"--p-grid expects a:b:n, got {text!r}") from exc
    if n < 1:
        raise UsageError("--p-grid needs n >= 1")
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def _prob_like(value, template):
    """Keep grid points exact only when the endpoints were written as rationals."""
    return value if "/" in template else float(value)


# -- subcommands ---------------------------------------------------------------


def cmd_expand(args):
    b = _beta(args)
    return word_str(beta_core.beta_expand(args.x, b, args.n))


def cmd_eps1(args):
    b = _beta(args)
    check_length(args.n)
    simple = beta_core.is_simple(b)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        quasi = beta_core.quasi_expansion(b, args.n)
    try:
        eps = beta_core.expansion_of_one(b, args.n)
    except PrecisionError:
        eps = tuple(b.known_digits[: args.n])
    return {
        "beta": str(beta_core._mp.nstr(b.value, 20)),
        "expansion": word_str(eps),
        "quasi": word_str(quasi),
        "simple": simple.simple,
        "M": simple.length,
    }


def cmd_admissible(args):
    b = _beta(args)
    return words.is_admissible(_word(args, b), b)


def cmd_full(args):
    b = _beta(args)
    digits = _word(args, b)
    if not words.is_admissible(digits, b):
        raise DomainError(f"{word_str(digits)} is not admissible")
    return words.Word.make(digits, b).full


def cmd_enumerate(args):
    b = _beta(args)
    if args.counts:
        rows = [(n, words.count_admissible(b, n, args.full_only)) for n in range(1, args.n + 1)]
        return Table(["n", "count"], rows)
    return [str(w) for w in words.enumerate_admissible(b, args.n, args.full_only)]


def cmd_cyl(args):
    b = _beta(args)
    w = words.Word.make(_word(args, b), b)
    c = words.cylinder_interval(w)
    return {
        "word": str(w),
        "left": c.left,
        "length": c.length,
        "order": c.order,
        "state": w.state,
        "full": w.full,
        "n0": w.n0,
        "n1": w.n1,
        "m_index": words.m_index(w),
        "tau": words.tau(w),
        "tau_prime": w.tau_prime,
    }


def _measure(args, b):
    if args.p is None:
        raise UsageError("--p is required")
    return measures.CylWalkMeasure(args.p, b)


def cmd_measure(args):
    b = _beta(args)
    m = _measure(args, b)
    if args.report == "quasi-bernoulli":
        return measures.quasi_bernoulli_report(m, args.max_len).as_dict()
    if args.report == "quasi-invariance":
        return measures.strong_quasi_invariance_report(m, args.max_shift, args.max_len).as_dict()
    if args.report == "witness":
        return measures.nonsimple_witness(m, args.depth_witness)
    w = words.Word.make(_word(args, b), b)  # inadmissible input is a domain error
    if args.shift:
        return measures.shifted_mu(m, w, args.shift)
    return measures.mu_cylinder(m, w)


def cmd_shift_measure(args):
    b = _beta(args)
    m = _measure(args, b)
    return measures.shifted_mu(m, _word(args, b), args.k, args.method)


def cmd_mp(args):
    b = _beta(args)
    m = _measure(args, b)
    target = args.target
    Ks = [int(k) for k in args.K.split(",")]
    rows = []
    for K in Ks:
        est = measures.cesaro_mp(m, target, K, args.method, seed=_seed(args), streams=args.streams)
        rows.append((K, float(est.value), est.half_width))
    table = Table(["K", "estimate", "half_width"], rows)
    if args.format == "csv":
        return table
    out = {"target": target, "estimates": [dict(zip(table.header, r)) for r in rows]}
    m_idx = dimension.family_index(b)
    if m_idx is not None and target == "0":
        out["closed_form"] = measures.mp_zero_interval(m.p, m_idx)
    return out


def cmd_dim(args):
    m = _family_m(args)
    if args.p_grid:
        pts = [_prob_like(v, args.p_grid) for v in _grid(args.p_grid)]
        rows = []
        for p in pts:
            r = dimension.dim_level_set(p, m)
            rows.append((p, r.q, r.dim, r.entropy))
        return Table(["p", "q", "dim", "entropy"], rows)
    if args.p is None:
        raise UsageError("--p or --p-grid is required")
    p = parse_probability(args.p, open_interval=False)
    r = dimension.dim_level_set(p, m)
    out = r.as_dict()
    if args.bounds:
        b = beta_core.family_10m1(m)
        ub = dimension.dim_upper_bound(p, b)
        out["upper_bound"] = ub.value
        out["upper_bound_exceeds_one"] = ub.exceeds_one
        if 0 < p < 1:
            out["tail_bounds"] = list(dimension.dim_tail_bounds(p, b))
    return out


def cmd_markov(args):
    m = _family_m(args)
    if args.p is None:
        raise UsageError("--p is required")
    mm = dimension.markov_from_mu(beta_core.family_10m1(m), args.p)
    out = mm.as_dict()
    out["entropy"] = dimension.markov_entropy(mm)
    out["zero_mass"] = mm.cylinder("0")
    return out


def cmd_entropy_gap(args):
    if args.p is None:
        raise UsageError("--p is required")
    return dimension.entropy_gap_counter(args.p).as_dict()


def _law(args, b):
    if args.p is None:
        raise UsageError("--p is required")
    if args.law == "markov":
        return dimension.markov_from_mu(b, args.p)
    return measures.CylWalkMeasure(args.p, b)


def cmd_simulate(args):
    b = _beta(args)
    law = _law(args, b)
    seed = _seed(args)
    if args.law == "markov":
        r = dimension.frequency_simulation(law, args.n, args.streams, seed)
        return r.as_dict()
    data = sample_streams(law, args.n, seed, streams=args.streams)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            for row in data:
                fh.write("".join("1" if d else "0" for d in row.tolist()) + "\n")
    freq = 1.0 - data.mean(axis=1)
    se = float(freq.std(ddof=1) / np.sqrt(len(freq))) if len(freq) > 1 else float("nan")
    return {"mean": float(freq.mean()), "stderr": se, "streams": args.streams, "n": args.n, "seed": seed}


def cmd_localdim(args):
    b = _beta(args)
    law = _law(args, b)
    depths = [int(d) for d in args.depths.split(",")]
    n = max(depths)
    if args.stream_file:
        with open(args.stream_file, encoding="utf-8") as fh:
            stream = np.array(check_digits(fh.readline().strip()), dtype=np.int8)
    else:
        stream = sample_streams(law, n, _seed(args), stream_ids=[args.stream_id])[0]
    ratios = dimension.local_dim_estimate(stream, measures.CylWalkMeasure(args.p, b), depths)
    return Table(["n", "ratio"], [(d, float(r)) for d, r in zip(depths, ratios)])


def cmd_verify(args):
    from .verify import run_suite

    kwargs = {}
    if args.suite == "markov":
        if args.m is not None:
            kwargs["ms"] = (args.m,)
        if args.p is not None:
            kwargs["p"] = parse_probability(args.p)
    elif args.suite == "dimension":
        if args.grid is not None:
            kwargs["grid"] = args.grid
        if args.m is not None:
            kwargs["ms"] = (args.m,)
    checks = run_suite(args.suite, **kwargs)
    return checks


COMMANDS = {
    "expand": cmd_expand,
    "eps1": cmd_eps1,
    "admissible": cmd_admissible,
    "full": cmd_full,
    "enumerate": cmd_enumerate,
    "cyl": cmd_cyl,
    "measure": cmd_measure,
    "shift-measure": cmd_shift_measure,
    "mp": cmd_mp,
    "dim": cmd_dim,
    "markov": cmd_markov,
    "entropy-gap": cmd_entropy_gap,
    "simulate": cmd_simulate,
    "localdim": cmd_localdim,
    "verify": cmd_verify,
}

DEFAULT_FORMAT = {
    "enumerate": "plain",
    "expand": "plain",
    "admissible": "plain",
    "full": "plain",
    "measure": "plain",
    "shift-measure": "plain",
    "verify": "plain",
    "localdim": "csv",
}


def build_parser():
    parser = _Parser(prog="betashift", description="Symbolic dynamics of beta-shifts.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    common = _Parser(add_help=False)
    g = common.add_argument_group("base")
    g.add_argument("--beta-expansion", help='expansion of 1, e.g. "1 1", "1 0^3 1", "per(100)"')
    g.add_argument("--beta", help="numeric value of beta (exact decimal or rational)")
    g.add_argument("--family", choices=["10m1", "ones"], help="named family of bases")
    g.add_argument("--m", type=int, help="family index")
    g.add_argument("--depth", type=int, default=beta_core.DEFAULT_DEPTH, help="truncation depth for numeric bases")
    common.add_argument("--p", help="probability, e.g. 1/2 (exact) or 0.5")
    common.add_argument("--seed", type=int, help="random seed (default: $BETASHIFT_SEED or 0)")
    common.add_argument("--format", choices=["json", "csv", "plain"])

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("expand", "greedy digits of x")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("eps1", "expansion and quasi-greedy expansion of 1")
    p.add_argument("--n", type=int, default=16)

    for name in ("admissible", "full"):
        p = add(name, f"{name} test for a word")
        p.add_argument("--word")

    p = add("enumerate", "admissible words of a given length")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--full-only", action="store_true")
    p.add_argument("--counts", action="store_true", help='CSV "n,count" for lengths 1..n')

    p = add("cyl", "cylinder interval and counters of a word")
    p.add_argument("--word")

    p = add("measure", "walk measure of a cylinder, or a ratio report")
    p.add_argument("--word")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--report", choices=["quasi-bernoulli", "quasi-invariance", "witness"])
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-shift", type=int, default=6)
    p.add_argument("--depth-witness", type=int, default=40)

    p = add("shift-measure", "measure of a cylinder after k shifts")
    p.add_argument("--word")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["propagate", "enumerate"], default="propagate")

    p = add("mp", "Cesaro estimate of the invariant measure of a cylinder")
    p.add_argument("--target", default="0")
    p.add_argument("--K", default="10000", help="iterations, or a comma list")
    p.add_argument("--method", choices=["propagate", "enumerate", "montecarlo"], default="propagate")
    p.add_argument("--streams", type=int, default=64)

    p = add("dim", "dimension of a digit-frequency level set")
    p.add_argument("--p-grid", help='a:b:n sweep, emitted as CSV "p,q,dim,entropy"')
    p.add_argument("--bounds", action="store_true", help="also report the entropy bounds")

    add("markov", "Markov measure synthesised from the walk measure")
    add("entropy-gap", "entropy chain for the base with expansion 1110")

    p = add("simulate", "sample digit streams")
    p.add_argument("--law", choices=["walk", "markov"], default="walk")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--streams", type=int, default=1)
    p.add_argument("--output", help="write sampled streams to this file (walk law)")

    p = add("localdim", "local dimension ratios along a stream")
    p.add_argument("--law", choices=["walk", "markov"], default="markov")
    p.add_argument("--depths", default="1000,10000,100000")
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--stream-file", help="read the stream (one line of digits) from this file")

    p = add("verify", "run property suites")
    p.add_argument("--suite", choices=["combinatorics", "measures", "markov", "dimension", "all"], default="all")
    p.add_argument("--grid", type=int)
    return parser


def run(argv, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        fmt = args.format
        if fmt is None:
            grid = args.command == "dim" and args.p_grid
            fmt = "csv" if grid else DEFAULT_FORMAT.get(args.command, "json")
        args.format = fmt
        result = COMMANDS[args.command](args)
        if args.command == "verify":
            failed = [c for c in result if not c.passed]
            if fmt == "json":
                text = render([{"name": c.name, "passed": c.passed, "detail": c.detail} for c in result], fmt)
            else:
                text = "\n".join(c.line() for c in result)
            print(text, file=stdout)
            print(f"{len(result) - len(failed)}/{len(result)} checks passed", file=stderr)
            return 1 if failed else 0
        print(render(result, fmt), file=stdout)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=stderr)
        return 2
    except GuardError as exc:
        print(f"size guard: {exc}", file=stderr)
        return 3
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=stderr)
        return 3
    except BetaShiftError as exc:
        print(f"error: {exc}", file=stderr)
        return 3


def main(argv=None):
    with warnings.catch_warnings():
        warnings.simplefilter("default")
        code = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
