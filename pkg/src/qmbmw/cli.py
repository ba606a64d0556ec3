"""Batch entry point: configure an instance, run suites, emit reports.

Reports are JSON lines (one check record per line) followed by a summary
object.  Identical (config, seed) runs produce byte-identical output
except for the elapsedMs timing fields.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__, qma
from .bmwrep import (antisymmetrizer, contractor, symmetrizer,
                     verify_appendices, verify_morphisms,
                     verify_proposition22)
from .report import CheckRecord
from .rmatrix import (RMatrixError, make_bmw, make_standard_r,
                      verify_bmw_type, verify_k_identities)
from .scalars import (InadmissibleParameters, PRIMES, PrimeField,
                      PrimeUnlucky, RationalField, ScalarError)
from .tensorops import LegError, dump_json, load_json
from .twistmaps import (FNotStrict, NotCompatible, make_pair, operator_g,
                        verify_twist_calculus)


class ConfigError(Exception):
    pass


SUITE_ORDER = ["rmatrix", "idempotents", "contractors", "appendix",
               "twist", "qma"]
FAMILIES = {"so": "orthogonal", "sp": "symplectic"}
OPERATORS = ["R", "K", "psiR", "E", "G", "aN", "sN", "c2N"]


class RunConfig:
    def __init__(self, family, dim, q_text, f_choice, max_degree, backend,
                 primes, suites, seed, out_path, r_path=None):
        if family not in ("so", "sp", "import"):
            raise ConfigError("unknown family %r" % family)
        if family == "import" and not r_path:
            raise ConfigError("--family import needs --r-matrix PATH")
        if not isinstance(dim, int) or dim < 2:
            raise ConfigError("dimV must be an integer >= 2")
        _validate_ratio(q_text)
        if not (1 <= max_degree <= 4):
            raise ConfigError("max-degree must be between 1 and 4")
        if backend not in ("rational", "modular"):
            raise ConfigError("unknown backend %r" % backend)
        if not (1 <= primes <= len(PRIMES)):
            raise ConfigError("primes must be between 1 and %d" % len(PRIMES))
        expanded = []
        for s in suites:
            if s == "all":
                expanded.extend(SUITE_ORDER)
            elif s in SUITE_ORDER:
                expanded.append(s)
            else:
                raise ConfigError("unknown suite %r" % s)
        self.suites = [s for s in SUITE_ORDER if s in expanded]
        if "qma" in self.suites:
            if max_degree < 2:
                raise ConfigError("the qma suite needs max-degree >= 2")
            if max_degree >= 4 and backend == "rational":
                raise ConfigError("degree 4 needs the modular backend")
        self.family = family
        self.dim = dim
        self.q_text = q_text
        self.f_choice = f_choice
        self.max_degree = max_degree
        self.backend = backend
        self.primes = primes
        self.seed = seed
        self.out_path = out_path
        self.r_path = r_path

    def echo(self):
        doc = {
            "family": self.family,
            "dimV": self.dim,
            "q": self.q_text,
            "fChoice": self.f_choice,
            "maxDegree": self.max_degree,
            "backend": self.backend,
            "primes": self.primes,
            "suites": self.suites,
            "seed": self.seed,
        }
        if self.r_path:
            doc["rMatrix"] = self.r_path
        return doc


def _validate_ratio(text):
    text = text.strip()
    parts = text.split("/")
    if len(parts) > 2:
        raise ConfigError("malformed scalar literal %r" % text)
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ConfigError("malformed scalar literal %r" % text)
    if len(nums) == 2 and nums[1] == 0:
        raise ConfigError("zero denominator in %r" % text)


def _build_bmw(config, field):
    q = field.parse(config.q_text)
    if config.family == "import":
        op = load_json(config.r_path, field)
        return make_bmw(op, q, field, max_order=4, label="import")
    return make_standard_r(FAMILIES[config.family], config.dim, q, field,
                           max_order=4)


def _build_pair(config, bmw, field):
    if config.f_choice == "P":
        return make_pair(bmw, bmw.P, "P")
    if config.f_choice == "R":
        return make_pair(bmw, bmw.R, "R")
    return make_pair(bmw, load_json(config.f_choice, field), "import")


def _run_pass(config, field):
    """One full verification pass over the selected suites; returns the
    check records and the qma graded dimensions (if computed)."""
    rng = random.Random(config.seed)
    records = []
    dims = None
    bmw = _build_bmw(config, field)
    pair = None
    for name in config.suites:
        if name == "rmatrix":
            records.extend(verify_bmw_type(bmw).records)
            records.extend(verify_k_identities(bmw, 3).records)
        elif name == "idempotents":
            records.extend(verify_proposition22(bmw, 4).records)
        elif name == "contractors":
            records.extend(verify_morphisms(bmw, 3).records)
        elif name == "appendix":
            records.extend(verify_appendices(bmw, 2).records)
        else:
            if pair is None:
                pair = _build_pair(config, bmw, field)
            if name == "twist":
                records.extend(verify_twist_calculus(pair, rng, 5).records)
            else:
                reducer = qma.build_reducer(pair, config.max_degree)
                dims = list(reducer.dims)
                records.extend(qma.verify_algebra(pair, reducer).records)
                records.extend(qma.star_identities(pair, reducer).records)
                records.extend(qma.verify_lemma51(pair, reducer).records)
                records.extend(qma.verify_newton_wronski(
                    pair, reducer, config.max_degree).records)
                records.extend(qma.verify_inversion_identities(
                    pair, reducer).records)
    return records, dims


def _signature(records):
    return [(r.suite, r.check, r.status) for r in records]


def run_verify(config):
    """Execute the configured suites; returns (lines, exit_code)."""
    used = []
    if config.backend == "rational":
        records, dims = _run_pass(config, RationalField())
    else:
        passes = []
        supply = iter(PRIMES)
        while len(passes) < config.primes:
            try:
                p = next(supply)
            except StopIteration:
                raise ConfigError("prime supply exhausted")
            try:
                recs, dm = _run_pass(config, PrimeField(p))
            except PrimeUnlucky:
                continue
            passes.append((recs, dm))
            used.append(p)
        records, dims = passes[0]
        agree = all(_signature(r) == _signature(records) and d == dims
                    for r, d in passes[1:])
        records.append(CheckRecord(
            "cli", "prime-agreement", {"primes": used},
            "pass" if agree else "fail",
            None if agree else [{"reason": "per-prime reports disagree"}]))

    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for r in records:
        counts[r.status] += 1
    lines = [json.dumps(r.to_json(), sort_keys=True) for r in records]
    summary = {
        "toolVersion": __version__,
        "config": config.echo(),
        "seed": config.seed,
        "counts": counts,
    }
    if used:
        summary["primesUsed"] = used
    if dims is not None:
        summary["gradedDimensions"] = dims
    lines.append(json.dumps({"summary": summary}, sort_keys=True))
    return lines, (0 if counts["fail"] == 0 else 1)


def dump_operator(config, which, order, out_path):
    """Write one constructed operator as bit-exact JSON."""
    if which not in OPERATORS:
        raise ConfigError("unknown operator %r" % which)
    if which in ("aN", "sN", "c2N"):
        if not (1 <= order <= config.max_degree):
            raise ConfigError("order %d exceeds max-degree %d"
                              % (order, config.max_degree))
    field = RationalField() if config.backend == "rational" \
        else PrimeField(PRIMES[0])
    bmw = _build_bmw(config, field)
    if which == "R":
        op = bmw.R
    elif which == "K":
        op = bmw.K
    elif which == "psiR":
        op = bmw.psiR
    elif which == "E":
        op = bmw.E
    elif which == "G":
        pair = _build_pair(config, bmw, field)
        op = operator_g(pair)[0]
    elif which == "aN":
        op = antisymmetrizer(order, bmw, order)
    elif which == "sN":
        op = symmetrizer(order, bmw, order)
    else:
        op = contractor(2 * order, bmw, 2 * order)
    dump_json(op, field, out_path)


def _add_common(sub):
    sub.add_argument("--family", default="so", help="so, sp or import")
    sub.add_argument("--dim", type=int, default=3, help="dimension of V")
    sub.add_argument("--q", default="7/5", help="value of q, e.g. 7/5")
    sub.add_argument("--f-matrix", default="P",
                     help="P, R or a JSON operator path")
    sub.add_argument("--max-degree", type=int, default=3)
    sub.add_argument("--backend", default=None,
                     help="rational or modular (default rational, "
                          "overridden by QMBMW_BACKEND)")
    sub.add_argument("--primes", type=int, default=2,
                     help="independent primes for the modular backend")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--r-matrix", default=None,
                     help="JSON path of R for --family import")
    sub.add_argument("--out", default=None)


def _config_from(args, suites):
    backend = args.backend
    if backend is None:
        backend = os.environ.get("QMBMW_BACKEND", "rational")
    return RunConfig(args.family, args.dim, args.q, args.f_matrix,
                     args.max_degree, backend, args.primes, suites,
                     args.seed, args.out, args.r_matrix)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="qmbmw",
        description="exact verification of BMW-type R-matrices and their "
                    "quantum matrix algebras")
    subs = parser.add_subparsers(dest="command", required=True)
    pv = subs.add_parser("verify", help="run verification suites")
    pv.add_argument("--suite", action="append", default=None,
                    help="one of %s or all (repeatable)" % ", ".join(SUITE_ORDER))
    _add_common(pv)
    pd = subs.add_parser("dump", help="write one operator as JSON")
    pd.add_argument("--operator", required=True,
                    help="one of %s" % ", ".join(OPERATORS))
    pd.add_argument("--order", type=int, default=2)
    _add_common(pd)
    args = parser.parse_args(argv)

    try:
        if args.command == "verify":
            config = _config_from(args, args.suite or ["all"])
            lines, code = run_verify(config)
            text = "\n".join(lines) + "\n"
            if config.out_path:
                with open(config.out_path, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return code
        config = _config_from(args, [])
        if not args.out:
            raise ConfigError("dump needs --out PATH")
        dump_operator(config, args.operator, args.order, args.out)
        return 0
    except (ConfigError, ScalarError, RMatrixError, NotCompatible,
            FNotStrict, InadmissibleParameters, LegError, qma.QmaError,
            OSError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
