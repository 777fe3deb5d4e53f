"""Command-line interface.

Test functions are given either as JSON (the canonical {n,h,g,values} dump or
the coset-sum shorthand {"terms": [{"coeff": 1, "base": [...], "moduli":
[...]}]}) or as a compact literal like 'chi Z', 'chi 1/3+2Z',
'chi (1/2,1/3)+2Z^2'.  Matrices are JSON arrays of arrays of "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import harness
from .cyclotomic import set_conductor_cap
from .milnor import chain_to_json, dlog_phi_st, phi_st
from .qlinalg import QMatrix, matrix_from_json
from .schwartz import Coset, TestFunction, fourier, indicator, normalize
from .solomon_hu import phi_nsh, phi_sh

Q = Fraction

_CHI_RE = re.compile(r"^chi\s+(?:(\([^)]*\)|[-0-9/]+)\+)?([0-9/]*)Z(?:\^([0-9]+))?$")


def parse_testfunction(text: str) -> TestFunction:
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "terms" in data:
            terms = [
                (
                    Q(t.get("coeff", 1)),
                    Coset(tuple(Q(x) for x in t["base"]), tuple(Q(x) for x in t["moduli"])),
                )
                for t in data["terms"]
            ]
            return normalize(terms)
        return TestFunction.from_json(data)
    m = _CHI_RE.match(text)
    if not m:
        raise ValueError("cannot parse test function %r" % (text,))
    base_s, mod_s, pow_s = m.groups()
    n = int(pow_s) if pow_s else 1
    d = Q(mod_s) if mod_s else Q(1)
    if base_s is None:
        base = (Q(0),) * n
    elif base_s.startswith("("):
        base = tuple(Q(x.strip()) for x in base_s[1:-1].split(","))
        if len(base) != n:
            raise ValueError("base length does not match Z^%d" % n)
    else:
        base = (Q(base_s),) * n if n > 1 else (Q(base_s),)
    return indicator(base, (d,) * n)


def parse_matrices(text: str, n_hint=None):
    data = json.loads(text)
    if data and isinstance(data[0][0], (list,)):
        return [matrix_from_json(m) for m in data]
    # a single matrix: wrap
    if data and not isinstance(data[0][0], list):
        return [matrix_from_json(data)]
    return [matrix_from_json(m) for m in data]


def _emit(args, payload, text_render=None):
    if args.json or text_render is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text_render)


def _report_exit(args, rep) -> int:
    if args.json:
        print(harness.report_to_json_str(rep))
    else:
        print(harness.report_to_text(rep))
    return 0 if rep.passed else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=8, help="series truncation degree (default 8)")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--conductor-cap", type=int, default=None)
    common.add_argument("--json", action="store_true", default=False, help="JSON output (default: text)")
    common.add_argument("--text", dest="json", action="store_false")

    p = argparse.ArgumentParser(prog="shintani", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    for name in ("eval-nsh", "eval-sh", "eval-st", "eval-st-dlog", "compare-main"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("-f", "--function", required=True)
        sp.add_argument("-g", "--matrices", required=True)

    spf = sub.add_parser("fourier", parents=[common])
    spf.add_argument("-f", "--function", required=True)

    spe = sub.add_parser("suite-equivariance", parents=[common])
    spe.add_argument("--trials", type=int, default=20)
    for name in ("suite-cone", "suite-reciprocity", "suite-coboundary", "suite-refinement"):
        sub.add_parser(name, parents=[common])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.conductor_cap:
        set_conductor_cap(args.conductor_cap)
    try:
        return run(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2


def run(args) -> int:
    D = args.degree
    if args.cmd == "fourier":
        f = parse_testfunction(args.function)
        _emit(args, fourier(f).to_json())
        return 0
    if args.cmd in ("eval-nsh", "eval-sh", "eval-st", "eval-st-dlog", "compare-main"):
        f = parse_testfunction(args.function)
        gammas = parse_matrices(args.matrices)
        if args.cmd == "eval-nsh":
            _emit(args, phi_nsh(gammas, f, D).to_json(D))
        elif args.cmd == "eval-sh":
            _emit(args, phi_sh(gammas, f, D).to_json(D))
        elif args.cmd == "eval-st":
            _emit(args, chain_to_json(phi_st(gammas, f)))
        elif args.cmd == "eval-st-dlog":
            _emit(args, dlog_phi_st(gammas, f, D).to_json(D))
        else:
            rep = harness.compare_main(gammas, f, D)
            return _report_exit(args, rep)
        return 0
    if args.cmd == "suite-equivariance":
        return _report_exit(args, harness.suite_equivariance(args.seed, args.n, args.trials, min(D, 6)))
    if args.cmd == "suite-cone":
        return _report_exit(args, harness.suite_cone(min(args.n, 4) if args.n > 2 else 4))
    if args.cmd == "suite-reciprocity":
        return _report_exit(args, harness.suite_reciprocity(args.seed, D))
    if args.cmd == "suite-coboundary":
        return _report_exit(args, harness.suite_coboundary(args.seed, min(D, 6)))
    if args.cmd == "suite-refinement":
        return _report_exit(args, harness.suite_refinement(D))
    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
