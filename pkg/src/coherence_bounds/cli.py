"""Command-line front end.

Exit codes: 0 success, 1 domain/validation error, 2 inequality violation,
3 I/O or frame-file error.
"""
import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__, sweeps
from .bounds import coherence_lower_bound, renyi_bound
from .coherence import Branch, CoherenceParams, average_coherence, average_renyi_coherence
from .errors import (BranchError, CoherenceError, FrameFileError, InequalityViolation,
                     ValidationError)
from .frames import builtin_ensemble, load_frames
from .states import bloch_qubit, from_pure, maximally_mixed, pseudopure, random_state

EXIT_OK, EXIT_DOMAIN, EXIT_VIOLATION, EXIT_IO = 0, 1, 2, 3


def parse_ensemble(text):
    if text.startswith("file:"):
        return load_frames(text[len("file:"):])
    return builtin_ensemble(text)


def _complex(token):
    token = token.strip().replace(" ", "")
    if token.endswith("i"):
        token = token[:-1] + "j"
    try:
        return complex(token)
    except ValueError:
        raise ValidationError(f"cannot parse complex amplitude {token!r}") from None


def parse_state(text, dim, seed=0):
    """mixed | pure:VEC | pseudopure:V | bloch:R1,R2,R3 | random.

    VEC is a comma-separated list of complex amplitudes (1j or 1i both work)
    and is normalised before use.
    """
    kind, _, arg = text.partition(":")
    if kind == "mixed":
        return maximally_mixed(dim)
    if kind == "random":
        return random_state(dim, seed)
    if kind == "pure":
        v = np.array([_complex(t) for t in arg.split(",")])
        n = np.linalg.norm(v)
        if n == 0:
            raise ValidationError("pure state vector is zero")
        return from_pure(v / n)
    if kind == "pseudopure":
        return pseudopure(float(arg))
    if kind == "bloch":
        r = [float(t) for t in arg.split(",")]
        if len(r) != 3:
            raise ValidationError("bloch needs three components R1,R2,R3")
        return bloch_qubit(*r)
    raise ValidationError(f"unknown state spec {text!r}")


def _check_dim(rho, ens):
    if rho.dim != ens.dim:
        raise ValidationError(f"state has dimension {rho.dim}, ensemble {ens.dim}")


def _params(alpha, beta):
    if alpha is None or beta is None:
        raise ValidationError("--alpha and --beta are required")
    try:
        return CoherenceParams(alpha, beta)
    except BranchError as exc:
        raise BranchError(f"{exc}; the bounds need alpha in (0,1) and beta <= 1 "
                          "(B1: alpha in [1/2,1); B2: alpha < 1/2, beta < 0; "
                          "B3: alpha < 1/2, 0 < beta <= 1)") from None


def _show(x):
    # rounding noise around an exact zero prints as 0
    return sweeps.fmt(0.0 if abs(x) < 1e-14 else x)


def _write(args, text, record):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    record = dict(record, version=__version__, output=args.out,
                  sha256=hashlib.sha256(text.encode()).hexdigest())
    with open(args.out + ".run.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _example(args, build, axis, upper):
    alphas = sweeps.alpha_grid(args.alpha_steps, args.eps)
    xs = np.linspace(0.0, upper, args.state_steps)
    table = build(alphas, xs)
    _write(args, table.to_csv(), {
        "command": args.command,
        "params": {"alpha_steps": args.alpha_steps, "eps": args.eps, axis + "_steps": args.state_steps},
        "seed": None,
        "rows": len(table.rows),
    })
    print(f"max gap {table.max_gap:.6g}, min gap {table.min_gap:.6g} over {len(table.rows)} cells",
          file=sys.stderr)
    return EXIT_OK


def cmd_example1(args):
    return _example(args, sweeps.pseudopure_mub_table, "v", 1.0)


def cmd_example2(args):
    return _example(args, sweeps.sic_bloch_table, "r1", 1 / math.sqrt(2))


def _parse_axis(text):
    try:
        name, start, stop, steps = text.split(":")
        return name, (float(start), float(stop), int(steps))
    except ValueError:
        raise ValidationError(f"axis must be NAME:START:STOP:STEPS, got {text!r}") from None


def cmd_scan(args):
    ens = parse_ensemble(args.ensemble)
    axes = dict(_parse_axis(a) for a in args.axis or [])
    state = None
    if "v" not in axes and "r1" not in axes:
        state = parse_state(args.state, ens.dim, args.seed)
        _check_dim(state, ens)
    spec = sweeps.SweepSpec(ens, axes, alpha=args.alpha, beta=args.beta, state=state, seed=args.seed)
    table = sweeps.scan(spec)
    _write(args, table.to_csv(), {
        "command": "scan",
        "params": {"ensemble": args.ensemble, "axes": {k: list(v) for k, v in axes.items()},
                   "alpha": args.alpha, "beta": args.beta, "state": args.state},
        "seed": args.seed,
        "rows": len(table.rows),
    })
    if table.min_gap < -sweeps.GAP_TOL:
        print(f"inequality violated: min gap {table.min_gap:.6g}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args):
    ens = parse_ensemble(args.target)
    print(ens.report)
    return EXIT_OK if ens.report.passed else EXIT_DOMAIN


def cmd_random_test(args):
    if args.samples < 1:
        raise ValidationError("--samples must be >= 1")
    branches = [Branch(b.strip().upper()) for b in args.branches.split(",")]
    if any(b is Branch.RENYI for b in branches):
        raise ValidationError("branches are B1, B2, B3")
    ens = parse_ensemble(args.ensemble)
    summary = sweeps.random_test(ens, args.samples, args.seed, branches)
    print("\n".join(summary.lines()))
    if summary.argmin is not None:
        print("  argmin state: " + json.dumps(summary.argmin["state"]))
    if not summary.passed:
        for v in summary.violations[: args.max_dump]:
            print("VIOLATION " + json.dumps(v), file=sys.stderr)
        for v in summary.negative_examples[: args.max_dump]:
            print("NEGATIVE BOUND " + json.dumps(v), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _query(args):
    ens = parse_ensemble(args.ensemble)
    rho = parse_state(args.state, ens.dim, args.seed)
    _check_dim(rho, ens)
    return ens, rho, _params(args.alpha, args.beta)


def cmd_coherence(args):
    ens, rho, p = _query(args)
    if p.branch is Branch.RENYI:
        value = average_renyi_coherence(ens, rho, p.alpha)
    else:
        value = average_coherence(ens, rho, p.alpha, p.beta)
    print(_show(value))
    return EXIT_OK


def cmd_bound(args):
    ens, rho, p = _query(args)
    if p.branch is Branch.RENYI:
        value = renyi_bound(rho, ens, p.alpha)
    else:
        value = coherence_lower_bound(rho, ens, p.alpha, p.beta).value
    print(_show(value))
    if args.verbose:
        print(f"branch {p.describe()}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--ensemble", default="mub2",
                        help="mub2 | mub-prime-D | simplex-D | sic2 | basis-D | file:PATH")
    common.add_argument("--state", default="mixed",
                        help="mixed | pure:VEC | pseudopure:V | bloch:R1,R2,R3 | random")

    parser = argparse.ArgumentParser(prog="coherence-bounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in [("example1", cmd_example1, "pseudopure states over three qubit MUBs"),
                            ("example2", cmd_example2, "Bloch states under the qubit SIC-POVM")]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--alpha-steps", type=int, default=sweeps.DEFAULT_ALPHA_STEPS)
        p.add_argument("--state-steps", type=int, default=sweeps.DEFAULT_STATE_STEPS)
        p.add_argument("--eps", type=float, default=sweeps.DEFAULT_EPS)
        p.set_defaults(func=fn)

    p = sub.add_parser("scan", parents=[common], help="grid sweep to CSV")
    p.add_argument("--axis", action="append", metavar="NAME:START:STOP:STEPS",
                   help="swept axis; NAME is alpha, beta, v or r1 (repeatable)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", parents=[common], help="certify a frame ensemble")
    p.add_argument("target", help="builtin name or frame file path (file: prefix optional)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random-test", parents=[common], help="randomized inequality check")
    p.add_argument("--branches", default="B1,B2,B3")
    p.add_argument("--max-dump", type=int, default=5)
    p.set_defaults(func=cmd_random_test)

    p = sub.add_parser("coherence", parents=[common], help="average coherence of one state")
    p.set_defaults(func=cmd_coherence)
    p = sub.add_parser("bound", parents=[common], help="lower bound for one state")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.target.startswith("file:"):
        try:
            builtin_ensemble(args.target)
        except ValidationError:
            args.target = "file:" + args.target
    try:
        return args.func(args)
    except (FrameFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InequalityViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (CoherenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
