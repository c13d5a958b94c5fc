"""Command-line front end.

Every command reads JSON state files, prints a JSON report to stdout and
optionally writes it to ``--json-out``.  Exit codes: 0 success, 1 selftest
violation, 2 invalid input, 3 class mismatch or undetermined verdict,
4 internal inconsistency.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from . import states
from .convertibility import PROVENANCE, convertible
from .decomposition import filtering_normal_form_oracle, lsvd
from .distillation import ghz_grid_oracle, optimal_ghz_distillation, optimal_w_distillation
from .exceptions import (ClassError, InternalInconsistency, LorentzSVDError,
                         NormalFormObstruction, SingularMarginalError, ValidationError)
from .io import StateFile, dumps, make_report
from .lorentz import rho_to_r
from .monotones import monotone_report
from .selftest import SUITES, run_suite
from .tripartite import TANGLE_TOL, classify3, marginal_ranks, three_tangle

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_CLASS, EXIT_INTERNAL = 0, 1, 2, 3, 4

RANDOM_KINDS = ("pure2q", "pure3q", "wishart", "werner", "bell-diagonal",
                "ghz-class", "w-class", "generalized-ghz")


class CommandFailed(Exception):
    """Carries a finished report together with a nonzero exit code."""

    def __init__(self, report, code):
        super().__init__(code)
        self.report, self.code = report, code


def _load(path, kind):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    sf = StateFile.loads(text)
    if sf.kind != kind:
        raise ValidationError(f"{path}: expected a {kind} file, got {sf.kind}")
    return sf, text


# --- commands -----------------------------------------------------------------

def cmd_lsvd(args):
    sf, text = _load(args.input, "density2q")
    kw = {} if args.tol is None else {"cluster_tol": args.tol}
    res = lsvd(rho_to_r(sf.payload), **kw)
    out = {"l1": res.l1, "l2": res.l2, "sigma": res.sigma, "s": res.s,
           "normal_form": res.normal_form, "abcd": res.abcd, "residual": res.residual}
    if args.oracle:
        try:
            orc = filtering_normal_form_oracle(sf.payload)
            out["oracle"] = {"converged": orc.converged, "n_iter": orc.n_iter,
                             "s": orc.singular_values if orc.converged else None,
                             "agreement": (float(np.max(np.abs(orc.singular_values - res.s)))
                                           if orc.converged else None)}
        except SingularMarginalError as exc:
            out["oracle"] = {"converged": False, "error": str(exc)}
    return make_report("lsvd", out, [text], args.seed)


def cmd_monotones(args):
    sf, text = _load(args.input, "density2q")
    return make_report("monotones", monotone_report(sf.payload), [text], args.seed)


def cmd_convert(args):
    sf1, t1 = _load(args.source, "density2q")
    sf2, t2 = _load(args.target, "density2q")
    try:
        verdict = convertible(sf1.payload, sf2.payload)
    except NormalFormObstruction as exc:
        rep = make_report("convert", {"verdict": "undetermined", "reason": str(exc)},
                          [t1, t2], args.seed, {"conjecture_conditional": True})
        raise CommandFailed(rep, EXIT_CLASS) from None
    out = verdict.to_dict()
    out["verdict"] = "feasible" if verdict.feasible else "infeasible"
    return make_report("convert", out, [t1, t2], args.seed,
                       {"conjecture_conditional": verdict.provenance == PROVENANCE})


def cmd_classify3(args):
    sf, text = _load(args.input, "pure3q")
    tol = TANGLE_TOL if args.tol is None else args.tol
    out = {"class": classify3(sf.payload, tol), "tau": three_tangle(sf.payload),
           "marginal_ranks": list(marginal_ranks(sf.payload))}
    return make_report("classify3", out, [text], args.seed)


def cmd_distill_ghz(args):
    sf, text = _load(args.input, "pure3q")
    res = optimal_ghz_distillation(sf.payload)
    out = res.to_dict()
    if args.oracle:
        p, a, b = ghz_grid_oracle(sf.payload)
        out["oracle"] = {"p_opt": p, "a": a, "b": b, "agreement": abs(p - res.p_opt)}
    return make_report("distill-ghz", out, [text], args.seed)


def cmd_distill_w(args):
    sf, text = _load(args.input, "pure3q")
    seed = 0 if args.seed is None else args.seed
    tol = 1e-9 if args.tol is None else args.tol
    best, per_party = optimal_w_distillation(sf.payload, args.n_starts, seed, tol)
    out = {"filters": best, "success_probability": best.success_probability,
           "per_party": per_party}
    return make_report("distill-w", out, [text], seed, {"restricted_family": True})


def _random_state(kind, rng, param, weights):
    if kind == "pure2q":
        return "density2q", states.projector(states.haar_pure(2, rng))
    if kind == "pure3q" or kind == "ghz-class":
        return "pure3q", states.haar_pure(3, rng)
    if kind == "wishart":
        return "density2q", states.wishart_state(rng)
    if kind == "werner":
        p = rng.uniform() if param is None else param
        if not 0.0 <= p <= 1.0:
            raise ValidationError("werner parameter must lie in [0, 1]")
        return "density2q", states.werner(p)
    if kind == "bell-diagonal":
        w = rng.dirichlet(np.ones(4)) if weights is None else weights
        return "density2q", states.bell_diagonal(w)
    if kind == "w-class":
        return "pure3q", states.random_w_class(rng)
    if kind == "generalized-ghz":
        p = rng.uniform() if param is None else param
        if not 0.0 < p < 1.0:
            raise ValidationError("generalized GHZ parameter must lie in (0, 1)")
        return "pure3q", states.generalized_ghz(p)
    raise ValidationError(f"unknown random kind {kind!r}")


def cmd_random(args):
    rng = np.random.default_rng(args.seed)
    weights = None
    if args.weights is not None:
        weights = np.array([float(x) for x in args.weights.split(",")])
    kind, payload = _random_state(args.kind, rng, args.param, weights)
    meta = {"generator": args.kind, "seed": args.seed}
    if args.param is not None:
        meta["param"] = repr(args.param)
    if weights is not None:
        meta["weights"] = args.weights
    return StateFile(kind, payload, meta).to_dict()


def cmd_selftest(args):
    seed = 1 if args.seed is None else args.seed
    res = run_suite(args.suite, seed, args.n, args.tol)
    out = res.to_dict()
    if not res.passed:
        path = Path(args.counterexample_out or f"counterexample-{args.suite}.json")
        res.counterexample_file(seed).save(path)
        out["counterexample_file"] = str(path)
        raise CommandFailed(make_report("selftest", out, seed=seed), EXIT_VIOLATION)
    return make_report("selftest", out, seed=seed)


# --- parser -------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed for all randomness")
    common.add_argument("--tol", type=float, default=None, help="command-specific tolerance")
    common.add_argument("--oracle", action="store_true", help="also run the independent oracle")
    common.add_argument("--json-out", metavar="PATH", help="also write the report here")
    common.add_argument("--quiet", action="store_true", help="do not print the report")

    p = argparse.ArgumentParser(prog="lorentzsvd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("lsvd", parents=[common], help="Lorentz singular value decomposition")
    c.add_argument("input")
    c.set_defaults(func=cmd_lsvd)

    c = sub.add_parser("monotones", parents=[common], help="M1, M2, concurrence, negativity")
    c.add_argument("input")
    c.set_defaults(func=cmd_monotones)

    c = sub.add_parser("convert", parents=[common], help="SLOCC convertibility verdict")
    c.add_argument("source")
    c.add_argument("target")
    c.set_defaults(func=cmd_convert)

    c = sub.add_parser("classify3", parents=[common], help="three-qubit SLOCC class")
    c.add_argument("input")
    c.set_defaults(func=cmd_classify3)

    c = sub.add_parser("distill-ghz", parents=[common], help="optimal GHZ distillation")
    c.add_argument("input")
    c.set_defaults(func=cmd_distill_ghz)

    c = sub.add_parser("distill-w", parents=[common], help="W distillation (multi-start)")
    c.add_argument("input")
    c.add_argument("--n-starts", type=int, default=20)
    c.set_defaults(func=cmd_distill_w)

    c = sub.add_parser("random", parents=[common], help="seeded random state file")
    c.add_argument("kind", choices=RANDOM_KINDS)
    c.add_argument("--param", type=float, default=None, help="Werner / generalized GHZ parameter")
    c.add_argument("--weights", default=None, help="comma-separated Bell weights (phi-,phi+,psi-,psi+)")
    c.set_defaults(func=cmd_random)

    c = sub.add_parser("selftest", parents=[common], help="run a property suite")
    c.add_argument("suite", choices=SUITES)
    c.add_argument("--n", type=int, default=None, help="number of trials")
    c.add_argument("--counterexample-out", metavar="PATH", default=None)
    c.set_defaults(func=cmd_selftest)
    return p


def _emit(report, args):
    text = dumps(report)
    if args.json_out:
        Path(args.json_out).write_text(text)
    if not args.quiet:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    code = EXIT_OK
    try:
        report = args.func(args)
    except CommandFailed as exc:
        report, code = exc.report, exc.code
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ClassError, NormalFormObstruction) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except (InternalInconsistency, LorentzSVDError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
