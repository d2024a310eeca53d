"""Command-line entry points: funm, bound, experiment, bench-expsin, selftest.

Exit codes: 0 success, 1 computational failure (singular resolvent,
non-convergence, integrity violation, bad data files), 2 usage errors.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import bounds, experiments, hodlr
from .contour import ContourSpec, PoleSpec, contour_adaptive, funm_with_poles
from .dense import singular_values
from .errors import InvalidInputError
from .functions import function_names, get_function
from .matrixio import parse_complex, read_matrix, write_matrix

_DEFAULT_TOL = float(np.sqrt(np.finfo(np.float64).eps))


def _parse_center(text):
    try:
        if "," in text:
            return parse_complex(text)
        return complex(float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad center {text!r}: {exc}") from None


def _parse_enclosure(text):
    kind, _, value = text.partition(":")
    try:
        if kind == "interval":
            return bounds.enclosure_interval(float(value))
        if kind == "disc":
            return bounds.enclosure_disc(float(value))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(
        f"expected 'interval:<half-width>' or 'disc:<ratio>', got {text!r}"
    )


def _read_poles(path):
    poles = []
    with open(path) as f:
        for number, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise InvalidInputError(
                    f"{path}:{number}: expected 're,im order derivatives...'"
                )
            try:
                location = parse_complex(tokens[0])
                order = int(tokens[1])
                derivs = tuple(parse_complex(t) for t in tokens[2:])
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{number}: {exc}") from None
            poles.append(PoleSpec(location=location, order=order, fj_derivatives=derivs))
    return poles


def _resolve_seed(value):
    if value is not None:
        return value
    env = os.environ.get("HODLR_FUNM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InvalidInputError(f"HODLR_FUNM_SEED must be an integer, got {env!r}") from None


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_funm(args):
    fn = get_function(args.function)
    a = read_matrix(args.matrix)
    argument = hodlr.hodlr_from_dense(a) if args.hodlr else a
    spec = ContourSpec(center=args.center, radius=args.radius, tolerance=args.tol)
    poles = _read_poles(args.poles) if args.poles else []
    result = funm_with_poles(fn, poles, argument, spec)
    if args.hodlr:
        result = hodlr.hodlr_to_dense(result)
    if args.out:
        write_matrix(args.out, result)
    else:
        write_matrix(sys.stdout, result)
    return 0


def _cmd_bound(args):
    fn = get_function(args.function)
    fm = bounds.function_meta(fn, center=0.0, inner_radius=1.0)
    l_values = list(range(1, args.lmax + 1))
    curve = bounds.optimize_bound_curve(fm, args.enclosure, l_values, k=args.k,
                                        kappa_max=args.kappa,
                                        norm_shifted=args.norm, t=args.t)
    lines = ["l,bound"]
    for l, (_, value) in zip(l_values, curve):
        lines.append(f"{l},{value:.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_experiment(args):
    cfg = experiments.ExperimentConfig(
        matrix_kind=args.kind,
        function_name=args.function,
        size=args.m,
        trials=args.trials,
        seed=_resolve_seed(args.seed),
        output_path=args.out,
    )
    text = experiments.run_decay_experiment(cfg)
    if not args.out:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args):
    text = experiments.run_expsin_benchmark(tuple(args.sizes), seed=_resolve_seed(args.seed))
    _emit(text, args.out)
    return 0


def _check_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((96, 96)) + 1j * rng.standard_normal((96, 96))
    back = hodlr.hodlr_to_dense(hodlr.hodlr_from_dense(a))
    assert np.linalg.norm(back - a, 2) <= 1e-12 * np.linalg.norm(a, 2)


def _check_inverse():
    rng = np.random.default_rng(1)
    a = 4.0 * np.eye(96) + rng.standard_normal((96, 96)) / 96.0
    h = hodlr.hodlr_from_dense(a)
    product = hodlr.hodlr_to_dense(hodlr.hodlr_mul(h, hodlr.hodlr_inverse(h)))
    assert np.linalg.norm(product - np.eye(96), 2) <= 1e-10


def _check_quadrature():
    report = contour_adaptive(get_function("exp"), np.array([[0.5]]), ContourSpec())
    assert abs(report.result[0, 0] - math.exp(0.5)) <= 1e-12
    assert report.successive_diffs[-1] <= _DEFAULT_TOL


def _check_pole():
    pole = PoleSpec(location=0.0, order=1, fj_derivatives=(1.0,))
    result = funm_with_poles(get_function("exp_over_sin"), [pole], np.array([[0.5]]))
    assert abs(result[0, 0] - math.exp(0.5) / math.sin(0.5)) <= 1e-10


def _check_dominance():
    cfg = experiments.ExperimentConfig(matrix_kind="tridiag", function_name="exp",
                                       size=32, trials=1, seed=0)
    for row in experiments.run_decay_experiment(cfg).splitlines()[1:]:
        _, _, sigma, bound = row.split(",")
        assert float(sigma) <= float(bound) + 1e-12


def _check_rank_shift():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((16, 16))
    b = np.outer(rng.standard_normal(16), rng.standard_normal(16))
    b += np.outer(rng.standard_normal(16), rng.standard_normal(16))
    sig_a = singular_values(a)
    sig_ab = singular_values(a + b)
    for j in range(1, 15):
        shifted = bounds.composition_singular_bound("rankShift", j + 2, 2, sigmas=sig_a)
        assert sig_ab[j + 1] <= shifted + 1e-12


def _cmd_selftest(args):
    checks = (
        ("hodlr roundtrip", _check_roundtrip),
        ("hodlr inverse", _check_inverse),
        ("adaptive quadrature", _check_quadrature),
        ("pole correction", _check_pole),
        ("decay bound dominance", _check_dominance),
        ("rank-shift lemma", _check_rank_shift),
    )
    failures = 0
    for name, check in checks:
        try:
            check()
        except Exception as exc:  # selftest reports, never crashes
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")
    return 1 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hodlr-funm",
        description="Evaluate functions of quasiseparable matrices by contour "
                    "quadrature and check the off-diagonal decay bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("funm", help="evaluate f(A) for a matrix stored in the text format")
    p.add_argument("matrix", help="path to the input matrix file")
    p.add_argument("--function", required=True, choices=function_names())
    p.add_argument("--center", type=_parse_center, default=0j,
                   help="contour center as 're,im' or a real number")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=_DEFAULT_TOL)
    p.add_argument("--poles", help="pole file: lines 're,im order f0 f1 ...'")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--hodlr", action="store_true", dest="hodlr", default=False,
                       help="evaluate through the HODLR representation")
    group.add_argument("--dense", action="store_false", dest="hodlr")
    p.add_argument("--out", help="output matrix path (default stdout)")
    p.set_defaults(handler=_cmd_funm)

    p = sub.add_parser("bound", help="emit an optimized singular-value bound curve")
    p.add_argument("--enclosure", required=True, type=_parse_enclosure,
                   help="'interval:<half-width>' or 'disc:<ratio>'")
    p.add_argument("--function", default="exp", choices=function_names())
    p.add_argument("--k", type=int, default=1, help="quasiseparable rank")
    p.add_argument("--t", type=int, default=0, help="poles inside the modulus disc")
    p.add_argument("--lmax", type=int, default=20)
    p.add_argument("--kappa", type=float, default=1.0,
                   help="worst trailing eigenvector condition number")
    p.add_argument("--norm", type=float, default=1.0, help="2-norm of the shifted matrix")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("experiment", help="run the decay-dominance experiment")
    p.add_argument("--kind", required=True, choices=experiments.MATRIX_KINDS)
    p.add_argument("--function", default="exp", choices=experiments.DECAY_FUNCTIONS)
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=None,
                   help="overrides the HODLR_FUNM_SEED environment variable")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(handler=_cmd_experiment)

    p = sub.add_parser("bench-expsin", help="time the two e^z/sin(z) evaluation strategies")
    p.add_argument("--sizes", type=int, nargs="+", default=[128, 256])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("selftest", help="run quick invariant checks")
    p.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
