"""
Command-line interface.

Exit codes:

    0  success (or any outcome with --report-only)
    1  a verdict failed
    2  bad input: unparsable tensor file, invalid flags or values
    3  optimizer did not converge (entangle without --allow-heuristic) or an
       experiment was inconclusive because too many samples did not converge
    4  resource guard: a net or expansion would exceed the memory limit

The report goes to stdout (or ``--output``); diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from . import experiments as ex
from .nets import MAX_NET_POINTS, NetTooLarge, build_net, certified_upper_bound, covering_check
from .sampling import RngSpec
from .spectral import entanglement_from_norm, spectral_norm
from .tensor_core import BosonState, TensorFileError, read_tensor

log = logging.getLogger("bosonent")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_RESOURCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text: str):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return value


def _uint64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"must be a 64-bit unsigned integer, got {text}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        out = [_unit_interval(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _int_range(text: str) -> list[int]:
    """``40-45,108`` style list of positive integers."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                out.extend(range(lo, hi + 1))
            elif part.strip():
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_uint64, default=42)
    common.add_argument("--stream", type=_uint64, default=0)
    common.add_argument("--threads", type=_positive(int), default=1, help="worker threads (1 = serial)")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--report-only", action="store_true", help="exit 0 whatever the verdicts")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bosonent", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"bosonent {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def optimizer_flags(q):
        q.add_argument("--restarts", type=_positive(int), default=32)
        q.add_argument("--max-iter", type=_positive(int), default=10_000)

    def size_flags(q, samples):
        q.add_argument("--n", type=_positive(int), required=True)
        q.add_argument("--m", type=_positive(int), required=True)
        q.add_argument("--samples", type=_positive(int), default=samples)

    q = sub.add_parser("entangle", parents=[common], help="spectral norm and entanglement of a tensor file")
    q.add_argument("tensor", type=Path)
    q.add_argument("--normalize", action="store_true", help="rescale a non-unit tensor first")
    q.add_argument("--allow-heuristic", action="store_true", help="accept a non-converged optimizer run")
    optimizer_flags(q)

    q = sub.add_parser("sample", parents=[common], help="entanglement floor, ceiling and concentration of Haar states")
    size_flags(q, 1000)
    q.add_argument("--eps", type=_float_list, help="also compare norm tails at these eps")
    optimizer_flags(q)

    q = sub.add_parser("net", parents=[common], help="build an eps-net and test its covering radius")
    q.add_argument("--n", type=_positive(int), required=True)
    q.add_argument("--eps", type=_unit_interval, required=True)
    q.add_argument("--method", choices=("polar", "box"), default="polar")
    q.add_argument("--probes", type=_positive(int), default=10_000)
    q.add_argument("--max-points", type=_positive(int), default=MAX_NET_POINTS)
    q.add_argument("--net-cache-dir", type=Path)

    q = sub.add_parser("certify", parents=[common], help="certify ||T||_inf < eps by exhausting a net")
    q.add_argument("tensor", type=Path)
    q.add_argument("--eps", type=_unit_interval, required=True)
    q.add_argument("--normalize", action="store_true")
    q.add_argument("--max-points", type=_positive(int), default=MAX_NET_POINTS)
    q.add_argument("--net-cache-dir", type=Path)

    q = sub.add_parser("dicke", parents=[common], help="closed-form entanglement of qubit Dicke states")
    q.add_argument("--m", type=_positive(int), required=True)
    optimizer_flags(q)

    q = sub.add_parser("verify-schur", parents=[common], help="Haar average of squared product overlaps")
    size_flags(q, 100_000)
    q.add_argument("--tensors", type=_positive(int), default=10)
    q.add_argument("--sigmas", type=_positive(float), default=5.0)

    q = sub.add_parser("tail", parents=[common], help="norm tails of Haar states, or sphere tails with --d")
    q.add_argument("--n", type=_positive(int))
    q.add_argument("--m", type=_positive(int))
    q.add_argument("--d", type=_positive(int), help="sphere tail of |<Z, e_1>| in C^d instead")
    q.add_argument("--eps", type=_float_list, required=True)
    q.add_argument("--samples", type=_positive(int))
    optimizer_flags(q)

    q = sub.add_parser("table", parents=[common], help="deterministic table of the concentration proof's parameters")
    q.add_argument("--n", type=_positive(int), required=True)
    q.add_argument("--m-list", type=_int_range, default=_int_range("2-120"))
    return p


def _validate(args) -> None:
    n = getattr(args, "n", None)
    if args.command in ("sample", "net", "verify-schur") and n is not None and n < 2:
        raise UsageError("--n must be at least 2")
    if args.command == "tail":
        if args.d is not None:
            if args.n is not None or args.m is not None:
                raise UsageError("--d cannot be combined with --n/--m")
            if args.d < 2:
                raise UsageError("--d must be at least 2")
        elif args.n is None or args.m is None:
            raise UsageError("tail needs --n and --m (or --d)")
        elif args.n < 2:
            raise UsageError("--n must be at least 2")
    if args.command == "dicke" and args.m < 2:
        raise UsageError("--m must be at least 2")
    if args.command == "table" and args.n < 2:
        raise UsageError("--n must be at least 2")


def _load_state(path: Path, normalize: bool) -> BosonState:
    T = read_tensor(path)
    if abs(T.norm() - 1.0) > 1e-8 and not normalize:
        raise UsageError(f"{path}: tensor norm is {T.norm()!r}, not 1; pass --normalize to rescale")
    return BosonState.from_tensor(T, normalize=True)


def _cmd_entangle(args, rng):
    psi = _load_state(args.tensor, args.normalize)
    res = spectral_norm(psi, restarts=args.restarts, max_iter=args.max_iter, rng=rng)
    rep = ex.ExperimentReport("entangle", {"n": psi.n, "m": psi.m, "file": str(args.tensor),
                                           "seed": rng.seed, "stream": rng.stream,
                                           "restarts": args.restarts, "max_iter": args.max_iter})
    rep.empirical[("", "spectral_norm")] = ex.Estimate(res.value)
    rep.empirical[("", "E")] = ex.Estimate(entanglement_from_norm(res.value))
    rep.empirical[("", "converged")] = ex.Estimate(float(res.converged))
    rep.empirical[("", "restarts_converged")] = ex.Estimate(float(res.n_converged))
    rep.empirical[("", "iterations")] = ex.Estimate(float(res.iterations))
    for p, z in enumerate(res.witness, start=1):
        rep.empirical[(f"p={p}", "witness_re")] = ex.Estimate(float(z.real))
        rep.empirical[(f"p={p}", "witness_im")] = ex.Estimate(float(z.imag))
    rep.check("optimizer_convergence", "", "converged", "==", 1.0,
              outcome=ex.PASS if res.converged else (ex.FLAG if args.allow_heuristic else ex.INCONCLUSIVE))
    return [rep]


def _cmd_sample(args, rng):
    outs = ex.optimize_samples(args.n, args.m, args.samples, rng, args.restarts, args.threads)
    reps = [
        ex.max_entanglement_check(args.n, args.m, rng=rng, restarts=args.restarts, outcomes=outs),
        ex.concentration_check(args.n, args.m, rng=rng, restarts=args.restarts, outcomes=outs),
    ]
    if args.eps:
        reps.append(ex.tail_bound_comparison(args.n, args.m, args.eps, rng=rng,
                                             restarts=args.restarts, outcomes=outs))
    return reps


def _cmd_net(args, rng):
    net = build_net(args.n, args.eps, method=args.method, max_points=args.max_points,
                    cache_dir=args.net_cache_dir)
    cov = covering_check(net, probes=args.probes, rng=rng)
    rep = ex.ExperimentReport("net", {"n": args.n, "eps": args.eps, "method": args.method,
                                      "probes": args.probes, "seed": rng.seed, "stream": rng.stream})
    rep.empirical[("", "cardinality")] = ex.Estimate(float(net.cardinality))
    rep.theoretical[("", "cardinality")] = float(net.declared_bound)
    rep.empirical[("", "max_probe_distance")] = ex.Estimate(cov.max_min_distance)
    rep.theoretical[("", "max_probe_distance")] = cov.radius
    rep.empirical[("", "probe_failures")] = ex.Estimate(float(cov.failures))
    rep.check("cardinality_bound", "", "cardinality", "<=", float(net.declared_bound))
    rep.check("covering", "", "probe_failures", "==", 0.0)
    return [rep]


def _cmd_certify(args, rng):
    psi = _load_state(args.tensor, args.normalize)
    res = certified_upper_bound(psi, args.eps, max_points=args.max_points, cache_dir=args.net_cache_dir)
    rep = ex.ExperimentReport("certify", {"n": psi.n, "m": psi.m, "file": str(args.tensor), "eps": args.eps})
    rep.empirical[("", "net_max")] = ex.Estimate(res.net_max)
    rep.theoretical[("", "net_max")] = args.eps / 2
    rep.empirical[("", "net_size")] = ex.Estimate(float(res.net_size))
    rep.empirical[("", "certified")] = ex.Estimate(float(res.certified))
    # failing to certify is an answer, not an error
    rep.check("certified_below_eps", "", "certified", "==", 1.0,
              outcome=ex.PASS if res.certified else "not certified")
    return [rep]


def _cmd_tail(args, rng):
    if args.d is not None:
        return [ex.hiai_petz_tail_check(args.d, args.eps, samples=args.samples or 100_000,
                                        rng=rng, threads=args.threads)]
    return [ex.tail_bound_comparison(args.n, args.m, args.eps, samples=args.samples or 1000, rng=rng,
                                     restarts=args.restarts, threads=args.threads)]


def _run(args) -> list[ex.ExperimentReport]:
    rng = RngSpec(args.seed, args.stream)
    cmd = args.command
    if cmd == "entangle":
        return _cmd_entangle(args, rng)
    if cmd == "sample":
        return _cmd_sample(args, rng)
    if cmd == "net":
        return _cmd_net(args, rng)
    if cmd == "certify":
        return _cmd_certify(args, rng)
    if cmd == "dicke":
        return [ex.dicke_table(args.m, rng=rng, restarts=args.restarts)]
    if cmd == "verify-schur":
        return [ex.verify_schur_average(args.n, args.m, args.samples, rng, tensors=args.tensors,
                                        sigmas=args.sigmas, threads=args.threads)]
    if cmd == "tail":
        return _cmd_tail(args, rng)
    if cmd == "table":
        return [ex.theorem2_parameter_table(args.n, args.m_list)]
    raise UsageError(f"unknown command {cmd}")


def render(reports: Sequence[ex.ExperimentReport], fmt: str) -> str:
    if fmt == "text":
        return "\n".join(r.to_text() for r in reports)
    parts = [r.to_csv().splitlines() for r in reports]
    comments = [ln for p in parts for ln in p if ln.startswith("#")]
    body = [ln for p in parts for ln in p[2:]]
    return "\n".join(comments + [",".join(ex.CSV_COLUMNS)] + body) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        _validate(args)
        reports = _run(args)
    except UsageError as exc:
        print(f"bosonent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TensorFileError as exc:
        print(f"bosonent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NetTooLarge as exc:
        print(f"bosonent: resource limit (--max-points / --eps): {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MemoryError, OverflowError) as exc:
        print(f"bosonent: resource limit (--n / --m): {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OSError, ValueError) as exc:
        print(f"bosonent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    text = render(reports, args.format)
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    for r in reports:
        log.info("%s finished in %.2f s", r.name, r.runtime_seconds)
    if args.report_only:
        return EXIT_OK
    if any(r.inconclusive for r in reports):
        return EXIT_NONCONVERGED
    if not all(r.passed for r in reports):
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
