"""Command-line front end.

Commands::

    rlam decomp {svd,rsvd,rpca,rrpca,rid,rcur} INPUT --k K [options]
    rlam gen {lowrank,sparse,decaying} --m M --n N --out FILE
    rlam compress IMAGE.pgm --k K --out OUT.pgm
    rlam bench --sizes 500,1000 --k 20 --q-list 0,1,2 --trials 5
    rlam rerun MANIFEST.json [extra args]

Every command writes a JSON manifest next to its output holding the fully
resolved argument vector, so ``rlam rerun`` reproduces the run.  Exit
codes: 0 success, 2 usage or input error, 3 numerical failure.
"""

import argparse
import hashlib
import json
import logging
import os
import platform
import statistics
import sys
import time

import numpy as np

from . import __version__, _backend
from .densemat import NonFiniteError
from .detfact import ConvergenceError
from .idcur import rcur, rid
from .matio import MatrixFormatError, read_matrix, read_pgm, write_bin, write_csv, write_matrix, write_pgm
from .rpca import explained_variance, rpca
from .rrpca import IalmParams, NumericalError, rrpca
from .rsvd import nrmse, reconstruct, rsvd, svd_truncated
from .sketch import SketchSpec
from .synth import SpectrumProfile, gen_decaying, gen_lowrank, gen_lowrank_plus_sparse

log = logging.getLogger("rlam")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3
BENCH_COLUMNS = ("algorithm", "m", "n", "k", "p", "q", "median_seconds", "speedup", "rel_error")


class UsageError(Exception):
    pass


def _seed(value):
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return seed


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_sketch_flags(p):
    p.add_argument("--p", type=int, default=10, help="oversampling (default 10)")
    p.add_argument("--q", type=int, default=2, help="power iterations (default 2)")
    p.add_argument("--sdist", default="normal", choices=["normal", "unif", "uniform", "rademacher"])
    p.add_argument("--scheme", default="subspace", choices=["direct", "subspace", "normalized"])
    p.add_argument("--seed", type=_seed, default=None, help="default: $RLAM_SEED, else 0")


def build_parser():
    parser = argparse.ArgumentParser(prog="rlam", description="Randomized low-rank matrix decompositions.")
    parser.add_argument("--version", action="version", version=f"rlam {__version__}")
    parser.add_argument("--backend", choices=["compiled", "python"], default=None, help="kernel backend")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    parser.add_argument("--manifest", default=None, help="manifest path (default derived from the output)")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decomp", help="decompose a matrix file")
    d.add_argument("algorithm", choices=["svd", "rsvd", "rpca", "rrpca", "rid", "rcur"])
    d.add_argument("input")
    d.add_argument("--format", dest="in_format", choices=["bin", "csv", "pgm"], default=None)
    d.add_argument("--k", type=int, default=None, help="target rank (rrpca predicts its own)")
    _add_sketch_flags(d)
    d.add_argument("--lambda", dest="lam", type=float, default=None)
    d.add_argument("--tol", type=float, default=1e-5)
    d.add_argument("--maxiter", type=int, default=50)
    d.add_argument("--rand", dest="rand", action="store_true", default=True)
    d.add_argument("--deterministic", dest="rand", action="store_false")
    d.add_argument("--mode", choices=["col", "row"], default="col")
    d.add_argument("--idx-only", action="store_true")
    d.add_argument("--center", action=argparse.BooleanOptionalAction, default=True)
    d.add_argument("--scale", action=argparse.BooleanOptionalAction, default=True)
    d.add_argument("--retx", action=argparse.BooleanOptionalAction, default=True)
    d.add_argument("--trace", action="store_true", help="write the rrpca iteration trace")
    d.add_argument("--out-prefix", default="out")

    g = sub.add_parser("gen", help="write a synthetic matrix")
    g.add_argument("kind", choices=["lowrank", "sparse", "decaying"])
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=5)
    g.add_argument("--density", type=float, default=0.2)
    g.add_argument("--amplitude", type=float, default=500.0)
    g.add_argument("--profile", choices=["power_decay", "exp_decay", "exact_rank"], default="power_decay")
    g.add_argument("--rate", type=float, default=1.0)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--seed", type=_seed, default=None)
    g.add_argument("--out", required=True)

    c = sub.add_parser("compress", help="rank-k compression of a PGM image")
    c.add_argument("input")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--method", choices=["rsvd", "svd"], default="rsvd")
    _add_sketch_flags(c)
    c.add_argument("--out", required=True)

    b = sub.add_parser("bench", help="runtime/accuracy table of rsvd against the deterministic SVD")
    b.add_argument("--sizes", type=_int_list, default=[500, 1000, 2000], help="row counts; n = 0.75 m")
    b.add_argument("--k", type=int, default=20)
    b.add_argument("--p", type=int, default=10)
    b.add_argument("--q-list", type=_int_list, default=[0, 1, 2])
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--rank", type=int, default=200, help="intrinsic rank of the test matrices")
    b.add_argument("--seed", type=_seed, default=None)
    b.add_argument("--out", default="bench.csv")

    r = sub.add_parser("rerun", help="repeat a run from its manifest")
    r.add_argument("manifest_path", metavar="MANIFEST")
    r.add_argument("extra", nargs=argparse.REMAINDER, help="arguments appended to the recorded ones")
    return parser


def resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("RLAM_SEED")
    if env is None:
        return 0
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"RLAM_SEED must be an integer in [0, 2**64), got {env!r}") from None


def _sketch(args):
    try:
        return SketchSpec(args.sdist, args.seed, args.p, args.q, args.scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, argv, args, outputs, extra=None):
    inputs = {}
    src = getattr(args, "input", None)
    if src is not None:
        inputs[src] = _sha256(src)
    record = {
        "argv": argv,
        "command": args.command,
        "args": {k: v for k, v in vars(args).items() if k not in ("manifest", "verbose")},
        "seed": getattr(args, "seed", None),
        "backend": _backend.active(),
        "inputs": inputs,
        "outputs": outputs,
        "versions": {
            "rlam": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    if extra:
        record.update(extra)
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, default=str)
        fh.write("\n")
    return path


def _check_k(k, A, upper=None):
    upper = min(A.shape) if upper is None else upper
    if k is None or not 1 <= k <= upper:
        raise UsageError(f"--k must lie in [1, {upper}], got {k}")


def cmd_decomp(args):
    A = read_matrix(args.input, args.in_format)
    pre = args.out_prefix
    algo = args.algorithm
    out = []
    summary = {}

    def save_bin(name, M):
        path = f"{pre}.{name}.bin"
        write_bin(M, path)
        out.append(path)

    def save_csv(name, M, header):
        path = f"{pre}.{name}.csv"
        write_csv(M, path, header)
        out.append(path)

    if algo == "svd" and args.k is None:
        args.k = min(A.shape)
    if algo == "rpca":
        _check_k(args.k, A, min(A.shape[0] - 1, A.shape[1]))
    elif algo != "rrpca":
        _check_k(args.k, A)
    k = args.k

    if algo in ("svd", "rsvd"):
        if algo == "svd":
            res = svd_truncated(A, k)
        else:
            res = rsvd(A, k, _sketch(args))
        save_bin("U", res.U)
        save_csv("d", res.d[:, None], ["d"])
        save_bin("V", res.V)
        summary["rel_error"] = nrmse(A, reconstruct(*res))
    elif algo == "rpca":
        model = rpca(A, k, args.center, args.scale, args.retx, _sketch(args), rand=args.rand)
        prop, cum = explained_variance(model)
        comp = np.arange(1, model.k + 1)
        save_csv("summary", np.column_stack([comp, model.sdev, prop, cum]),
                 ["component", "sdev", "proportion", "cumulative"])
        save_bin("rotation", model.rotation)
        if model.scores is not None:
            save_bin("scores", model.scores)
        if model.center is not None:
            save_csv("center", model.center[:, None], ["center"])
        if model.scale is not None:
            save_csv("scale", model.scale[:, None], ["scale"])
        summary["partial_denominator"] = model.partial_denominator
    elif algo == "rrpca":
        params = IalmParams(args.lam, args.maxiter, args.tol, args.rand, _sketch(args))
        res = rrpca(A, params)
        save_bin("L", res.L)
        save_bin("S", res.S)
        if args.trace:
            save_csv("trace", np.array(res.trace, dtype=np.float64).reshape(-1, 5),
                     ["iteration", "residual", "k", "l", "mu"])
        summary.update(iterations=res.iterations, converged=res.converged,
                       residual=res.trace[-1].residual)
        if not res.converged:
            log.warning("rrpca stopped at maxiter=%d before reaching tol", args.maxiter)
    elif algo == "rid":
        res = rid(A, k, args.mode, _sketch(args), idx_only=args.idx_only)
        save_csv("idx", res.idx[:, None], ["idx"])
        if not args.idx_only:
            save_bin("C" if args.mode == "col" else "R", res.skeleton)
            save_bin("Z", res.Z)
            approx = res.skeleton @ res.Z if args.mode == "col" else res.Z @ res.skeleton
            summary["rel_error"] = nrmse(A, approx)
    else:
        if args.rand:
            res = rcur(A, k, _sketch(args), rand=True, idx_only=args.idx_only)
        else:
            res = rcur(A, k, rand=False, idx_only=args.idx_only)
        save_csv("idx", np.column_stack([res.col_idx, res.row_idx]), ["col_idx", "row_idx"])
        if not args.idx_only:
            save_bin("C", res.C)
            save_bin("U", res.U)
            save_bin("R", res.R)
            summary["rel_error"] = nrmse(A, res.C @ res.U @ res.R)
    for key, val in summary.items():
        print(f"{key}={val}")
    return out, pre, summary


def cmd_gen(args):
    if args.kind == "lowrank":
        A = gen_lowrank(args.m, args.n, args.r, args.seed)
        out = [args.out]
        write_matrix(A, args.out)
    elif args.kind == "sparse":
        A, L0, S0 = gen_lowrank_plus_sparse(args.m, args.n, args.r, args.density, args.amplitude, args.seed)
        stem, ext = os.path.splitext(args.out)
        out = [args.out, f"{stem}.L0{ext}", f"{stem}.S0{ext}"]
        for M, path in zip((A, L0, S0), out):
            write_matrix(M, path)
    else:
        profile = SpectrumProfile(args.profile, args.rate, args.r, args.noise)
        A = gen_decaying(args.m, args.n, profile, args.seed)
        out = [args.out]
        write_matrix(A, args.out)
    return out, args.out, {}


def cmd_compress(args):
    img, maxval = read_pgm(args.input)
    _check_k(args.k, img)
    if args.method == "svd":
        res = svd_truncated(img, args.k)
    else:
        res = rsvd(img, args.k, _sketch(args))
    approx = reconstruct(*res)
    err = nrmse(img, approx)
    write_pgm(approx, args.out, maxval)
    print(f"nrmse={err!r}")
    return [args.out], args.out, {"nrmse": err}


def _median_time(fn, trials):
    """Median wall time over ``trials`` runs after one discarded warm-up run."""
    result = fn()
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def run_bench(sizes, k, p, q_list, trials, rank, seed):
    """Rows of the runtime/accuracy table; see ``BENCH_COLUMNS``."""
    rows = []
    for m in sizes:
        n = int(round(0.75 * m))
        A = gen_lowrank(m, n, min(rank, n), seed)
        base_t, base = _median_time(lambda: svd_truncated(A, k), trials)
        rows.append(("svd_truncated", m, n, k, "", "", base_t, 1.0, nrmse(A, reconstruct(*base))))
        for q in q_list:
            spec = SketchSpec(seed=seed, p=p, q=q)
            t, res = _median_time(lambda: rsvd(A, k, spec), trials)
            rows.append(("rsvd", m, n, k, p, q, t, base_t / t, nrmse(A, reconstruct(*res))))
    return rows


def cmd_bench(args):
    if args.trials < 1 or args.k < 1 or not args.sizes or min(args.sizes) < 2:
        raise UsageError("need --trials >= 1, --k >= 1 and at least one size >= 2")
    for m in args.sizes:
        if args.k > int(round(0.75 * m)):
            raise UsageError(f"--k {args.k} exceeds n = 0.75*{m}")
    rows = run_bench(args.sizes, args.k, args.p, args.q_list, args.trials, args.rank, args.seed)
    with open(args.out, "w") as fh:
        fh.write(",".join(BENCH_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row) + "\n")
    with open(args.out) as fh:
        sys.stdout.write(fh.read())
    return [args.out], args.out, {}


COMMANDS = {"decomp": cmd_decomp, "gen": cmd_gen, "compress": cmd_compress, "bench": cmd_bench}


def _run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if args.command == "rerun":
        return _rerun(args)
    if args.backend:
        _backend.set_backend(args.backend)
    if hasattr(args, "seed"):
        args.seed = resolve_seed(args)
    outputs, stem, summary = COMMANDS[args.command](args)
    resolved = ["--backend", _backend.active(), *argv]
    if hasattr(args, "seed"):
        resolved += ["--seed", str(args.seed)]
    manifest = args.manifest or f"{stem}.manifest.json"
    write_manifest(manifest, resolved, args, outputs, {"summary": summary})
    return EXIT_OK


def _rerun(args):
    with open(args.manifest_path) as fh:
        record = json.load(fh)
    extra = [a for a in args.extra if a != "--"]
    for path, digest in record.get("inputs", {}).items():
        if not os.path.exists(path) or _sha256(path) != digest:
            log.warning("input %s differs from the recorded run", path)
    return _run(record["argv"] + extra)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return _run(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 for --help/--version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ConvergenceError, NumericalError, NonFiniteError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"rlam: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, MatrixFormatError, ValueError, IndexError, OSError) as exc:
        print(f"rlam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
