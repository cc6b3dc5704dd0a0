"""Command-line interface.

Exit codes: 0 success / certification pass, 1 certification failure
(violations found), 2 usage error, 3 input-format error.  Stochastic
subcommands require an explicit --seed; every numeric output file gets a
RunManifest sidecar, and identical invocations produce byte-identical
outputs on one platform.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from . import lyapunov as lyap
from . import matrices as mat
from . import numrange as nr
from . import polytopes as poly
from . import spectral as sp
from .errors import ConvexRangeError, InputFormatError
from .manifest import RunManifest
from .selftest import run_selftest

EXIT_OK = 0
EXIT_CERT_FAIL = 1
EXIT_USAGE = 2
EXIT_INPUT = 3


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(args, command, seeds, inputs, outcome):
    man = RunManifest(
        command=command,
        parameters={
            k: v for k, v in sorted(vars(args).items())
            if k != "func" and v is not None
        },
        seeds=seeds,
        outcome=outcome,
    )
    for name, path in inputs.items():
        man.add_input(name, path)
    return man


def _emit(man, *paths):
    for p in paths:
        if p:
            man.write_sidecar(p)


def _parse_weights(args, n):
    if args.c is not None:
        try:
            vals = [float(x) for x in args.c.split(",")]
        except ValueError as exc:
            raise InputFormatError(f"bad --c list: {exc}") from exc
        return np.array(vals)
    if args.c_matrix is not None:
        return mat.load_matrix(args.c_matrix)
    raise InputFormatError("mode c needs --c or --c-matrix")


def _mode_param(args, b):
    if args.mode == "k":
        if args.k is None:
            raise InputFormatError("mode k needs --k")
        return args.k
    return _parse_weights(args, b.shape[0])


def cmd_numrange(args) -> int:
    b = mat.load_matrix(args.matrix)
    param = _mode_param(args, b)
    curve = nr.boundary_polygon(b, args.mode, param, args.angles)
    outcome = {"angles": args.angles, "flat_angles": int(curve.flat.sum())}
    report_payload = {"mode": args.mode, "n": b.shape[0],
                      "polygon_area": curve.polygon_area(),
                      "flat_angles": int(curve.flat.sum())}
    samples = None
    certified_ok = True
    if args.samples:
        if args.seed is None:
            raise InputFormatError("--samples requires --seed")
        samples = nr.sample_range(b, args.mode, param, args.samples, args.seed)
        region = nr.certify_convexity(samples, curve, args.tol)
        report_payload["certification"] = region.to_json()
        outcome["n_outside"] = region.n_outside
        certified_ok = region.passed
    curve.write_csv(args.out)
    man = _manifest(args, "numrange", {"seed": args.seed},
                    {"matrix": args.matrix}, outcome)
    _emit(man, args.out)
    if args.report:
        _write_json(args.report, report_payload)
        _emit(man, args.report)
    if args.plot:
        from .plotting import plot_range_certificate
        plot_range_certificate(curve, samples, args.plot,
                               title=f"mode {args.mode} boundary")
        _emit(man, args.plot)
    return EXIT_OK if certified_ok else EXIT_CERT_FAIL


def cmd_certify(args) -> int:
    b = mat.load_matrix(args.matrix)
    param = _mode_param(args, b)
    curve, samples, region, attained = nr.certification_run(
        b, args.mode, param, args.samples, args.seed,
        m_angles=args.angles, tol=args.tol)
    payload = {
        "mode": args.mode,
        "n": b.shape[0],
        "certification": region.to_json(),
        "attainment": attained,
        "pass": region.passed and attained,
    }
    outcome = {"pass": payload["pass"], "n_outside": region.n_outside,
               "max_violation": region.max_violation}
    man = _manifest(args, "certify", {"seed": args.seed},
                    {"matrix": args.matrix}, outcome)
    if args.out:
        with open(args.out, "w") as fh:
            for x, y in samples:
                fh.write(f"{x:.17g},{y:.17g}\n")
        _emit(man, args.out)
    if args.report:
        _write_json(args.report, payload)
        _emit(man, args.report)
    if args.plot:
        from .plotting import plot_range_certificate
        plot_range_certificate(curve, samples, args.plot,
                               title="range certification")
        _emit(man, args.plot)
    if not args.quiet:
        print(json.dumps(payload["certification"]), file=sys.stderr)
    return EXIT_OK if payload["pass"] else EXIT_CERT_FAIL


def cmd_faces_qk(args) -> int:
    a = mat.load_matrix(args.matrix)
    extreme = sp.is_trace_slice_extreme(a, args.k)
    dim = sp.trace_slice_face_dimension(a, args.k)
    face = sp.minimal_interval_face(a)
    payload = {"extreme": extreme, "face_dim": dim, "rank_r": face.rank_r}
    text = json.dumps(payload, sort_keys=True)
    print(text)
    if args.report:
        _write_json(args.report, payload)
        man = _manifest(args, "faces qk", {}, {"matrix": args.matrix}, payload)
        _emit(man, args.report)
    return EXIT_OK


def cmd_faces_polytope(args) -> int:
    K = poly.load_polytope(args.polytope)
    H = poly.load_subspace(args.subspace, d=K.d)
    report = poly.check_intersection_theorem(K, H)
    payload = report.to_json()
    print(json.dumps(payload["summary"], sort_keys=True))
    if args.report:
        _write_json(args.report, payload)
        man = _manifest(args, "faces polytope", {},
                        {"polytope": args.polytope, "subspace": args.subspace},
                        payload["summary"])
        _emit(man, args.report)
    return EXIT_OK if report.all_pass else EXIT_CERT_FAIL


def cmd_faces_suite(args) -> int:
    progress = None
    if not args.quiet:
        progress = lambda done, total: print(
            f"  {done}/{total} trials", file=sys.stderr)
    report = poly.run_intersection_suite(args.trials, args.seed,
                                         progress=progress)
    payload = report.to_json()
    print(json.dumps({k: v for k, v in payload.items() if k != "failures"},
                     sort_keys=True))
    if args.report:
        _write_json(args.report, payload)
        man = _manifest(args, "faces suite", {"seed": args.seed}, {},
                        {"all_pass": report.all_pass})
        _emit(man, args.report)
    return EXIT_OK if report.all_pass else EXIT_CERT_FAIL


def cmd_majorize(args) -> int:
    try:
        c = np.array([float(x) for x in args.c.split(",")])
        b = np.array([float(x) for x in args.b.split(",")])
    except ValueError as exc:
        raise InputFormatError(f"bad weight list: {exc}") from exc
    result = sp.majorizes(b, c)
    payload = {"majorized": result}
    if result and args.emit_steps:
        steps = sp.pinching_sequence(c, b)
        payload["steps"] = [
            {"i": s.i, "j": s.j, "lambda": s.lam} for s in steps
        ]
        _write_json(args.emit_steps, payload)
        man = _manifest(args, "majorize", {}, {}, {"majorized": result})
        _emit(man, args.emit_steps)
    print(json.dumps({"majorized": result}))
    return EXIT_OK if result else EXIT_CERT_FAIL


def cmd_lyapunov(args) -> int:
    m = lyap.load_measure(args.measure) if args.measure else None
    man_inputs = {"measure": args.measure} if args.measure else {}
    if args.action in ("range", "constrained"):
        if args.action == "range":
            sample = lyap.range_bruteforce(m)
        else:
            eta = args.eta if args.eta is not None else lyap.default_eta(m)
            sample = lyap.constrained_range(m, eta)
        sample.write_csv(args.out)
        outcome = {"n_points": len(sample), "eta": sample.eta}
        man = _manifest(args, f"lyapunov {args.action}", {"seed": args.seed},
                        man_inputs, outcome)
        _emit(man, args.out)
        if args.report:
            _write_json(args.report, outcome)
            _emit(man, args.report)
        if args.plot:
            from .plotting import plot_point_cloud
            plot_point_cloud(sample.points, args.plot,
                             title=f"attained range ({len(sample)} points)")
            _emit(man, args.plot)
        return EXIT_OK
    if args.action == "refine-study":
        if args.seed is None:
            raise InputFormatError("refine-study requires --seed")
        study = lyap.refinement_study(m, args.rounds, args.pairs, args.seed,
                                      eta=args.eta)
        payload = {"rounds": study}
        _write_json(args.out, payload)
        man = _manifest(args, "lyapunov refine-study", {"seed": args.seed},
                        man_inputs, {"n_rounds": len(study)})
        _emit(man, args.out)
        if args.plot:
            from .plotting import plot_refinement_study
            plot_refinement_study(study, args.plot, title="refinement study")
            _emit(man, args.plot)
        return EXIT_OK
    if args.action == "vertices":
        sols = lyap.extreme_solutions(m)
        with open(args.out, "w") as fh:
            for g in sols.vertices:
                fh.write(",".join(f"{x:.17g}" for x in g) + "\n")
        outcome = {"n_vertices": len(sols), "complete": sols.complete,
                   "max_fractional": max(
                       (lyap.fractional_count(g) for g in sols.vertices),
                       default=0)}
        man = _manifest(args, "lyapunov vertices", {}, man_inputs, outcome)
        _emit(man, args.out)
        if args.report:
            _write_json(args.report, outcome)
            _emit(man, args.report)
        return EXIT_OK
    if args.action == "projections":
        if args.matrix is None:
            raise InputFormatError("projections needs --matrix")
        if args.seed is None:
            raise InputFormatError("projections requires --seed")
        b = mat.load_matrix(args.matrix)
        pts, report, curve = lyap.projection_trace_range(
            b, args.k, args.samples, args.seed, tol=args.tol)
        with open(args.out, "w") as fh:
            for x, y in pts:
                fh.write(f"{x:.17g},{y:.17g}\n")
        payload = report.to_json()
        man = _manifest(args, "lyapunov projections", {"seed": args.seed},
                        {"matrix": args.matrix}, payload)
        _emit(man, args.out)
        if args.report:
            _write_json(args.report, payload)
            _emit(man, args.report)
        if args.plot:
            from .plotting import plot_point_cloud
            scaled = curve.support_points * (args.k / b.shape[0])
            plot_point_cloud(pts, args.plot, extra=scaled,
                             title="projection trace range")
            _emit(man, args.plot)
        return EXIT_OK if report.passed else EXIT_CERT_FAIL
    raise InputFormatError(f"unknown lyapunov action {args.action!r}")


def cmd_selftest(args) -> int:
    ok = run_selftest(verbose=not args.quiet)
    return EXIT_OK if ok else EXIT_CERT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexrange",
        description="Convex ranges of matrices and measures, with "
                    "certification oracles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p):
        p.add_argument("--matrix", required=True, help="matrix JSON file")
        p.add_argument("--mode", choices=("k", "c"), default="k")
        p.add_argument("--k", type=int, help="frame rank for mode k")
        p.add_argument("--c", help="comma-separated weights for mode c")
        p.add_argument("--c-matrix", help="Hermitian weight matrix JSON")
        p.add_argument("--angles", type=int, default=720)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("numrange", help="boundary sweep (+ optional sampling)")
    add_mode(p)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="boundary CSV path")
    p.add_argument("--report", help="report JSON path")
    p.add_argument("--plot", help="figure PNG path")
    p.set_defaults(func=cmd_numrange)

    p = sub.add_parser("certify", help="convexity certification pipeline")
    add_mode(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="sample CSV path")
    p.add_argument("--report", help="report JSON path")
    p.add_argument("--plot", help="figure PNG path")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("faces", help="face computations")
    fsub = p.add_subparsers(dest="faces_action", required=True)
    pq = fsub.add_parser("qk", help="matrix trace-slice face data")
    pq.add_argument("--matrix", required=True)
    pq.add_argument("--k", type=int, required=True)
    pq.add_argument("--report")
    pq.set_defaults(func=cmd_faces_qk)
    pp = fsub.add_parser("polytope", help="face identity for K ∩ H")
    pp.add_argument("--polytope", required=True)
    pp.add_argument("--subspace", required=True)
    pp.add_argument("--report")
    pp.set_defaults(func=cmd_faces_polytope)
    ps = fsub.add_parser("suite", help="randomized face-identity suite")
    ps.add_argument("--trials", type=int, default=1000)
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--report")
    ps.add_argument("--quiet", action="store_true")
    ps.set_defaults(func=cmd_faces_suite)

    p = sub.add_parser("qk", help="alias for `faces qk`")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_faces_qk)

    p = sub.add_parser("majorize", help="majorization check / pinching steps")
    p.add_argument("--c", required=True, help="source vector, e.g. '3,1'")
    p.add_argument("--b", required=True, help="target vector, e.g. '2,2'")
    p.add_argument("--emit-steps", help="write pinching steps JSON here")
    p.set_defaults(func=cmd_majorize)

    p = sub.add_parser("lyapunov", help="discretized vector-measure ranges")
    p.add_argument("action", choices=("range", "constrained", "refine-study",
                                      "vertices", "projections"))
    p.add_argument("--measure", help="measure JSON file")
    p.add_argument("--matrix", help="matrix JSON (projections action)")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eta", type=float)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--pairs", type=int, default=10000)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--plot")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("selftest", help="run the bundled invariant suite")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvexRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
