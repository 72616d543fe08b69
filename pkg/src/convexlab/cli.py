"""Command line front end: parse body specs, run experiments, write reports.

Exit codes: 0 when the requested check passes, 2 when a mathematical check
fails, 1 on any error (bad arguments, invalid spec, I/O).  Partial output
files are removed on error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bodies import RevolutionBodySpec, build_polytope_pair, make_revolution_spec, oracle_of, profile
from .experiments import (
    PAIR_NAMES,
    BodyPair,
    certify_report,
    convergence_experiment,
    lemma1_check,
    make_pair,
    projections_experiment,
    sections_experiment,
    slab_experiment,
)
from .grassmann import RngStream, sample_haar_subspace, sample_sphere
from .intrinsic import boundary_polyline
from .polykernel import section_polygon
from .report import canonical_json, write_report_json, write_samples_csv, write_suite_csv
from .svg import render_polygons_svg, render_scatter_svg, render_series_svg
from .transforms import section_oracle

FAIL, ERROR = 2, 1

DEFAULT_T_SEQUENCE = (0.4, 0.2, 0.1, 0.05)

_STREAM_OF = {"lemma1": 1, "sections": 2, "slabs": 3, "projections": 4,
              "convergence": 5}

_DEFAULT_SAMPLES = {"lemma1": 2000, "sections": 100, "slabs": 50,
                    "projections": 200}


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit(2) on usage errors, which this tool reserves for
    # failed mathematical checks
    def error(self, message):
        raise CliError(message)


# ---------------------------------------------------------------------------
# body specs


_REVOLUTION_FIELDS = frozenset({"type", "n", "epsilon", "delta", "variant"})
_POLYTOPE_FIELDS = frozenset({"type", "a", "u_signs", "v_signs", "lambda", "variant"})


def parse_body_spec(text: str):
    """JSON body description -> RevolutionBodySpec or HPolytope.

    Unknown fields are rejected by name; absent epsilon, delta, lambda fall
    back to their defaults.  Constraint violations surface the constructor
    diagnostics (for example "delta must lie in (0, 1/6)").
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON body spec: {exc}") from None
    if not isinstance(data, dict):
        raise CliError("body spec must be a JSON object")
    kind = data.get("type")
    if kind == "revolution":
        unknown = sorted(set(data) - _REVOLUTION_FIELDS)
        if unknown:
            raise CliError(f"unknown field '{unknown[0]}' in revolution body spec")
        return RevolutionBodySpec(
            n=int(data.get("n", 3)),
            epsilon=float(data.get("epsilon", 1e-3)),
            delta=float(data.get("delta", 0.1)),
            variant=str(data.get("variant", "K")),
        )
    if kind == "polytope":
        unknown = sorted(set(data) - _POLYTOPE_FIELDS)
        if unknown:
            raise CliError(f"unknown field '{unknown[0]}' in polytope body spec")
        if "a" not in data:
            raise CliError("polytope body spec requires field 'a' (box half-widths)")
        a = [float(x) for x in data["a"]]
        n = len(a)
        us = [int(x) for x in data.get("u_signs", [1] * n)]
        vs = [int(x) for x in data.get("v_signs", [1] * (n - 1) + [-1])]
        lam = data.get("lambda")
        variant = str(data.get("variant", "K"))
        if variant not in ("K", "L"):
            raise CliError("polytope body spec field 'variant' must be 'K' or 'L'")
        cons = build_polytope_pair(a, us, vs, None if lam is None else float(lam))
        return cons.body_K if variant == "K" else cons.body_L
    raise CliError("body spec field 'type' must be 'revolution' or 'polytope'")


def construct_pair_specs(pair_name: str, n: int) -> tuple[dict, dict]:
    """Writable spec dicts for the two bodies of a named fixture pair."""
    if pair_name == "smooth":
        spec = make_revolution_spec(n=n)
        base = {"type": "revolution", "n": spec.n, "epsilon": spec.epsilon,
                "delta": spec.delta}
        return {**base, "variant": "K"}, {**base, "variant": "L"}
    if pair_name == "polytope":
        from .experiments import DEFAULT_HALF_WIDTHS
        a = list(DEFAULT_HALF_WIDTHS[:n])
        cons = build_polytope_pair(a, [1] * n, [1] * (n - 1) + [-1])
        base = {"type": "polytope", "a": a, "u_signs": [1] * n,
                "v_signs": [1] * (n - 1) + [-1], "lambda": cons.lam}
        return {**base, "variant": "K"}, {**base, "variant": "L"}
    raise CliError("construct supports the primitive pairs 'smooth' and "
                   "'polytope'; control pairs are derived at run time")


def _resolve_pair(args) -> BodyPair:
    spec_k = getattr(args, "spec_k", None)
    spec_l = getattr(args, "spec_l", None)
    if spec_k or spec_l:
        if not (spec_k and spec_l):
            raise CliError("--spec-k and --spec-l must be given together")
        body_k = parse_body_spec(Path(spec_k).read_text(encoding="utf-8"))
        body_l = parse_body_spec(Path(spec_l).read_text(encoding="utf-8"))
        ok, ol = oracle_of(body_k), oracle_of(body_l)
        smooth = None
        if isinstance(body_k, RevolutionBodySpec) and isinstance(body_l, RevolutionBodySpec):
            smooth = (body_k, body_l)
        return BodyPair("custom", ok, ol,
                        {"K": ok.snapshot(), "L": ol.snapshot()},
                        expect_equal_values=True, expect_noncongruent=True,
                        smooth_specs=smooth)
    return make_pair(args.pair, args.n)


# ---------------------------------------------------------------------------
# defaults


def _is_exact_pair(pair: BodyPair) -> bool:
    return pair.oracle_K.kind == "polytope" and pair.oracle_L.kind == "polytope"


def _default_tol(command: str, pair: BodyPair, args) -> float:
    exact = _is_exact_pair(pair)
    if command == "lemma1":
        return 1e-11 if exact else 1e-8
    if command == "sections":
        if exact:
            return 1e-9
        return {1: 1e-8, 2: 1e-5}.get(args.k, 1e-4)
    if command == "slabs":
        return 1e-9 if exact else 1e-4
    if command == "projections":
        if args.k == 1:
            return 1e-8
        return 1e-9 if exact else 1e-4
    return 1e-9


# ---------------------------------------------------------------------------
# single-experiment runs


def _run_single(args) -> tuple:
    pair = _resolve_pair(args)
    cmd = args.command
    rng = RngStream(args.seed, _STREAM_OF.get(cmd, 0))
    tol = args.tol if args.tol is not None else _default_tol(cmd, pair, args)
    samples = args.samples if getattr(args, "samples", None) else _DEFAULT_SAMPLES.get(cmd, 100)
    snaps = pair.snapshots
    if cmd == "lemma1":
        report = lemma1_check(pair.oracle_K, pair.oracle_L, samples, tol, rng, snaps)
    elif cmd == "sections":
        i = args.i if args.i is not None else args.k
        report = sections_experiment(pair.oracle_K, pair.oracle_L, args.k, i,
                                     samples, rng, tol, snapshots=snaps)
    elif cmd == "slabs":
        i = args.i if args.i is not None else pair.oracle_K.dim
        report = slab_experiment(pair.oracle_K, pair.oracle_L, args.t, i,
                                 samples, rng, tol, snapshots=snaps)
    elif cmd == "projections":
        report = projections_experiment(pair.oracle_K, pair.oracle_L, args.k,
                                        samples, rng, tol, snapshots=snaps)
    elif cmd == "convergence":
        ts = tuple(args.t) if args.t else DEFAULT_T_SEQUENCE
        xi = sample_sphere(pair.oracle_K.dim, rng)
        report = convergence_experiment(pair.oracle_K, xi, args.i, ts,
                                        snapshots=snaps)
    elif cmd == "certify":
        report = certify_report(pair)
    else:
        raise CliError(f"unknown command '{cmd}'")
    return report, pair


def _section_loop(oracle, sub) -> np.ndarray:
    if oracle.polytope is not None:
        return section_polygon(oracle.polytope, sub).vertices
    return boundary_polyline(section_oracle(oracle, sub), 512).vertices


def _emit_single(report, pair, args, out: Path, written: list) -> None:
    out.mkdir(parents=True, exist_ok=True)
    rp, cp = out / "report.json", out / "samples.csv"
    written.extend([rp, cp])
    write_report_json(rp, report)
    write_samples_csv(cp, report)
    if not args.svg:
        return
    if pair.smooth_specs is not None:
        pp = out / "profiles.svg"
        written.append(pp)
        ts = np.linspace(-1.0, 1.0, 1025)
        render_series_svg(pp, "generating profiles", [
            ("f (body K)", ts, profile(pair.smooth_specs[0], ts)),
            ("g (body L)", ts, profile(pair.smooth_specs[1], ts)),
        ])
    sp = out / "rel_diff.svg"
    written.append(sp)
    render_scatter_svg(sp, f"{report.experiment}: per-sample rel_diff",
                       [s.id for s in report.samples],
                       [s.rel_diff for s in report.samples])
    if report.experiment == "sections" and args.k == 2 and pair.oracle_K.dim == 3:
        gp = out / "sections.svg"
        written.append(gp)
        rng = RngStream(args.seed, _STREAM_OF["sections"])
        polys = []
        for j in range(min(3, len(report.samples))):
            sub = sample_haar_subspace(3, 2, rng.substream(j))
            polys.append((f"K section {j}", _section_loop(pair.oracle_K, sub)))
            polys.append((f"L section {j}", _section_loop(pair.oracle_L, sub)))
        render_polygons_svg(gp, "section overlays", polys)


# ---------------------------------------------------------------------------
# the aggregate suite


def _suite_plan(seed: int) -> list:
    """(name, pair, expected_pass, thunk) rows covering every experiment.

    Controls are expected to FAIL their equality checks; the suite is wrong
    if they pass.
    """
    pairs: dict[str, BodyPair] = {}

    def P(name: str) -> BodyPair:
        if name not in pairs:
            pairs[name] = make_pair(name)
        return pairs[name]

    def R(idx: int) -> RngStream:
        return RngStream(seed, idx)

    def lemma1(pair_name, m, tol, idx):
        p = P(pair_name)
        return lambda: lemma1_check(p.oracle_K, p.oracle_L, m, tol, R(idx),
                                    p.snapshots)

    def sections(pair_name, k, i, m, tol, idx):
        p = P(pair_name)
        return lambda: sections_experiment(p.oracle_K, p.oracle_L, k, i, m,
                                           R(idx), tol, snapshots=p.snapshots)

    def slabs(pair_name, t, i, m, tol, idx, vol_nodes=200_000):
        p = P(pair_name)
        return lambda: slab_experiment(p.oracle_K, p.oracle_L, t, i, m, R(idx),
                                       tol, vol_nodes=vol_nodes,
                                       snapshots=p.snapshots)

    def projections(pair_name, k, m, tol, idx):
        p = P(pair_name)
        return lambda: projections_experiment(p.oracle_K, p.oracle_L, k, m,
                                              R(idx), tol, snapshots=p.snapshots)

    def convergence(pair_name, i, idx, **kw):
        p = P(pair_name)
        xi = sample_sphere(p.oracle_K.dim, R(idx))
        return lambda: convergence_experiment(p.oracle_K, xi, i,
                                              DEFAULT_T_SEQUENCE,
                                              snapshots=p.snapshots, **kw)

    def certify(pair_name):
        p = P(pair_name)
        return lambda: certify_report(p)

    return [
        ("lemma1-smooth", "smooth", True, lemma1("smooth", 1000, 1e-8, 10)),
        ("lemma1-polytope", "polytope", True, lemma1("polytope", 1000, 1e-11, 11)),
        ("lemma1-control-shifted", "control-shifted", False,
         lemma1("control-shifted", 500, 1e-8, 12)),
        ("sections-polytope-k2-i1", "polytope", True,
         sections("polytope", 2, 1, 50, 1e-9, 20)),
        ("sections-polytope-k2-i2", "polytope", True,
         sections("polytope", 2, 2, 50, 1e-9, 21)),
        ("sections-smooth-k2-i1", "smooth", True,
         sections("smooth", 2, 1, 30, 1e-5, 22)),
        ("sections-smooth-k2-i2", "smooth", True,
         sections("smooth", 2, 2, 30, 1e-5, 23)),
        ("sections-control-rotated-k2-i2", "control-rotated", False,
         sections("control-rotated", 2, 2, 20, 1e-9, 24)),
        ("sections-control-shifted-k2-i2", "control-shifted", False,
         sections("control-shifted", 2, 2, 20, 1e-5, 25)),
        ("slabs-polytope-i1", "polytope", True,
         slabs("polytope", 0.5, 1, 25, 1e-9, 30)),
        ("slabs-polytope-i2", "polytope", True,
         slabs("polytope", 0.5, 2, 25, 1e-9, 31)),
        ("slabs-polytope-i3", "polytope", True,
         slabs("polytope", 0.5, 3, 25, 1e-9, 32)),
        ("slabs-smooth-i3", "smooth", True,
         slabs("smooth", 0.5, 3, 8, 1e-4, 33, vol_nodes=50_000)),
        ("projections-smooth-k1", "smooth", True,
         projections("smooth", 1, 300, 1e-8, 40)),
        ("projections-smooth-k2", "smooth", True,
         projections("smooth", 2, 30, 1e-4, 41)),
        ("projections-polytope-k1", "polytope", True,
         projections("polytope", 1, 300, 1e-8, 42)),
        ("projections-polytope-k2", "polytope", True,
         projections("polytope", 2, 50, 1e-9, 43)),
        ("projections-control-shifted-k1", "control-shifted", True,
         projections("control-shifted", 1, 100, 1e-8, 44)),
        ("convergence-polytope-i2", "polytope", True,
         convergence("polytope", 2, 50)),
        ("convergence-smooth-i1", "smooth", True,
         convergence("smooth", 1, 51, width_nodes=256)),
        ("certify-smooth", "smooth", True, certify("smooth")),
        ("certify-polytope", "polytope", True, certify("polytope")),
    ]


def _run_all(args, written: list) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    named_reports = []
    for name, pair_name, expected, thunk in _suite_plan(args.seed):
        report = thunk()
        actual = bool(report.summary["pass"])
        entries.append({
            "name": name,
            "experiment": report.experiment,
            "pair": pair_name,
            "expected_pass": expected,
            "actual_pass": actual,
            "ok": actual == expected,
            "summary": report.summary,
        })
        named_reports.append((name, report))
        sub = out / name
        sub.mkdir(parents=True, exist_ok=True)
        rp, cp = sub / "report.json", sub / "samples.csv"
        written.extend([rp, cp])
        write_report_json(rp, report)
        write_samples_csv(cp, report)
    ok_count = sum(1 for e in entries if e["ok"])
    suite = {
        "experiment": "all",
        "parameters": {"seed": args.seed, "entries": len(entries)},
        "entries": entries,
        "summary": {
            "pass": ok_count == len(entries),
            "entries_total": len(entries),
            "entries_ok": ok_count,
        },
    }
    rp, cp = out / "report.json", out / "samples.csv"
    written.extend([rp, cp])
    write_report_json(rp, suite)
    write_suite_csv(cp, named_reports)
    if args.svg:
        pp = out / "profiles.svg"
        written.append(pp)
        spec_k = make_revolution_spec()
        ts = np.linspace(-1.0, 1.0, 1025)
        render_series_svg(pp, "generating profiles", [
            ("f (body K)", ts, profile(spec_k, ts)),
            ("g (body L)", ts, profile(spec_k.partner(), ts)),
        ])
    for e in entries:
        marker = "ok" if e["ok"] else "UNEXPECTED"
        expect = "pass" if e["expected_pass"] else "fail"
        actual = "pass" if e["actual_pass"] else "fail"
        print(f"[{marker}] {e['name']}: expected {expect}, got {actual}")
    return 0 if suite["summary"]["pass"] else FAIL


def _run_construct(args, written: list) -> int:
    if args.out is None or len(args.out) != 2:
        raise CliError("construct requires --out K_PATH L_PATH")
    dk, dl = construct_pair_specs(args.pair, args.n)
    for path_str, spec in zip(args.out, (dk, dl)):
        p = Path(path_str)
        if p.parent != Path(""):
            p.parent.mkdir(parents=True, exist_ok=True)
        written.append(p)
        p.write_text(canonical_json(spec), encoding="utf-8")
        parse_body_spec(p.read_text(encoding="utf-8"))
    print(f"wrote {args.out[0]} and {args.out[1]}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="convexlab",
                     description="Numerical checks for noncongruent convex "
                                 "body pairs with matching section, slab, and "
                                 "projection intrinsic volumes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_samples=True):
        p.add_argument("--pair", choices=PAIR_NAMES, default="smooth",
                       help="named fixture pair (default: smooth)")
        p.add_argument("--spec-k", help="JSON body spec file for body K")
        p.add_argument("--spec-l", help="JSON body spec file for body L")
        p.add_argument("--n", type=int, default=3,
                       help="ambient dimension for named pairs (default: 3)")
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed (default: 0)")
        if with_samples:
            p.add_argument("--samples", type=int, default=None,
                           help="number of sampled directions/subspaces")
        p.add_argument("--tol", type=float, default=None,
                       help="override the pair-dependent default tolerance")
        p.add_argument("--out", default="convexlab-out",
                       help="output directory (default: convexlab-out)")
        p.add_argument("--svg", action="store_true",
                       help="also write SVG plots")

    pc = sub.add_parser("construct", help="write the body specs of a fixture pair")
    pc.add_argument("--pair", choices=("smooth", "polytope"), default="smooth")
    pc.add_argument("--n", type=int, default=3)
    pc.add_argument("--out", nargs=2, metavar=("K_PATH", "L_PATH"), required=True)

    common(sub.add_parser("lemma1", help="antipodal radial/support pairing check"))

    ps = sub.add_parser("sections", help="intrinsic volumes of k-plane sections")
    common(ps)
    ps.add_argument("--k", type=int, default=2, help="section dimension (default: 2)")
    ps.add_argument("--i", type=int, default=None,
                    help="intrinsic volume index (default: k)")

    pb = sub.add_parser("slabs", help="intrinsic volumes of central slabs")
    common(pb)
    pb.add_argument("--t", type=float, default=0.5, help="slab half-width (default: 0.5)")
    pb.add_argument("--i", type=int, default=None,
                    help="intrinsic volume index (default: dimension)")

    pp = sub.add_parser("projections", help="volumes of k-plane shadows")
    common(pp)
    pp.add_argument("--k", type=int, default=2,
                    help="projection dimension (default: 2)")

    pv = sub.add_parser("convergence", help="slab-to-section limit check")
    common(pv, with_samples=False)
    pv.add_argument("--t", type=float, action="append", default=None,
                    help="slab half-width; repeat for a decreasing sequence "
                         f"(default: {' '.join(str(t) for t in DEFAULT_T_SEQUENCE)})")
    pv.add_argument("--i", type=int, default=1,
                    help="intrinsic volume index (default: 1)")

    common(sub.add_parser("certify", help="noncongruence certificates"),
           with_samples=False)

    pa = sub.add_parser("all", help="full suite with default fixtures")
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--out", default="convexlab-out")
    pa.add_argument("--svg", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    written: list[Path] = []
    try:
        args = parser.parse_args(argv)
        if args.command == "construct":
            return _run_construct(args, written)
        if args.command == "all":
            return _run_all(args, written)
        report, pair = _run_single(args)
        _emit_single(report, pair, args, Path(args.out), written)
        passed = bool(report.summary["pass"])
        detail = report.summary.get("max_rel_diff")
        line = f"{report.experiment}: {'PASS' if passed else 'FAIL'}"
        if detail is not None:
            line += f" (max rel_diff {detail:.3e})"
        print(line)
        return 0 if passed else FAIL
    except Exception as exc:  # noqa: BLE001  (CLI boundary: any failure is exit 1)
        for p in written:
            try:
                if p.exists():
                    p.unlink()
            except OSError:
                pass
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
