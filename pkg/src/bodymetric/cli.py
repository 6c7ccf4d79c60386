"""``bodymetric`` command-line front end.

Exit codes: 0 success, 1 input error, 2 uncertified result under
``--certify``, 3 Delzant check negative, 4 a demo or fuzz self-check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict

from . import __version__
from .bodies import GeneralBody, mc_sym_diff_volume
from .delzant import is_delzant
from .errors import BodyMetricError, BudgetExceeded, InputError
from .experiments import RunManifest, demo_ex58, demo_ex512, distance_matrix, fuzz_lemma43, triangle_audit
from .geometry import ConvexPolygon, hausdorff_distance, sym_diff_area
from .io import body_to_dict, group_element_from_json, load_body, read_json
from .lattice import apply, enumerate_gl2z, enumerate_glnz_words
from .moduli import SearchConfig, moduli_distance_2d, moduli_distance_nd
from .numbers import exact_str, fmt_sig

EXIT_OK, EXIT_INPUT, EXIT_UNCERTIFIED, EXIT_NOT_DELZANT, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4


def _global_flags(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="RNG seed (default 0)")
    parser.add_argument("--tol", type=float, default=default(None), help="absolute tolerance for orbit searches")
    parser.add_argument("--format", choices=("json", "csv"), default=default("json"))
    parser.add_argument("--out", default=default(None), help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bodymetric", description="Symmetric-difference and orbit distances between bodies.")
    p.add_argument("--version", action="version", version=__version__)
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dist", parents=[common], help="symmetric-difference volume d(A, B)")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples for non-polygon bodies")

    s = sub.add_parser("orbit-dist", parents=[common], help="orbit distance under the integral affine group")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--entry-bound-cap", type=int, default=SearchConfig.entry_bound_cap)
    s.add_argument("--grid-step", type=float, default=SearchConfig.grid_step)
    s.add_argument("--certify", action="store_true", help="exit 2 unless the result is certified")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--max-cells", type=int, default=SearchConfig.max_cells)
    s.add_argument("--samples", type=int, default=SearchConfig.mc_samples, help="Monte Carlo samples (dim > 2)")

    s = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance between polygons")
    s.add_argument("a")
    s.add_argument("b")

    s = sub.add_parser("delzant", parents=[common], help="Delzant check for a polygon")
    s.add_argument("p")

    s = sub.add_parser("apply", parents=[common], help="apply a group element to a body")
    s.add_argument("g", help='inline JSON {"A": [[...]], "t": [...]} or a file path')
    s.add_argument("body")

    s = sub.add_parser("enumerate-group", parents=[common], help="list GL(n, Z) matrices")
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--entry-bound", type=int, help="max |entry| (dim 2)")
    s.add_argument("--depth", type=int, help="max generator word length")
    s.add_argument("--limit", type=int, default=None)

    demo = sub.add_parser("demo", help="worked examples").add_subparsers(dest="demo", required=True)
    s = demo.add_parser("ex58", parents=[common], help="thin rectangles forming a Cauchy sequence")
    s.add_argument("--m-max", type=int, default=20)
    s = demo.add_parser("ex512", parents=[common], help="Hausdorff decay along a hyperbolic orbit")
    s.add_argument("--m-max", type=int, default=8)

    fuzz = sub.add_parser("fuzz", help="randomized lemma checks").add_subparsers(dest="fuzz", required=True)
    s = fuzz.add_parser("lemma43", parents=[common], help="cube vertices far from random hyperplanes")
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--n", type=int, default=2)

    s = sub.add_parser("matrix", parents=[common], help="pairwise distance matrix over a directory of bodies")
    s.add_argument("dir")
    s.add_argument("--mode", choices=("d", "orbit", "hausdorff"), default="d")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--entry-bound-cap", type=int, default=SearchConfig.entry_bound_cap)
    s.add_argument("--grid-step", type=float, default=SearchConfig.grid_step)
    s.add_argument("--samples", type=int, default=SearchConfig.mc_samples)
    return p


# ---------------------------------------------------------------------------
# output


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, dict):
            out.update(_flatten(v, f"{prefix}{k}."))
        else:
            out[prefix + k] = v
    return out


def _flat_rows(payload: dict):
    for key in ("rows", "matrices"):
        if isinstance(payload.get(key), list):
            return [_flatten(r) for r in payload[key]]
    return [_flatten({k: v for k, v in payload.items() if not isinstance(v, list)})]


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


def render(payload: dict, manifest: RunManifest, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"manifest": manifest.to_dict(), **payload}, sort_keys=True, indent=1) + "\n"
    rows = _flat_rows(payload)
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest.to_dict(), sort_keys=True) + "\n")
    cols = list(dict.fromkeys(k for r in rows for k in r))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _load(path, digests):
    body, digest = load_body(path)
    digests[str(path)] = digest
    return body


def _as_general(body):
    return body if isinstance(body, GeneralBody) else GeneralBody.from_polygon(body)


def _cmd_dist(args, digests, config):
    A, B = _load(args.a, digests), _load(args.b, digests)
    if A.dim != B.dim:
        raise InputError(f"dimension mismatch: {A.dim} vs {B.dim}")
    if isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon):
        v = sym_diff_area(A, B)
        return {"value": fmt_sig(v), "exact": exact_str(v), "status": "exact", "std_error": 0.0}, EXIT_OK
    config.update(samples=args.samples)
    est, se = mc_sym_diff_volume(_as_general(A), _as_general(B), args.samples, args.seed)
    return {"value": fmt_sig(est), "exact": None, "status": "estimate", "std_error": fmt_sig(se)}, EXIT_OK


def _cmd_orbit(args, digests, config):
    A, B = _load(args.a, digests), _load(args.b, digests)
    if A.dim != B.dim:
        raise InputError(f"dimension mismatch: {A.dim} vs {B.dim}")
    cfg = SearchConfig(
        entry_bound_cap=args.entry_bound_cap,
        grid_step=args.grid_step,
        tolerance=args.tol,
        seed=args.seed,
        workers=args.workers,
        max_cells=args.max_cells,
        mc_samples=args.samples,
    )
    config.update({k: v for k, v in asdict(cfg).items() if k != "workers"})
    try:
        if isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon):
            res = moduli_distance_2d(A, B, cfg)
        else:
            res = moduli_distance_nd(_as_general(A), _as_general(B), cfg)
    except BudgetExceeded as exc:
        res = exc.result
    code = EXIT_UNCERTIFIED if args.certify and not res.certified else EXIT_OK
    return res.to_dict(), code


def _cmd_hausdorff(args, digests, config):
    A, B = _load(args.a, digests), _load(args.b, digests)
    if not (isinstance(A, ConvexPolygon) and isinstance(B, ConvexPolygon)):
        raise InputError("hausdorff needs two convex polygons")
    return {"value": fmt_sig(hausdorff_distance(A, B))}, EXIT_OK


def _cmd_delzant(args, digests, config):
    P = _load(args.p, digests)
    if not isinstance(P, ConvexPolygon):
        raise InputError("delzant needs a convex polygon")
    report = is_delzant(P)
    return report.to_dict(), EXIT_OK if report.is_delzant else EXIT_NOT_DELZANT


def _cmd_apply(args, digests, config):
    if not args.g.strip().startswith("{"):
        _, digests[args.g] = read_json(args.g)
    g = group_element_from_json(args.g)
    body = _load(args.body, digests)
    config.update(g=g.to_dict())
    return {"body": body_to_dict(apply(g, body))}, EXIT_OK


def _cmd_enumerate(args, digests, config):
    if (args.entry_bound is None) == (args.depth is None):
        raise InputError("give exactly one of --entry-bound or --depth")
    if args.entry_bound is not None:
        if args.dim != 2:
            raise InputError("--entry-bound is only supported for --dim 2")
        enum = enumerate_gl2z(args.entry_bound)
    else:
        enum = enumerate_glnz_words(args.dim, args.depth)
    config.update(dim=args.dim, entry_bound=args.entry_bound, depth=args.depth, limit=args.limit)
    mats = []
    for M in enum:
        if args.limit is not None and len(mats) >= args.limit:
            break
        mats.append(M)
    return {"count": len(mats), "matrices": [{"A": [list(r) for r in M]} for M in mats]}, EXIT_OK


def _cmd_demo(args, digests, config):
    config.update(m_max=args.m_max)
    res = demo_ex58(args.m_max) if args.demo == "ex58" else demo_ex512(args.m_max)
    return res.to_dict(), EXIT_OK if res.ok else EXIT_CHECK_FAILED


def _cmd_fuzz(args, digests, config):
    config.update(trials=args.trials, a=args.a, n=args.n)
    res = fuzz_lemma43(args.trials, args.a, args.n, args.seed)
    return res.to_dict(), EXIT_OK if res.passed else EXIT_CHECK_FAILED


def _cmd_matrix(args, digests, config):
    cfg = SearchConfig(
        entry_bound_cap=args.entry_bound_cap,
        grid_step=args.grid_step,
        tolerance=args.tol,
        seed=args.seed,
        mc_samples=args.samples,
    )
    res = distance_matrix(args.dir, args.mode, cfg, workers=args.workers)
    if args.format == "csv":
        return res.to_csv(), EXIT_OK
    payload = json.loads(res.to_json())
    payload["triangle_violations"] = [list(v) for v in triangle_audit(res)]
    return json.dumps(payload, sort_keys=True, indent=1) + "\n", EXIT_OK


COMMANDS = {
    "dist": _cmd_dist,
    "orbit-dist": _cmd_orbit,
    "hausdorff": _cmd_hausdorff,
    "delzant": _cmd_delzant,
    "apply": _cmd_apply,
    "enumerate-group": _cmd_enumerate,
    "demo": _cmd_demo,
    "fuzz": _cmd_fuzz,
    "matrix": _cmd_matrix,
}


def _command_line(args) -> str:
    parts = [args.command]
    for key in ("demo", "fuzz"):
        if getattr(args, key, None):
            parts.append(getattr(args, key))
    return " ".join(parts)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    digests, config = {}, {}
    start = time.perf_counter()
    try:
        payload, code = COMMANDS[args.command](args, digests, config)
    except (InputError, BodyMetricError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(payload, str):  # already rendered with its own manifest
        text = payload
    else:
        config.setdefault("tol", args.tol)
        manifest = RunManifest(_command_line(args), config, args.seed, inputs=digests)
        manifest.wall_time = time.perf_counter() - start
        text = render(payload, manifest, args.format)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
