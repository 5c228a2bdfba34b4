"""Command-line driver.  JSON goes to stdout (or ``--out``); tables to stderr.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__, kernels
from .action import count_points, orbit_census
from .dsl import ParseError, QuiverDoc, parse, parse_dims, parse_levels, print_doc
from .higgs import HiggsDatum, diagram_integrable, higgs_to_diagram, integrability_check
from .jsonio import dumps
from .nakajima import SolveConfig, eval_moment, build_moment_map, solve_multistart
from .quivers import double, frame, tilde_layout
from .reps import RepError, validate_rep
from .rings import RingError
from .simplicial import SimplicialError, validate
from .suites import SUITES


class DomainError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def _report(args, command: list[str], text: str, result: dict, seed=None) -> dict:
    return {
        "command": command,
        "input_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "result": result,
        "version": __version__,
        "seed": seed,
    }


def _doc(args) -> tuple[QuiverDoc, str]:
    text = _read(args.file)
    try:
        return parse(text), text
    except ParseError as exc:
        raise DomainError(f"{args.file}: {exc}") from None


def cmd_build(args, argv):
    doc, text = _doc(args)
    I = doc.shape()
    f = doc.framing()
    if args.construction == "tilde":
        lay = tilde_layout(I, f)
        shape, framing = lay.shape, None
        name = f"{doc.name}_tilde"
    elif args.construction == "double":
        shape, framing = double(I).shape, f
        name = f"{doc.name}_double"
    else:
        if doc.framed_vertices:
            raise DomainError("frame expects an unframed quiver")
        shape, framing = frame(I)
        name = f"{doc.name}_fr"
    problems = validate(shape)
    if problems:
        raise DomainError("; ".join(problems))
    out_doc = QuiverDoc.from_shape(name, shape, framing)
    result = {
        "construction": args.construction,
        "counts": dict(zip(("vertices", "edges", "triangles"), shape.counts())),
        "shape": shape.to_json(),
        "framing": framing.to_json() if framing is not None else None,
        "qv": print_doc(out_doc),
    }
    print(f"{args.construction}: {shape.counts()[0]} vertices, {shape.counts()[1]} edges, "
          f"{shape.counts()[2]} triangles", file=sys.stderr)
    return _report(args, argv, text, result)


def cmd_count(args, argv):
    doc, text = _doc(args)
    dims = dict(doc.dims)
    dims.update(parse_dims(args.dims or ""))
    shape = doc.shape()
    missing = [v for v in shape.vertices if v not in dims]
    if missing:
        raise DomainError(f"no dimension for vertices {missing}")
    fn = orbit_census if args.orbits else count_points
    rep = fn(shape, dims, args.field, doc.framing())
    print(f"rep_count={rep.rep_count} gauge_order={rep.gauge_order} stacky={rep.stacky_count}", file=sys.stderr)
    return _report(args, argv, text, rep.to_json())


def cmd_solve(args, argv):
    doc, text = _doc(args)
    I = doc.shape()
    dims = dict(doc.dims)
    if args.no_frame or doc.framed_vertices:
        Q, f = I, doc.framing()
    else:
        Q, f = frame(I)
        # glued framing nodes default to dimension 1
        dims.update({w: 1 for w in f.framing()})
    dims.update(parse_dims(args.dims or ""))
    missing = [v for v in Q.vertices if v not in dims]
    if missing:
        raise DomainError(f"no dimension for vertices {missing}")
    cfg = SolveConfig(parse_levels(args.levels or ""), args.tol, args.max_iter, args.seed)
    best, results = solve_multistart(Q, f, dims, cfg, args.starts)
    m = build_moment_map(Q, f)
    check = max((mat.distance(mat.identity(mat.ring, mat.rows).scale(cfg.levels.get(v, 0.0)))
                 for v, mat in eval_moment(m, best.rep).items()), default=0.0)
    result = best.to_json()
    result["converged_starts"] = sum(r.converged for r in results)
    result["starts"] = len(results)
    result["revalidated_residual"] = check
    print(f"converged {result['converged_starts']}/{len(results)}; best residual {best.residual:.3e}", file=sys.stderr)
    return _report(args, argv, text, result, args.seed)


def cmd_check_higgs(args, argv):
    text = _read(args.json)
    try:
        h = HiggsDatum.from_json(json.loads(text))
    except (KeyError, ValueError, TypeError) as exc:
        raise DomainError(f"invalid Higgs datum: {exc}") from None
    rep = higgs_to_diagram(h)
    diags = validate_rep(rep)
    result = {
        "n": h.n,
        "m": h.m,
        "integrable": integrability_check(h),
        "diagram_valid": diagram_integrable(h),
        "diagnostics": diags,
        "dims": dict(rep.dims),
    }
    if result["integrable"] != result["diagram_valid"]:
        raise DomainError("integrability check and diagram validation disagree")
    print(f"integrable={result['integrable']}", file=sys.stderr)
    return _report(args, argv, text, result)


def cmd_verify(args, argv):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    summaries = [SUITES[n](args.seed, args.cases) for n in names]
    for s in summaries:
        s.pop("seconds", None)
        print(f"{s['suite']:<20} {'PASS' if s['ok'] else 'FAIL'}  {s['passed']} passed, {s['failed']} failed", file=sys.stderr)
    result = {"suites": summaries, "ok": all(s["ok"] for s in summaries), "backend": kernels.BACKEND}
    report = _report(args, argv, "", result, args.seed)
    if not result["ok"]:
        report["_exit"] = 1
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qstack", description=__doc__.splitlines()[0])
    p.add_argument("--out", help="write the JSON report to this file instead of stdout")
    p.add_argument("--version", action="version", version=f"qstack {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct tilde(I), d(I) or I^fr from a .qv file")
    b.add_argument("construction", choices=["tilde", "double", "frame"])
    b.add_argument("file")
    b.set_defaults(fn=cmd_build)

    c = sub.add_parser("count", help="count F_p-points and the stacky count")
    c.add_argument("file")
    c.add_argument("--field", type=int, required=True, metavar="P")
    c.add_argument("--dims", default="", help="v=N,... (overrides dim lines)")
    c.add_argument("--orbits", action="store_true", help="also compute the orbit census")
    c.set_defaults(fn=cmd_count)

    s = sub.add_parser("solve-nakajima", help="solve mu = lambda on the doubled framed quiver")
    s.add_argument("file")
    s.add_argument("--dims", default="")
    s.add_argument("--lambda", dest="levels", default="", help="v=FLOAT,... (default 0)")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--starts", type=int, default=1)
    s.add_argument("--no-frame", action="store_true", help="do not glue framing nodes")
    s.set_defaults(fn=cmd_solve)

    h = sub.add_parser("check-higgs", help="integrability of a Higgs datum")
    h.add_argument("--json", required=True, metavar="FILE")
    h.set_defaults(fn=cmd_check_higgs)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=100)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.fn(args, argv)
    except (DomainError, SimplicialError, RepError, RingError, ValueError) as exc:
        print(f"qstack: error: {exc}", file=sys.stderr)
        return 1
    code = report.pop("_exit", 0)
    text = dumps(report) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
