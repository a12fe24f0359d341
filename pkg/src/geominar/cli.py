"""Command-line front end.

Subcommands: derive (innovation decomposition and pmf table), simulate
(seeded CSV trajectories), verify (full check suite, exit 1 on failure),
catalog (model listing). Output is byte-identical for identical invocations:
no timestamps, sorted JSON keys, repr floats.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .catalog import build_model, dispersion_class, model_entries, validate_params
from .decompose import DEFAULT_TARGET_MASS, pmf_from_decomposition
from .errors import GeominarError
from .simulate import RngStream, simulate_series
from .verify import run_all_checks

_PARAM_FLAGS = ("theta", "mu", "rho", "alpha", "k", "m", "r")


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", nargs="?", help="catalog model name (see the catalog subcommand)")
    p.add_argument("--spec-file", type=Path, default=None,
                   help="JSON document {\"model\": name, \"params\": {...}} "
                        "instead of inline flags")
    for name in _PARAM_FLAGS:
        p.add_argument(f"--{name}", type=float, default=None)


def _resolve_model(args) -> tuple[str, dict]:
    params: dict[str, float] = {}
    name = args.model
    if args.spec_file is not None:
        doc = json.loads(args.spec_file.read_text())
        name = doc.get("model", name)
        params.update(doc.get("params", {}))
        thinning = doc.get("thinning", {})
        if "alpha" in thinning:
            params["alpha"] = thinning["alpha"]
    for flag in _PARAM_FLAGS:
        v = getattr(args, flag)
        if v is not None:
            params[flag] = v
    if not name:
        raise GeominarError("no model given: pass a model name or --spec-file")
    return name, params


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _cmd_derive(args) -> int:
    name, params = _resolve_model(args)
    model = build_model(name, **params)
    innovation = model.innovation
    if args.truncation_mass != DEFAULT_TARGET_MASS:
        innovation = pmf_from_decomposition(innovation.decomposition, args.truncation_mass)
    constraints = validate_params(name, **model.params)
    doc = {
        "model": name,
        "params": model.params,
        "constraints": [dataclasses.asdict(c) for c in constraints],
        "atoms": list(innovation.decomposition.atom_poly.coeffs),
        "terms": [{"rho": r, "s": s} for r, s in innovation.decomposition.terms],
        "hurdle": dataclasses.asdict(model.hurdle) if model.hurdle else None,
        "moments": dataclasses.asdict(model.moments),
        "dispersion": dataclasses.asdict(dispersion_class(model.moments)),
        "notes": list(model.notes),
        "truncation": innovation.truncation,
        "truncation_mass": args.truncation_mass,
        "pmf": [[m, p] for m, p in enumerate(innovation.pmf_table)],
    }
    if args.format == "json":
        _emit(_json(doc), args.output)
    elif args.format == "csv":
        lines = ["m,probability"]
        lines += [f"{m},{p!r}" for m, p in enumerate(innovation.pmf_table)]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_derive_table(doc), args.output)
    return 0


def _derive_table(doc) -> str:
    out = [f"model: {doc['model']}"]
    out.append("params: " + ", ".join(f"{k}={v!r}" for k, v in doc["params"].items()))
    out.append("constraints:")
    for c in doc["constraints"]:
        flag = "ok " if c["satisfied"] else "VIOLATED"
        out.append(f"  [{flag}] {c['name']} (margin {c['margin']:.6g})")
    if doc["terms"]:
        out.append("geometric terms (rho_i, s_i):")
        for t in doc["terms"]:
            out.append(f"  rho={t['rho']:+.12g}  s={t['s']:.12g}")
    out.append("atoms: " + ", ".join(f"{a:.12g}" for a in doc["atoms"]))
    if doc["hurdle"]:
        h = doc["hurdle"]
        out.append(f"hurdle: pi={h['pi']:.12g} p1={h['p1']:.12g} p2={h['p2']:.12g} "
                   f"w1={h['w1']:.12g} w2={h['w2']:.12g}")
    mo = doc["moments"]
    out.append(f"marginal: mean={mo['marginal_mean']:.12g} var={mo['marginal_var']:.12g} "
               f"dispersion={mo['marginal_dispersion']:.12g} ({doc['dispersion']['marginal']})")
    out.append(f"innovation: mean={mo['innovation_mean']:.12g} var={mo['innovation_var']:.12g} "
               f"dispersion={mo['innovation_dispersion']:.12g} ({doc['dispersion']['innovation']})")
    for note in doc["notes"]:
        out.append(f"note: {note}")
    out.append(f"pmf table to m={doc['truncation']} (mass target {doc['truncation_mass']!r}):")
    for m, p in doc["pmf"][:25]:
        out.append(f"  {m:4d}  {p:.15g}")
    if len(doc["pmf"]) > 25:
        out.append(f"  ... {len(doc['pmf']) - 25} more rows (use --format csv for all)")
    return "\n".join(out) + "\n"


def _cmd_simulate(args) -> int:
    name, params = _resolve_model(args)
    model = build_model(name, **params)
    if args.output is None and args.replicates != 1:
        raise GeominarError("--output is required when --replicates > 1")
    for rep in range(args.replicates):
        sample = simulate_series(model, args.n, RngStream(args.seed, rep), args.burn_in)
        lines = ["t,x"] + [f"{t},{x}" for t, x in enumerate(sample.values)]
        text = "\n".join(lines) + "\n"
        if args.output is None:
            sys.stdout.write(text)
        else:
            _replicate_path(args.output, rep, args.replicates).write_text(text)
    return 0


def _replicate_path(base: Path, rep: int, replicates: int) -> Path:
    if replicates == 1:
        return base
    return base.with_name(f"{base.stem}_{rep:03d}{base.suffix or '.csv'}")


def _cmd_verify(args) -> int:
    name, params = _resolve_model(args)
    model = build_model(name, **params)
    sample = simulate_series(model, args.n, RngStream(args.seed, 0), args.burn_in)
    report = run_all_checks(model, sample, grid_points=args.grid_points,
                            tol=args.tolerance)
    if args.format == "json":
        _emit(_json(report.to_dict()), args.output)
    else:
        lines = []
        for c in report.checks:
            flag = "pass" if c.passed else "FAIL"
            lines.append(f"[{flag}] {c.name}: observed={c.observed!r} "
                         f"expected={c.expected!r} tol={c.tolerance!r}")
        lines.append(f"overall: {'pass' if report.overall else 'FAIL'}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if report.overall else 1


def _cmd_catalog(args) -> int:
    entries = model_entries()
    if args.format == "json":
        doc = [{"model": e.name, "params": list(e.param_names),
                "summary": e.summary, "constraints": list(e.constraints_doc)}
               for e in entries]
        _emit(_json(doc), args.output)
    else:
        lines = []
        for e in entries:
            lines.append(f"{e.name:15s} params: {', '.join(e.param_names)}")
            lines.append(f"{'':15s} {e.summary}")
            lines.append(f"{'':15s} valid when: {'; '.join(e.constraints_doc)}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geominar",
        description="Innovation distributions, simulation and verification for "
                    "INAR(1) count models with geometric-type marginals.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("derive", help="derive the innovation decomposition and pmf table")
    _add_model_args(p)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--truncation-mass", type=float, default=DEFAULT_TARGET_MASS)
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("simulate", help="simulate seeded trajectories to CSV")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--output", type=Path, default=None,
                   help="output CSV path; replicate index is appended when "
                        "--replicates > 1")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the verification suite (exit 1 on failure)")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--grid-points", type=int, default=50)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("catalog", help="list model names and parameter constraints")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--output", type=Path, default=None)
    p.set_defaults(func=_cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeominarError as exc:
        print(f"geominar: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
