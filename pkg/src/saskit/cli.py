"""Command-line access to every tool and the HTTP server.

Exit codes: 0 success, 2 usage/input error, 3 fit did not converge,
4 backend/network error.  Numeric output uses fixed significant-digit
formatting so transcripts are stable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dataio, docstore, fitting, models, sld
from .agents import (
    BackendError,
    Orchestrator,
    SessionState,
    Settings,
    canonical_scenario_path,
    make_backend,
)
from .errors import SaskitError
from .plotting import dataset_plot, fit_plot, render_svg

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3
EXIT_BACKEND = 4


def fmt(value: float) -> str:
    return f"{value:.6g}"


def _parse_assignments(pairs: list[str], flag: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        name, sep, raw = pair.partition("=")
        if not sep or not name:
            raise SaskitError(f"{flag} expects name=value, got {pair!r}")
        try:
            out[name.strip()] = float(raw)
        except ValueError:
            raise SaskitError(f"{flag} {name}: {raw!r} is not a number") from None
    return out


def _parse_bounds(pairs: list[str]) -> dict[str, tuple[float, float]]:
    out: dict[str, tuple[float, float]] = {}
    for pair in pairs or []:
        name, sep, raw = pair.partition("=")
        parts = raw.split(",")
        if not sep or len(parts) != 2:
            raise SaskitError(f"--bound expects name=lo,hi, got {pair!r}")
        try:
            out[name.strip()] = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise SaskitError(f"--bound {name}: {raw!r} is not lo,hi") from None
    return out


def cmd_sld(args) -> int:
    report = sld.sld_report(args.formula, args.density)
    rows = [
        ("formula", args.formula, ""),
        ("density", fmt(args.density), "g/cm^3"),
        ("molar mass", fmt(report.molar_mass), "g/mol"),
        ("neutron SLD (real)", fmt(report.sld_real), "1e-6/A^2"),
        ("neutron SLD (imag)", fmt(report.sld_imag), "1e-6/A^2"),
        ("x-ray SLD", fmt(report.sld_xray), "1e-6/A^2"),
        ("number density", fmt(report.number_density), "1/cm^3"),
        ("molecular volume", fmt(report.molecular_volume), "A^3"),
    ]
    width = max(len(r[0]) for r in rows)
    for name, value, units in rows:
        print(f"{name.ljust(width)}  {value} {units}".rstrip())
    return EXIT_OK


def cmd_generate(args) -> int:
    params = _parse_assignments(args.set, "--set")
    grid = models.default_qgrid(args.qmin, args.qmax, args.n)
    dataset = models.generate_dataset(args.model, params, grid,
                                      noise_fraction=args.noise, seed=args.seed)
    text = dataio.save_ascii(dataset)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(dataset)} points to {args.out}")
    else:
        sys.stdout.write(text)
    if args.plot:
        Path(args.plot).write_text(
            render_svg(dataset_plot(dataset, f"{args.model} I(q)")))
        print(f"wrote plot to {args.plot}")
    return EXIT_OK


def cmd_fit(args) -> int:
    path = Path(args.datafile)
    if not path.is_file():
        raise SaskitError(f"no such data file: {path}")
    parsed = dataio.load_ascii(path.read_text())
    problem = fitting.build_problem(
        args.model, parsed.dataset,
        fixed=_parse_assignments(args.fix, "--fix"),
        initial=_parse_assignments(args.init, "--init"),
        bounds=_parse_bounds(args.bound))
    options = fitting.FitOptions(restarts=args.restarts, max_iter=args.max_iter)
    result = fitting.fit_lm(problem, options)
    print(fitting.fit_report(problem, result))
    if args.plot:
        model_i = models.evaluate(args.model, result.values, parsed.dataset.q)
        artifact = fit_plot(parsed.dataset, model_i, result.residuals,
                            f"{args.model} fit of {path.name}")
        Path(args.plot).write_text(render_svg(artifact))
        print(f"wrote plot to {args.plot}")
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_models(args) -> int:
    if args.action == "list":
        for info in models.list_models():
            print(f"{info.name:12s} {info.title}")
        return EXIT_OK
    if not args.name:
        raise SaskitError("models doc requires a model name")
    print(models.get_model(args.name).doc_text())
    return EXIT_OK


def cmd_search_docs(args) -> int:
    index = docstore.default_index()
    hits = index.search(args.query, k=args.k)
    if not hits:
        print("no matches")
        return EXIT_OK
    for hit in hits:
        snippet = " ".join(hit.snippet.split())[:120]
        print(f"{hit.doc_id:12s} score={hit.score:.4f}  {snippet}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve
    settings = Settings(backend=args.backend,
                        scenario_path=args.scenario or "")
    serve(addr=args.addr, port=args.port, settings=settings,
          data_dir=args.data_dir, ui_dir=args.ui_dir)
    return EXIT_OK


def cmd_chat(args) -> int:
    settings = Settings(backend=args.backend, model=args.model,
                        scenario_path=args.scenario or "")
    if args.backend == "scripted" and not args.scenario:
        settings.scenario_path = str(canonical_scenario_path())
    backend = make_backend(settings)
    orchestrator = Orchestrator(backend)
    session = SessionState(settings)
    if args.data:
        for datafile in args.data:
            parsed = dataio.load_ascii(Path(datafile).read_text())
            stored = session.add_file(Path(datafile).name, parsed.dataset)
            print(f"loaded {datafile} as file_id={stored.file_id} "
                  f"({len(parsed.dataset)} points)")
    print("saskit chat; end with Ctrl-D")
    for line in sys.stdin:
        text = line.strip()
        if not text:
            continue
        print(f"you> {text}")
        reply = orchestrator.handle_user_turn(text, session)
        print(f"agent> {reply.final_text}")
        if reply.plot_ids:
            print(f"[plots: {', '.join(reply.plot_ids)}]")
        if args.verbose:
            for entry in session.logs:
                print(f"  log: {entry}")
            session.logs.clear()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saskit",
        description="Small-angle scattering analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sld", help="scattering length density from a formula")
    p.add_argument("formula")
    p.add_argument("--density", type=float, required=True, help="g/cm^3")
    p.set_defaults(func=cmd_sld)

    p = sub.add_parser("generate", help="synthetic scattering data")
    p.add_argument("--model", required=True)
    p.add_argument("--set", action="append", metavar="NAME=VALUE",
                   help="model parameter (repeatable)")
    p.add_argument("--qmin", type=float, default=models.DEFAULT_QMIN)
    p.add_argument("--qmax", type=float, default=models.DEFAULT_QMAX)
    p.add_argument("--n", type=int, default=models.DEFAULT_NPOINTS)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the dataset to this file")
    p.add_argument("--plot", help="write an SVG plot to this file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="fit a model to a data file")
    p.add_argument("datafile")
    p.add_argument("--model", required=True)
    p.add_argument("--fix", action="append", metavar="NAME=VALUE")
    p.add_argument("--init", action="append", metavar="NAME=VALUE")
    p.add_argument("--bound", action="append", metavar="NAME=LO,HI")
    p.add_argument("--restarts", type=int, default=0,
                   help="deterministic jittered multi-starts")
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--plot", help="write an SVG overlay/residual plot")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("models", help="model registry")
    p.add_argument("action", choices=["list", "doc"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("search-docs", help="keyword search over model docs")
    p.add_argument("query")
    p.add_argument("-k", type=int, default=3)
    p.set_defaults(func=cmd_search_docs)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8808)
    p.add_argument("--backend", choices=["openrouter", "scripted"],
                   default="openrouter")
    p.add_argument("--scenario", help="scenario file for the scripted backend")
    p.add_argument("--data-dir", help="persist uploads and plots here")
    p.add_argument("--ui-dir", help="static web UI directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("chat", help="chat REPL on stdin/stdout")
    p.add_argument("--backend", choices=["openrouter", "scripted"],
                   default="openrouter")
    p.add_argument("--scenario", help="scenario file for the scripted backend")
    p.add_argument("--model", default="gpt-4o-mini")
    p.add_argument("--data", action="append",
                   help="preload a data file into the session (repeatable)")
    p.add_argument("--verbose", action="store_true",
                   help="echo session log lines after each turn")
    p.set_defaults(func=cmd_chat)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except SaskitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
