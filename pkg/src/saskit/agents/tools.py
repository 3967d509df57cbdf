"""The deterministic tool layer the expert agents call into.

Every tool validates its arguments against its spec before execution and
returns a ToolResult; failures are encoded in the result (ok=False with a
diagnostic), never raised past the agent loop.
"""

from __future__ import annotations

import logging

from .. import docstore, fitting, models, sld
from ..errors import SaskitError
from ..plotting import dataset_plot, fit_plot
from .session import SessionState, ToolArgumentInvalid, ToolCall, ToolParam, ToolResult, ToolSpec

logger = logging.getLogger(__name__)

TOOL_SLD = ToolSpec(
    name="tool_sld",
    description="Compute neutron (real and imaginary) and X-ray scattering "
                "length densities from a chemical formula and mass density.",
    params=(
        ToolParam("formula", "string", "Chemical formula, e.g. D2O or Ca(OH)2",
                  required=True),
        ToolParam("density", "number", "Mass density in g/cm^3", required=True),
    ),
)

TOOL_LIST_MODELS = ToolSpec(
    name="tool_list_models",
    description="List the available scattering models with one-line summaries.",
)

TOOL_MODEL_DOC = ToolSpec(
    name="tool_model_doc",
    description="Full documentation for one scattering model.",
    params=(ToolParam("name", "string", "Model name", required=True),),
)

TOOL_SEARCH_DOCS = ToolSpec(
    name="tool_search_docs",
    description="Keyword search over the model documentation.",
    params=(
        ToolParam("query", "string", "Search terms", required=True),
        ToolParam("k", "integer", "Number of hits to return", default=3),
    ),
)

TOOL_GENERATE = ToolSpec(
    name="tool_generate",
    description="Generate synthetic scattering data I(q) for a model and "
                "register a plot of it.",
    params=(
        ToolParam("model", "string", "Model name", required=True),
        ToolParam("params", "object", "Model parameter values by name"),
        ToolParam("qmin", "number", "Lowest q, 1/A", default=models.DEFAULT_QMIN),
        ToolParam("qmax", "number", "Highest q, 1/A", default=models.DEFAULT_QMAX),
        ToolParam("n", "integer", "Number of q points", default=models.DEFAULT_NPOINTS),
        ToolParam("noise_fraction", "number",
                  "Relative noise level, 0 for a clean curve", default=0),
        ToolParam("seed", "integer", "Noise generator seed", default=0),
    ),
)

TOOL_FIT = ToolSpec(
    name="tool_fit",
    description="Fit a model to an uploaded dataset with bounded "
                "Levenberg-Marquardt; fixed parameters stay pinned.",
    params=(
        ToolParam("file_id", "string", "Uploaded file id from the session "
                  "context", required=True),
        ToolParam("model", "string", "Model name", required=True),
        ToolParam("fixed", "object", "Parameter name -> pinned value"),
        ToolParam("initial", "object", "Parameter name -> initial guess"),
        ToolParam("bounds", "object", "Parameter name -> [lower, upper]"),
        ToolParam("restarts", "integer",
                  "Deterministic jittered multi-starts on top of the base fit",
                  default=0),
    ),
)

ALL_TOOLS = (TOOL_SLD, TOOL_LIST_MODELS, TOOL_MODEL_DOC, TOOL_SEARCH_DOCS,
             TOOL_GENERATE, TOOL_FIT)


def _number_map(doc: dict, label: str) -> dict[str, float]:
    out = {}
    for key, value in doc.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ToolArgumentInvalid(f"{label}[{key!r}] must be a number")
        out[str(key)] = float(value)
    return out


def _bounds_map(doc: dict) -> dict[str, tuple[float, float]]:
    out = {}
    for key, value in doc.items():
        if (not isinstance(value, (list, tuple)) or len(value) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for v in value)):
            raise ToolArgumentInvalid(
                f"bounds[{key!r}] must be a [lower, upper] number pair")
        out[str(key)] = (float(value[0]), float(value[1]))
    return out


class Toolbox:
    """Executes tool calls against the numeric modules and session state."""

    def __init__(self, registry: models.Registry | None = None,
                 doc_index: docstore.Bm25Index | None = None):
        self.registry = registry if registry is not None else models._DEFAULT
        self.doc_index = (doc_index if doc_index is not None
                          else docstore.default_index(self.registry))
        self.specs: dict[str, ToolSpec] = {t.name: t for t in ALL_TOOLS}

    def execute(self, call: ToolCall, session: SessionState) -> ToolResult:
        spec = self.specs.get(call.name)
        if spec is None:
            return ToolResult(id=call.id, ok=False,
                              error=f"unknown tool {call.name!r}")
        try:
            arguments = spec.validate_arguments(call.arguments)
            handler = getattr(self, "_run_" + call.name.removeprefix("tool_"))
            payload = handler(arguments, session)
            return ToolResult(id=call.id, ok=True, payload=payload)
        except SaskitError as exc:
            return ToolResult(id=call.id, ok=False,
                              error=f"{type(exc).__name__}: {exc}")
        except Exception as exc:  # keep the loop alive no matter what
            logger.exception("tool %s crashed", call.name)
            return ToolResult(id=call.id, ok=False,
                              error=f"internal error: {exc}")

    # --- handlers ---

    def _run_sld(self, args: dict, session: SessionState) -> dict:
        report = sld.sld_report(args["formula"], args["density"])
        return {"formula": args["formula"], "density": args["density"],
                **report.to_dict()}

    def _run_list_models(self, args: dict, session: SessionState) -> dict:
        return {"models": [{"name": info.name, "title": info.title}
                           for info in self.registry.list_models()]}

    def _run_model_doc(self, args: dict, session: SessionState) -> dict:
        doc = self.doc_index.get_doc(args["name"])
        return {"name": doc.doc_id, "title": doc.title, "doc": doc.body}

    def _run_search_docs(self, args: dict, session: SessionState) -> dict:
        hits = self.doc_index.search(args["query"], k=int(args.get("k", 3)))
        return {"hits": [{"doc_id": h.doc_id, "score": h.score,
                          "snippet": h.snippet} for h in hits]}

    def _run_generate(self, args: dict, session: SessionState) -> dict:
        params = _number_map(args.get("params", {}) or {}, "params")
        grid = models.default_qgrid(args.get("qmin", models.DEFAULT_QMIN),
                                    args.get("qmax", models.DEFAULT_QMAX),
                                    int(args.get("n", models.DEFAULT_NPOINTS)))
        dataset = self.registry.generate(
            args["model"], params, grid,
            noise_fraction=float(args.get("noise_fraction", 0) or 0),
            seed=int(args.get("seed", 0)))
        title = f"{args['model']} I(q)"
        plot = session.add_plot(dataset_plot(dataset, title))
        stored = session.add_file(
            f"synthetic_{args['model']}_{int(args.get('seed', 0))}.txt", dataset)
        return {"plot_id": plot.plot_id, "file_id": stored.file_id,
                "model": args["model"], **dataset.summary()}

    def _run_fit(self, args: dict, session: SessionState) -> dict:
        stored = session.files.get(args["file_id"])
        if stored is None:
            raise ToolArgumentInvalid(f"no uploaded file {args['file_id']!r}")
        problem = fitting.build_problem(
            args["model"], stored.dataset,
            fixed=_number_map(args.get("fixed", {}) or {}, "fixed"),
            initial=_number_map(args.get("initial", {}) or {}, "initial"),
            bounds=_bounds_map(args.get("bounds", {}) or {}),
            registry=self.registry)
        options = fitting.FitOptions(restarts=int(args.get("restarts", 0)))
        result = fitting.fit_lm(problem, options)
        model_i = self.registry.evaluate(args["model"], result.values,
                                         stored.dataset.q)
        plot = session.add_plot(fit_plot(
            stored.dataset, model_i, result.residuals,
            f"{args['model']} fit of {stored.name}"))
        report = fitting.fit_report(problem, result)
        doc = result.to_dict()
        doc.pop("residuals")
        return {"plot_id": plot.plot_id, "model": args["model"],
                "file": stored.name, "report": report, **doc}
