/** Stateful in-memory stand-in for the saskit service, exposed as a fetch
 * function.  Mirrors the JSON contracts the real endpoints serve. */

import type { PlotArtifact } from "../src/api.js";

export const FIXTURE_PROMPTS = [
  "What can you do for me?",
  "Calculate the SLD of heavy water (D2O) with density 1.1044 g/cm3.",
  "Generate scattering data for a lamellar model with thickness 50 A " +
    "for q between 0.01 and 1.",
  "Fit my uploaded data with the sphere model; the solvent is heavy water " +
    "and the sample SLD is about 1.",
];

const LLM_CHOICES = ["gpt-4o-mini", "gpt-4o", "gpt-5", "claude-sonnet-4",
  "grok-3", "grok-4", "gemini-2.5-pro", "gemini-2.5-flash"];

function jsonResponse(doc: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(doc),
  } as unknown as Response;
}

export class FixtureService {
  logs: string[] = ["session created"];
  plots = new Map<string, PlotArtifact>();
  uploads = new Map<string, { name: string; points: number }>();
  settings = {
    backend: "scripted",
    model: "gpt-4o-mini",
    endpoint: "https://openrouter.ai/api/v1/chat/completions",
    api_key_set: false,
    scenario_path: "",
  };
  private counter = 0;

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const [path, query] = input.split("?");
    const method = init?.method ?? "GET";
    if (path === "/api/session" && method === "POST") {
      return jsonResponse({ session_id: "fixture-session-0001" });
    }
    if (path === "/api/examples") {
      return jsonResponse({ prompts: FIXTURE_PROMPTS });
    }
    if (path === "/api/models") {
      return jsonResponse({
        models: ["cylinder", "ellipsoid", "lamellar", "sphere"].map((name) => ({
          name, title: `${name} model`, category: `shape:${name}`, parameters: [],
        })),
      });
    }
    if (path === "/api/settings" && method === "GET") {
      return jsonResponse({ ...this.settings, llm_choices: LLM_CHOICES });
    }
    if (path === "/api/settings" && method === "PUT") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      if (body.model) this.settings.model = body.model;
      if (body.api_key) this.settings.api_key_set = true;
      return jsonResponse({ ...this.settings, llm_choices: LLM_CHOICES });
    }
    if (path === "/api/logs") {
      const cursor = Number(new URLSearchParams(query).get("cursor") ?? "0");
      return jsonResponse({
        lines: this.logs.slice(cursor),
        cursor: this.logs.length,
      });
    }
    if (path === "/api/chat" && method === "POST") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      return this.chat(String(body.text ?? ""));
    }
    if (path?.startsWith("/api/plots/")) {
      const plotId = path.slice("/api/plots/".length);
      const artifact = this.plots.get(plotId);
      return artifact
        ? jsonResponse(artifact)
        : jsonResponse({ code: "unknown_plot", message: "no such plot" }, 404);
    }
    if (path === "/api/upload" && method === "POST") {
      return this.upload(init?.body as FormData);
    }
    return jsonResponse({ code: "not_found", message: `no route ${path}` }, 404);
  };

  private chat(text: string): Response {
    this.logs.push("[coordinator] route task=…");
    if (text.includes("Fit") || text.includes("fit")) {
      const plotId = `plot-${++this.counter}`;
      this.plots.set(plotId, samplePlot(plotId, true));
      this.logs.push("[fitting] tool_call tool_fit args={…}",
        "[fitting] tool_result tool_fit ok");
      return jsonResponse({
        reply_text: `Fitted the sphere model: radius = 578.3 A, reduced ` +
          `chi-square = 0.909. See plot ${plotId}.`,
        plot_ids: [plotId],
        log_cursor: this.logs.length,
      });
    }
    if (text.includes("SLD")) {
      this.logs.push("[sld] tool_call tool_sld args={…}",
        "[sld] tool_result tool_sld ok");
      return jsonResponse({
        reply_text: "Heavy water (D2O): the real part of the neutron SLD is " +
          "6.35788 and the imaginary part is 1.13406e-07, in 1e-6/A^2.",
        plot_ids: [],
        log_cursor: this.logs.length,
      });
    }
    if (text.includes("Generate") || text.includes("lamellar")) {
      const plotId = `plot-${++this.counter}`;
      this.plots.set(plotId, samplePlot(plotId, false));
      this.logs.push("[generation] tool_call tool_generate args={…}",
        "[generation] tool_result tool_generate ok");
      return jsonResponse({
        reply_text: `Generated a lamellar curve; see plot ${plotId}.`,
        plot_ids: [plotId],
        log_cursor: this.logs.length,
      });
    }
    return jsonResponse({
      reply_text: "I can help with SLD calculation, data generation, and " +
        "data fitting.",
      plot_ids: [],
      log_cursor: this.logs.length,
    });
  }

  private async upload(form: FormData): Promise<Response> {
    const file = form.get("file") as File | null;
    if (!file) {
      return jsonResponse({ code: "bad_request", message: "no file" }, 422);
    }
    const text = await file.text();
    const qValues: number[] = [];
    for (const line of text.split("\n")) {
      const fields = line.trim().split(/[\s,;]+/);
      if (fields.length < 2) continue;
      const q = Number(fields[0]);
      const intensity = Number(fields[1]);
      if (Number.isFinite(q) && Number.isFinite(intensity) && q > 0) {
        qValues.push(q);
      }
    }
    if (!qValues.length) {
      return jsonResponse({ code: "NoNumericRows", message: "no data" }, 422);
    }
    qValues.sort((a, b) => a - b);
    const fileId = `file-${++this.counter}`;
    this.uploads.set(fileId, { name: file.name, points: qValues.length });
    this.logs.push(`upload ${file.name}: ${qValues.length} points`);
    return jsonResponse({
      file_id: fileId,
      name: file.name,
      points: qValues.length,
      q_range: [qValues[0], qValues[qValues.length - 1]],
    });
  }
}

function samplePlot(plotId: string, withResiduals: boolean): PlotArtifact {
  const x = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
  const y = x.map((q) => 1e-3 + 1.0 / (q * q));
  const series: PlotArtifact["series"] = [
    { label: "data", kind: "points", x, y, yerr: y.map((v) => 0.02 * v) },
    { label: "fit", kind: "curve", x, y },
  ];
  if (withResiduals) {
    series.push({
      label: "normalized residuals",
      kind: "residuals",
      x,
      y: x.map((_, i) => (i % 2 ? 0.8 : -0.6)),
    });
  }
  return {
    plot_id: plotId,
    title: "fixture plot",
    x_label: "q (1/Å)",
    y_label: "I(q) (1/cm)",
    x_log: true,
    y_log: true,
    series,
  };
}
