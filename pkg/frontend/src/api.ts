/** Typed client for the saskit service JSON API. */

export interface ChatResponse {
  reply_text: string;
  plot_ids: string[];
  log_cursor: number;
}

export interface LogsResponse {
  lines: string[];
  cursor: number;
}

export interface PlotSeries {
  label: string;
  kind: "curve" | "points" | "residuals";
  x: number[];
  y: number[];
  yerr?: number[];
}

export interface PlotArtifact {
  plot_id: string;
  title: string;
  x_label: string;
  y_label: string;
  x_log: boolean;
  y_log: boolean;
  series: PlotSeries[];
}

export interface UploadResponse {
  file_id: string;
  name: string;
  points: number;
  q_range: [number, number];
}

export interface ModelSummary {
  name: string;
  title: string;
}

export interface SettingsView {
  backend: string;
  model: string;
  endpoint: string;
  api_key_set: boolean;
  scenario_path: string;
  llm_choices: string[];
}

export interface SettingsUpdate {
  backend?: string;
  model?: string;
  endpoint?: string;
  api_key?: string;
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const code = (body as { code?: string }).code ?? "error";
      const message =
        (body as { message?: string; reply_text?: string }).reply_text ??
        (body as { message?: string }).message ??
        `request failed (${response.status})`;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  async createSession(): Promise<string> {
    const doc = await this.request<{ session_id: string }>("/api/session", {
      method: "POST",
    });
    return doc.session_id;
  }

  chat(sessionId: string, text: string): Promise<ChatResponse> {
    return this.request<ChatResponse>("/api/chat", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, text }),
    });
  }

  logs(sessionId: string, cursor: number): Promise<LogsResponse> {
    const params = new URLSearchParams({
      session_id: sessionId,
      cursor: String(cursor),
    });
    return this.request<LogsResponse>(`/api/logs?${params}`);
  }

  plot(plotId: string): Promise<PlotArtifact> {
    return this.request<PlotArtifact>(`/api/plots/${plotId}`);
  }

  async upload(sessionId: string, file: File): Promise<UploadResponse> {
    const form = new FormData();
    form.append("session_id", sessionId);
    form.append("file", file, file.name);
    return this.request<UploadResponse>("/api/upload", {
      method: "POST",
      body: form,
    });
  }

  async models(): Promise<ModelSummary[]> {
    const doc = await this.request<{ models: ModelSummary[] }>("/api/models");
    return doc.models;
  }

  async examples(): Promise<string[]> {
    const doc = await this.request<{ prompts: string[] }>("/api/examples");
    return doc.prompts;
  }

  getSettings(): Promise<SettingsView> {
    return this.request<SettingsView>("/api/settings");
  }

  putSettings(update: SettingsUpdate): Promise<SettingsView> {
    return this.request<SettingsView>("/api/settings", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(update),
    });
  }
}
