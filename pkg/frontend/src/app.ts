/** The five-panel app: chat, system logs, settings, plot viewer, files.
 *
 * One chat turn is in flight at a time (the send control is disabled while
 * busy, mirroring the service's 409 contract); the log panel polls once per
 * second during a turn and settles with a final refresh when the turn ends.
 * The API key is write-only: the input is cleared after saving and only a
 * presence indicator is ever rendered.
 */

import { ApiClient, ApiError, UploadResponse } from "./api.js";
import { renderPlotSvg } from "./plot.js";

const LOG_POLL_MS = 1000;

interface FileEntry extends UploadResponse {
  selected: boolean;
}

export class App {
  sessionId = "";
  busy = false;
  logCursor = 0;
  files: FileEntry[] = [];
  plotIds: string[] = [];
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {}

  async init(): Promise<void> {
    this.root.innerHTML = LAYOUT;
    this.bindControls();
    this.sessionId = await this.api.createSession();
    await Promise.all([
      this.renderExamples(),
      this.renderSettings(),
      this.refreshLogs(),
    ]);
  }

  // --- chat panel ---

  private bindControls(): void {
    this.query<HTMLFormElement>("#chat-form").addEventListener("submit", (e) => {
      e.preventDefault();
      const input = this.query<HTMLTextAreaElement>("#chat-input");
      const text = input.value.trim();
      if (text) {
        input.value = "";
        void this.send(text);
      }
    });
    this.query<HTMLFormElement>("#settings-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.saveSettings();
    });
    this.query<HTMLSelectElement>("#plot-select").addEventListener("change", (e) => {
      const id = (e.target as HTMLSelectElement).value;
      if (id) void this.showPlot(id);
    });
    this.query<HTMLFormElement>("#upload-form").addEventListener("submit", (e) => {
      e.preventDefault();
      const picker = this.query<HTMLInputElement>("#file-input");
      const file = picker.files?.[0];
      if (file) void this.uploadFile(file);
    });
  }

  private async renderExamples(): Promise<void> {
    const prompts = await this.api.examples();
    const container = this.query("#example-prompts");
    container.innerHTML = "";
    for (const prompt of prompts) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "example-prompt";
      button.textContent = prompt;
      button.addEventListener("click", () => {
        this.query<HTMLTextAreaElement>("#chat-input").value = prompt;
      });
      container.appendChild(button);
    }
  }

  async send(text: string): Promise<void> {
    if (this.busy || !this.sessionId) return;
    this.setBusy(true);
    const outgoing = this.selectedFile()
      ? `${text}\n[context: uploaded file ${this.selectedFile()!.name} ` +
        `(file_id=${this.selectedFile()!.file_id})]`
      : text;
    this.addMessage("user", text);
    try {
      const reply = await this.api.chat(this.sessionId, outgoing);
      this.addMessage("assistant", reply.reply_text);
      for (const plotId of reply.plot_ids) {
        this.registerPlot(plotId);
      }
      if (reply.plot_ids.length) {
        await this.showPlot(reply.plot_ids[reply.plot_ids.length - 1]);
      }
    } catch (error) {
      this.addMessage("error", describeError(error));
    } finally {
      await this.refreshLogs();
      this.setBusy(false);
    }
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    this.query<HTMLButtonElement>("#send-button").disabled = busy;
    this.query("#busy-indicator").classList.toggle("active", busy);
    if (busy) {
      this.pollTimer = setInterval(() => void this.refreshLogs(), LOG_POLL_MS);
    } else if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private addMessage(role: "user" | "assistant" | "error", text: string): void {
    const list = this.query("#chat-messages");
    const item = document.createElement("div");
    item.className = `chat-message role-${role}`;
    item.textContent = text;
    list.appendChild(item);
    list.scrollTop = list.scrollHeight;
  }

  // --- logs panel ---

  async refreshLogs(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const doc = await this.api.logs(this.sessionId, this.logCursor);
      if (doc.lines.length) {
        const output = this.query<HTMLPreElement>("#logs-output");
        output.textContent += doc.lines.map((l) => l + "\n").join("");
        output.scrollTop = output.scrollHeight;
      }
      this.logCursor = doc.cursor;
    } catch {
      // polling must never break the turn
    }
  }

  // --- settings panel ---

  private async renderSettings(): Promise<void> {
    const view = await this.api.getSettings();
    const select = this.query<HTMLSelectElement>("#model-select");
    select.innerHTML = "";
    for (const choice of view.llm_choices) {
      const option = document.createElement("option");
      option.value = choice;
      option.textContent = choice;
      if (choice === view.model) option.selected = true;
      select.appendChild(option);
    }
    if (!view.llm_choices.includes(view.model)) {
      this.query<HTMLInputElement>("#model-override").value = view.model;
    }
    this.updateKeyStatus(view.api_key_set);
  }

  private updateKeyStatus(isSet: boolean): void {
    const status = this.query("#api-key-status");
    status.textContent = isSet ? "key set" : "no key";
    status.classList.toggle("set", isSet);
  }

  async saveSettings(): Promise<void> {
    const override = this.query<HTMLInputElement>("#model-override").value.trim();
    const model = override || this.query<HTMLSelectElement>("#model-select").value;
    const keyInput = this.query<HTMLInputElement>("#api-key-input");
    const update: { model: string; api_key?: string } = { model };
    if (keyInput.value) {
      update.api_key = keyInput.value;
    }
    const view = await this.api.putSettings(update);
    keyInput.value = ""; // write-only: never keep or re-display the key
    this.updateKeyStatus(view.api_key_set);
  }

  // --- plot panel ---

  private registerPlot(plotId: string): void {
    if (this.plotIds.includes(plotId)) return;
    this.plotIds.push(plotId);
    const select = this.query<HTMLSelectElement>("#plot-select");
    const option = document.createElement("option");
    option.value = plotId;
    option.textContent = `plot ${this.plotIds.length} (${plotId.slice(0, 8)})`;
    select.appendChild(option);
    select.value = plotId;
  }

  async showPlot(plotId: string): Promise<void> {
    const artifact = await this.api.plot(plotId);
    this.query("#plot-svg").innerHTML = renderPlotSvg(artifact);
    this.query<HTMLSelectElement>("#plot-select").value = plotId;
  }

  // --- files panel ---

  async uploadFile(file: File): Promise<void> {
    try {
      const uploaded = await this.api.upload(this.sessionId, file);
      this.files.push({ ...uploaded, selected: false });
      this.selectFile(uploaded.file_id);
    } catch (error) {
      this.addMessage("error", describeError(error));
    } finally {
      await this.refreshLogs();
    }
  }

  selectFile(fileId: string): void {
    for (const entry of this.files) {
      entry.selected = entry.file_id === fileId;
    }
    this.renderFileList();
  }

  selectedFile(): FileEntry | null {
    return this.files.find((f) => f.selected) ?? null;
  }

  private renderFileList(): void {
    const list = this.query("#file-list");
    list.innerHTML = "";
    for (const entry of this.files) {
      const item = document.createElement("li");
      item.className = "file-entry" + (entry.selected ? " selected" : "");
      item.textContent =
        `${entry.name} — ${entry.points} points, ` +
        `q ∈ [${entry.q_range[0].toPrecision(3)}, ${entry.q_range[1].toPrecision(3)}]`;
      item.addEventListener("click", () => this.selectFile(entry.file_id));
      list.appendChild(item);
    }
    const chip = this.query("#context-chip");
    const selected = this.selectedFile();
    chip.textContent = selected ? `context: ${selected.name}` : "";
  }

  private query<T extends HTMLElement = HTMLElement>(selector: string): T {
    const node = this.root.querySelector<T>(selector);
    if (!node) throw new Error(`missing element ${selector}`);
    return node;
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return `request failed (${error.status} ${error.code}): ${error.message}`;
  }
  return `request failed: ${String(error)}`;
}

const LAYOUT = `
<header id="app-header">
  <h1>saskit — small-angle scattering assistant</h1>
  <span id="busy-indicator" title="a chat turn is running">working…</span>
</header>
<main id="layout">
  <div id="left-column">
    <section id="chat-panel" class="panel">
      <h2>Chat</h2>
      <div id="chat-messages"></div>
      <div id="example-prompts"></div>
      <form id="chat-form">
        <span id="context-chip"></span>
        <textarea id="chat-input" rows="3"
          placeholder="Ask for an SLD, synthetic data, or a fit…"></textarea>
        <button id="send-button" type="submit">Send</button>
      </form>
    </section>
    <section id="logs-panel" class="panel">
      <h2>System logs</h2>
      <pre id="logs-output"></pre>
    </section>
  </div>
  <div id="right-column">
    <section id="settings-panel" class="panel">
      <h2>Settings</h2>
      <form id="settings-form">
        <label>LLM
          <select id="model-select"></select>
        </label>
        <label>Model override
          <input id="model-override" type="text" placeholder="free-text model id">
        </label>
        <label>API key <span id="api-key-status">no key</span>
          <input id="api-key-input" type="password" autocomplete="off"
            placeholder="write-only">
        </label>
        <button id="save-settings" type="submit">Save</button>
      </form>
    </section>
    <section id="plot-panel" class="panel">
      <h2>Plot</h2>
      <select id="plot-select"></select>
      <div id="plot-svg"></div>
    </section>
    <section id="files-panel" class="panel">
      <h2>Data files</h2>
      <form id="upload-form">
        <input id="file-input" type="file" accept=".txt,.dat,.csv,.abs">
        <button id="upload-button" type="submit">Upload</button>
      </form>
      <ul id="file-list"></ul>
    </section>
  </div>
</main>
`;
