"""Conversation, tool-call protocol, and per-session state records.

Message/ToolSpec/ToolCall wire shapes are structurally compatible with the
OpenAI chat-completions schema so the same records drive both the HTTPS
backend and the scripted offline backend.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from ..dataio import Dataset
from ..errors import SaskitError
from ..plotting import PlotArtifact

TASKS = ("guidance", "sld", "generate", "fit")


class ToolArgumentInvalid(SaskitError):
    pass


@dataclass
class ToolCall:
    id: str
    name: str
    arguments: dict[str, Any]

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "type": "function",
            "function": {"name": self.name,
                         "arguments": json.dumps(self.arguments)},
        }


@dataclass
class ToolResult:
    id: str
    ok: bool
    payload: dict[str, Any] | None = None
    error: str | None = None

    def content_json(self) -> str:
        if self.ok:
            return json.dumps({"ok": True, **(self.payload or {})})
        return json.dumps({"ok": False, "error": self.error or "tool failed"})


@dataclass
class Message:
    role: str                                # system | user | assistant | tool
    content: str = ""
    tool_calls: list[ToolCall] | None = None
    tool_call_id: str | None = None

    def __post_init__(self):
        if self.role == "tool" and not self.tool_call_id:
            raise SaskitError("tool messages must carry tool_call_id")

    def to_wire(self) -> dict:
        doc: dict[str, Any] = {"role": self.role, "content": self.content}
        if self.tool_calls:
            doc["tool_calls"] = [c.to_wire() for c in self.tool_calls]
        if self.tool_call_id:
            doc["tool_call_id"] = self.tool_call_id
        return doc


@dataclass(frozen=True)
class ToolParam:
    name: str
    type: str                    # string | number | integer | boolean | object | array
    description: str
    required: bool = False
    default: Any = None


_JSON_TYPES = {
    "string": (str,),
    "number": (int, float),
    "integer": (int, float),
    "boolean": (bool,),
    "object": (dict,),
    "array": (list,),
}


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    params: tuple[ToolParam, ...] = ()

    def to_openai(self) -> dict:
        properties = {}
        required = []
        for p in self.params:
            prop: dict[str, Any] = {"type": p.type, "description": p.description}
            if p.default is not None:
                prop["default"] = p.default
            properties[p.name] = prop
            if p.required:
                required.append(p.name)
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": self.description,
                "parameters": {"type": "object", "properties": properties,
                               "required": required},
            },
        }

    def validate_arguments(self, arguments: dict[str, Any]) -> dict[str, Any]:
        """Schema-check and fill defaults; raises ToolArgumentInvalid."""
        if not isinstance(arguments, dict):
            raise ToolArgumentInvalid(f"{self.name}: arguments must be an object")
        known = {p.name: p for p in self.params}
        for key in arguments:
            if key not in known:
                raise ToolArgumentInvalid(f"{self.name}: unknown argument {key!r}")
        resolved: dict[str, Any] = {}
        for p in self.params:
            if p.name in arguments:
                value = arguments[p.name]
                expected = _JSON_TYPES[p.type]
                if isinstance(value, bool) and p.type in ("number", "integer"):
                    raise ToolArgumentInvalid(
                        f"{self.name}: argument {p.name!r} must be a {p.type}")
                if not isinstance(value, expected):
                    raise ToolArgumentInvalid(
                        f"{self.name}: argument {p.name!r} must be a {p.type}")
                if p.type == "integer" and float(value) != int(value):
                    raise ToolArgumentInvalid(
                        f"{self.name}: argument {p.name!r} must be an integer")
                resolved[p.name] = value
            elif p.required:
                raise ToolArgumentInvalid(
                    f"{self.name}: missing required argument {p.name!r}")
            elif p.default is not None:
                resolved[p.name] = p.default
        return resolved


@dataclass
class AgentProfile:
    name: str
    system_prompt: str
    tools: tuple[ToolSpec, ...]
    max_tool_iterations: int = 8

    def tool_names(self) -> set[str]:
        return {t.name for t in self.tools}


@dataclass
class RouteDecision:
    task: str
    rationale: str

    def __post_init__(self):
        if self.task not in TASKS:
            raise SaskitError(f"bad task {self.task!r}")


@dataclass
class Settings:
    backend: str = "openrouter"       # "openrouter" | "scripted"
    model: str = "gpt-4o-mini"
    endpoint: str = "https://openrouter.ai/api/v1/chat/completions"
    api_key: str = ""                 # empty: fall back to OPENROUTER_API_KEY
    scenario_path: str = ""           # scripted backend scenario file

    def public_dict(self) -> dict:
        """Settings view with the credential reduced to a presence flag."""
        return {
            "backend": self.backend,
            "model": self.model,
            "endpoint": self.endpoint,
            "api_key_set": bool(self.api_key),
            "scenario_path": self.scenario_path,
        }


@dataclass
class StoredFile:
    file_id: str
    name: str
    dataset: Dataset


class SessionState:
    """One chat session: transcript, uploads, plots, and append-only logs."""

    def __init__(self, settings: Settings | None = None):
        self.session_id = uuid.uuid4().hex
        self.transcript: list[Message] = []
        self.files: dict[str, StoredFile] = {}
        self.plots: dict[str, PlotArtifact] = {}
        self.logs: list[str] = []
        self.settings = settings if settings is not None else Settings()
        self.created = time.time()
        self.last_active = time.time()

    def touch(self) -> None:
        self.last_active = time.time()

    def log(self, line: str) -> None:
        self.logs.append(line)

    def add_file(self, name: str, dataset: Dataset) -> StoredFile:
        stored = StoredFile(file_id=uuid.uuid4().hex[:12], name=name, dataset=dataset)
        self.files[stored.file_id] = stored
        return stored

    def add_plot(self, artifact: PlotArtifact) -> PlotArtifact:
        self.plots[artifact.plot_id] = artifact
        return artifact

    def context_block(self) -> str:
        """File and plot inventory passed to expert agents instead of the
        full transcript."""
        lines = ["Session context:"]
        if self.files:
            for stored in self.files.values():
                ds = stored.dataset
                lines.append(
                    f"file: file_id={stored.file_id} name={stored.name} "
                    f"points={len(ds)} q=[{ds.q[0]:.6g},{ds.q[-1]:.6g}]")
        else:
            lines.append("file: (none uploaded)")
        if self.plots:
            lines.append("plots: " + ", ".join(self.plots))
        else:
            lines.append("plots: (none)")
        return "\n".join(lines)
