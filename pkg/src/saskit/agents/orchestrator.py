"""Two-layer agent orchestration: coordinator routing plus expert tool loops.

The coordinator classifies each user turn (backend call with a forced-choice
instruction, keyword fallback when the backend is unavailable or unparsable)
and hands it to one of three expert agents.  Each expert runs a bounded
tool-call loop against the chat backend; every backend request, tool call
and tool result is appended to the session log.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .. import docstore, models
from . import prompts
from .backends import BackendError, ChatBackend
from .session import (
    AgentProfile,
    Message,
    RouteDecision,
    SessionState,
    ToolArgumentInvalid,
    ToolCall,
    ToolResult,
)
from .tools import (
    TOOL_FIT,
    TOOL_GENERATE,
    TOOL_LIST_MODELS,
    TOOL_MODEL_DOC,
    TOOL_SEARCH_DOCS,
    TOOL_SLD,
    Toolbox,
)

logger = logging.getLogger(__name__)

_SLD_WORDS = ("sld", "scattering length density")
_FIT_WORDS = ("fit", "analyze", "analyse", "refine")
_GENERATE_WORDS = ("generate", "simulate", "plot", "synthetic", "curve",
                   "scattering data")


@dataclass
class AgentReply:
    final_text: str
    plot_ids: list[str] = field(default_factory=list)
    tool_trace: list[tuple[ToolCall, ToolResult]] = field(default_factory=list)
    task: str = "guidance"
    backend_failed: bool = False
    iteration_limited: bool = False


def build_profiles(toolbox: Toolbox) -> dict[str, AgentProfile]:
    return {
        "sld": AgentProfile(
            name="sld", system_prompt=prompts.SLD_PROMPT,
            tools=(TOOL_SLD,)),
        "generate": AgentProfile(
            name="generation", system_prompt=prompts.GENERATION_PROMPT,
            tools=(TOOL_GENERATE, TOOL_SEARCH_DOCS, TOOL_MODEL_DOC,
                   TOOL_LIST_MODELS)),
        "fit": AgentProfile(
            name="fitting", system_prompt=prompts.FITTING_PROMPT,
            tools=(TOOL_FIT, TOOL_SLD, TOOL_SEARCH_DOCS, TOOL_MODEL_DOC,
                   TOOL_LIST_MODELS)),
    }


class Orchestrator:
    def __init__(self, backend: ChatBackend,
                 registry: models.Registry | None = None,
                 doc_index: docstore.Bm25Index | None = None):
        self.backend = backend
        self.toolbox = Toolbox(registry, doc_index)
        self.profiles = build_profiles(self.toolbox)
        self._model_names = set(self.toolbox.registry.names())

    # --- routing ---

    def route(self, text: str, session: SessionState) -> RouteDecision:
        if not text.strip():
            decision = RouteDecision(task="guidance", rationale="empty message")
            session.log("[coordinator] route task=guidance (empty message)")
            return decision
        task = self._classify_via_backend(text, session)
        if task is not None:
            source = "backend"
        else:
            task = self._classify_via_keywords(text)
            source = "keywords"
        if task == "fit" and not session.files:
            decision = RouteDecision(
                task="guidance",
                rationale=f"{source} chose fit but no file is uploaded; "
                          "asking for an upload")
        else:
            decision = RouteDecision(task=task, rationale=f"classified by {source}")
        session.log(f"[coordinator] route task={decision.task} "
                    f"({decision.rationale})")
        return decision

    def _classify_via_backend(self, text: str, session: SessionState) -> str | None:
        messages = [Message(role="system", content=prompts.ROUTING_PROMPT),
                    Message(role="user", content=text)]
        session.log("[coordinator] backend request: classify task")
        try:
            reply = self.backend.complete(messages, tools=None)
        except BackendError as exc:
            session.log(f"[coordinator] backend unavailable for routing: {exc}")
            return None
        label = reply.content.strip().lower()
        if label in ("guidance", "sld", "generate", "fit"):
            return label
        found = [(m.start(), m.group(0))
                 for m in re.finditer(r"\b(guidance|sld|generate|fit)\b", label)]
        if found:
            return sorted(found)[0][1]
        session.log(f"[coordinator] unparsable routing reply {label[:60]!r}")
        return None

    def _classify_via_keywords(self, text: str) -> str:
        lowered = text.lower()
        if any(w in lowered for w in _SLD_WORDS):
            return "sld"
        if any(w in lowered for w in _FIT_WORDS):
            return "fit"
        if (any(w in lowered for w in _GENERATE_WORDS)
                or any(name in lowered for name in self._model_names)):
            return "generate"
        return "guidance"

    # --- expert agent loop ---

    def run_agent(self, profile: AgentProfile, task_message: str,
                  session: SessionState) -> AgentReply:
        system = profile.system_prompt + "\n\n" + session.context_block()
        messages = [Message(role="system", content=system),
                    Message(role="user", content=task_message)]
        reply = AgentReply(final_text="", task=profile.name)
        last_content = ""
        for iteration in range(1, profile.max_tool_iterations + 1):
            session.log(f"[{profile.name}] backend request "
                        f"(iteration {iteration}/{profile.max_tool_iterations})")
            try:
                assistant = self.backend.complete(messages, list(profile.tools))
            except BackendError as exc:
                session.log(f"[{profile.name}] backend error: {exc}")
                reply.backend_failed = True
                reply.final_text = (f"The language-model backend failed: {exc}. "
                                    "Check the settings and try again.")
                return reply
            if assistant.content:
                last_content = assistant.content
            if not assistant.tool_calls:
                reply.final_text = assistant.content
                return reply
            messages.append(assistant)
            for call in assistant.tool_calls:
                result = self.execute_tool(call, session, profile)
                reply.tool_trace.append((call, result))
                if result.ok and result.payload and "plot_id" in result.payload:
                    reply.plot_ids.append(result.payload["plot_id"])
                messages.append(Message(role="tool", content=result.content_json(),
                                        tool_call_id=call.id))
        session.log(f"[{profile.name}] iteration limit reached "
                    f"({profile.max_tool_iterations})")
        reply.iteration_limited = True
        reply.final_text = ((last_content + "\n\n") if last_content else "") + \
            "[iteration limit reached before the agent finished]"
        return reply

    def execute_tool(self, call: ToolCall, session: SessionState,
                     profile: AgentProfile) -> ToolResult:
        session.log(f"[{profile.name}] tool_call {call.name} "
                    f"args={_compact(call.arguments)}")
        if call.name not in profile.tool_names():
            result = ToolResult(id=call.id, ok=False,
                                error=f"unknown tool {call.name!r} for the "
                                      f"{profile.name} agent")
        else:
            result = self.toolbox.execute(call, session)
        status = "ok" if result.ok else f"error: {result.error}"
        session.log(f"[{profile.name}] tool_result {call.name} {status}")
        return result

    # --- top-level turn ---

    def handle_user_turn(self, text: str, session: SessionState) -> AgentReply:
        session.touch()
        session.transcript.append(Message(role="user", content=text))
        decision = self.route(text, session)
        if decision.task == "guidance":
            upload_needed = "upload" in decision.rationale
            reply = AgentReply(final_text=prompts.guidance_text(upload_needed),
                               task="guidance")
            session.log("[coordinator] guidance reply issued")
        else:
            profile = self.profiles[decision.task]
            session.log(f"[coordinator] delegating to the {profile.name} agent")
            reply = self.run_agent(profile, text, session)
        session.transcript.append(Message(role="assistant",
                                          content=reply.final_text))
        session.touch()
        return reply


def _compact(doc: dict, limit: int = 160) -> str:
    text = repr(doc)
    return text if len(text) <= limit else text[:limit] + "..."
