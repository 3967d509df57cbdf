"""Agent orchestration: sessions, backends, tools, and the coordinator."""

from importlib import resources
from pathlib import Path

from .backends import BackendError, ChatBackend, OpenRouterBackend, ScriptedBackend
from .orchestrator import AgentReply, Orchestrator, build_profiles
from .prompts import CANONICAL_PROMPTS, guidance_text
from .session import (
    AgentProfile,
    Message,
    RouteDecision,
    SessionState,
    Settings,
    StoredFile,
    ToolArgumentInvalid,
    ToolCall,
    ToolResult,
    ToolSpec,
)
from .tools import ALL_TOOLS, Toolbox

__all__ = [
    "ALL_TOOLS", "AgentProfile", "AgentReply", "BackendError",
    "CANONICAL_PROMPTS", "ChatBackend", "Message", "OpenRouterBackend",
    "Orchestrator", "RouteDecision", "ScriptedBackend", "SessionState",
    "Settings", "StoredFile", "ToolArgumentInvalid", "ToolCall", "ToolResult",
    "ToolSpec", "Toolbox", "build_profiles", "canonical_scenario_path",
    "guidance_text", "make_backend",
]


def canonical_scenario_path() -> Path:
    return Path(str(resources.files("saskit.agents").joinpath(
        "scenarios/canonical.json")))


def make_backend(settings: Settings) -> ChatBackend:
    """Backend selected by the session settings."""
    if settings.backend == "scripted":
        path = settings.scenario_path or canonical_scenario_path()
        return ScriptedBackend(path)
    return OpenRouterBackend(endpoint=settings.endpoint, model=settings.model,
                             api_key=settings.api_key)
