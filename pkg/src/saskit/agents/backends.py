"""Chat-completions backends: OpenRouter-compatible HTTPS and scripted replay.

The scripted backend replays canned assistant messages keyed by matcher
rules, which keeps every agent path testable offline.  Reply content and
tool-call arguments may contain ``{{path}}`` placeholders; these resolve
against the latest tool-result payload in the conversation (dot paths, list
indices allowed) or against the session context inventory
(``{{latest_file_id}}``), so canned replies still carry values the tools
actually computed.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path
from typing import Any, Protocol

import httpx

from ..errors import SaskitError
from .session import Message, ToolCall, ToolSpec


class BackendError(SaskitError):
    pass


class ChatBackend(Protocol):
    name: str

    def complete(self, messages: list[Message],
                 tools: list[ToolSpec] | None = None) -> Message: ...


class OpenRouterBackend:
    """OpenAI-compatible chat completions over HTTPS."""

    name = "openrouter"

    def __init__(self, endpoint: str, model: str, api_key: str = "",
                 timeout: float = 120.0):
        self.endpoint = endpoint
        self.model = model
        self._api_key = api_key or os.environ.get("OPENROUTER_API_KEY", "")
        self.timeout = timeout

    def complete(self, messages: list[Message],
                 tools: list[ToolSpec] | None = None) -> Message:
        if not self._api_key:
            raise BackendError(
                "no API key configured (set it in settings or OPENROUTER_API_KEY)")
        body: dict[str, Any] = {
            "model": self.model,
            "messages": [m.to_wire() for m in messages],
        }
        if tools:
            body["tools"] = [t.to_openai() for t in tools]
            body["tool_choice"] = "auto"
        try:
            response = httpx.post(
                self.endpoint, json=body, timeout=self.timeout,
                headers={"Authorization": f"Bearer {self._api_key}"})
            response.raise_for_status()
            doc = response.json()
        except httpx.HTTPError as exc:
            raise BackendError(f"chat-completions request failed: {exc}") from exc
        except ValueError as exc:
            raise BackendError(f"backend returned invalid JSON: {exc}") from exc
        try:
            wire = doc["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed completion document: {doc!r}") from exc
        return _message_from_wire(wire)


def _message_from_wire(wire: dict) -> Message:
    calls = None
    if wire.get("tool_calls"):
        calls = []
        for i, c in enumerate(wire["tool_calls"]):
            fn = c.get("function", {})
            raw = fn.get("arguments", "{}")
            try:
                arguments = json.loads(raw) if isinstance(raw, str) else dict(raw)
            except ValueError as exc:
                raise BackendError(f"unparsable tool arguments: {raw!r}") from exc
            calls.append(ToolCall(id=c.get("id") or f"call_{i}",
                                  name=fn.get("name", ""), arguments=arguments))
    return Message(role="assistant", content=wire.get("content") or "",
                   tool_calls=calls)


_PLACEHOLDER_RE = re.compile(r"\{\{([a-zA-Z0-9_.]+)\}\}")
_FILE_ID_RE = re.compile(r"file_id=(\S+)")


class ScriptedBackend:
    """Deterministic replay of assistant messages keyed by matcher rules.

    Scenario document: ``{"rules": [{"name": ..., "match": {"user_contains":
    ..., "system_contains": ...}, "replies": [{"content": ...} |
    {"tool_calls": [{"name": ..., "arguments": {...}}]}], "repeat": bool}]}``.
    Each matching call consumes the rule's next reply; ``repeat`` cycles the
    queue instead of exhausting it.
    """

    name = "scripted"

    def __init__(self, scenario: dict | str | Path):
        if not isinstance(scenario, dict):
            scenario = json.loads(Path(scenario).read_text())
        self._rules = scenario.get("rules", [])
        self._cursors = [0] * len(self._rules)
        self._call_counter = 0

    def complete(self, messages: list[Message],
                 tools: list[ToolSpec] | None = None) -> Message:
        system_text = next((m.content for m in messages if m.role == "system"), "")
        user_text = next((m.content for m in reversed(messages)
                          if m.role == "user"), "")
        for idx, rule in enumerate(self._rules):
            match = rule.get("match", {})
            if not _contains(user_text, match.get("user_contains")):
                continue
            if not _contains(system_text, match.get("system_contains")):
                continue
            replies = rule.get("replies", [])
            cursor = self._cursors[idx]
            if cursor >= len(replies):
                if rule.get("repeat"):
                    cursor = 0
                else:
                    continue
            self._cursors[idx] = cursor + 1
            return self._render(replies[cursor], messages)
        raise BackendError(
            f"no scenario rule matched (user={user_text[:80]!r})")

    def _render(self, reply: dict, messages: list[Message]) -> Message:
        resolve, resolve_raw = _build_resolver(messages)
        calls = None
        if reply.get("tool_calls"):
            calls = []
            for c in reply["tool_calls"]:
                self._call_counter += 1
                calls.append(ToolCall(
                    id=f"call_{self._call_counter}",
                    name=c["name"],
                    arguments=_substitute(c.get("arguments", {}),
                                          resolve, resolve_raw)))
        content = _substitute(reply.get("content", ""), resolve, resolve_raw)
        return Message(role="assistant", content=content, tool_calls=calls)


def _contains(haystack: str, needle: str | None) -> bool:
    return needle is None or needle.lower() in haystack.lower()


def _build_resolver(messages: list[Message]):
    payload: dict = {}
    for m in messages:
        if m.role == "tool":
            try:
                doc = json.loads(m.content)
                if isinstance(doc, dict):
                    payload = doc
            except ValueError:
                pass
    file_ids = [match for m in messages
                for match in _FILE_ID_RE.findall(m.content or "")]

    def resolve_raw(path: str) -> Any:
        if path == "latest_file_id":
            return file_ids[-1] if file_ids else None
        node: Any = payload
        for part in path.split("."):
            if isinstance(node, dict) and part in node:
                node = node[part]
            elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
                node = node[int(part)]
            else:
                return None
        return node

    def resolve(path: str) -> str | None:
        node = resolve_raw(path)
        if node is None:
            return None
        if isinstance(node, float):
            return f"{node:.6g}"
        if isinstance(node, (dict, list)):
            return json.dumps(node)
        return str(node)

    return resolve, resolve_raw


def _substitute(value: Any, resolve, resolve_raw) -> Any:
    if isinstance(value, str):
        # a string that is exactly one placeholder keeps the value's type,
        # so computed numbers can feed follow-up tool-call arguments
        whole = _PLACEHOLDER_RE.fullmatch(value)
        if whole:
            raw = resolve_raw(whole.group(1))
            if raw is not None and not isinstance(raw, str):
                return raw

        def repl(match):
            got = resolve(match.group(1))
            return match.group(0) if got is None else got
        return _PLACEHOLDER_RE.sub(repl, value)
    if isinstance(value, dict):
        return {k: _substitute(v, resolve, resolve_raw) for k, v in value.items()}
    if isinstance(value, list):
        return [_substitute(v, resolve, resolve_raw) for v in value]
    return value
