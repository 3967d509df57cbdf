"""Small-angle scattering analysis toolkit.

Deterministic numeric tools (SLD calculation, form-factor models, bounded
Levenberg-Marquardt fitting, keyword documentation retrieval) wrapped in a
two-layer agent orchestration with a chat-style HTTP service and CLI.
"""

__version__ = "0.1.0"
