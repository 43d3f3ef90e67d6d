"""Canonical-key kernel selection: compiled extension when available, pure
Python fallback otherwise."""

try:
    from ._canon_cy import web_key  # noqa: F401
    BACKEND = "cython"
except ImportError:
    from ._canon_py import web_key  # noqa: F401
    BACKEND = "python"
