"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when the
extension is missing (source checkout without a build) or when
``BOSONLAT_BACKEND=fallback`` is set.  Both expose the same functions
and the same per-trial random streams.
"""

from __future__ import annotations

import os

from . import fallback as _fallback

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

_BACKENDS = {"fallback": _fallback}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_env = os.environ.get("BOSONLAT_BACKEND", "").strip().lower()
if _env:
    if _env not in _BACKENDS:
        raise ImportError(
            f"BOSONLAT_BACKEND={_env!r} is not available; "
            f"choices: {sorted(_BACKENDS)}"
        )
    _active = _BACKENDS[_env]
else:
    _active = _compiled if _compiled is not None else _fallback


def active():
    """The module implementing the kernel contract."""
    return _active


def backend_name() -> str:
    return _active.NAME


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name: str):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; choices: {sorted(_BACKENDS)}"
        ) from None


def set_backend(name: str) -> None:
    """Switch the active backend (used by the benchmark harness)."""
    global _active
    _active = get_backend(name)
