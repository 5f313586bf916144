from typing import Any

__version__ = "0.3.0"


def __getattr__(name: str) -> Any:
    # Keep `import tempowalk` light; the engine pulls in numpy on first use.
    if name in _LAZY_EXPORTS:
        import importlib

        return getattr(importlib.import_module(_LAZY_EXPORTS[name]), name)
    msg = f"module 'tempowalk' has no attribute {name!r}"
    raise AttributeError(msg)


_LAZY_EXPORTS = {
    "EdgeBatch": "tempowalk.edge_store",
    "EdgeStore": "tempowalk.edge_store",
    "build_index": "tempowalk.edge_store",
    "WalkConfig": "tempowalk.walk_engine",
    "WalkSet": "tempowalk.walk_engine",
    "generate_walks": "tempowalk.walk_engine",
    "WindowConfig": "tempowalk.window_manager",
    "empty_window": "tempowalk.window_manager",
    "ingest_batch": "tempowalk.window_manager",
}

__all__ = ["__version__", *_LAZY_EXPORTS]
