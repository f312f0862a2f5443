"""Bounded checking of concurrent data-structure libraries on weakly consistent replicated stores."""

from importlib import resources

__version__ = "0.1.0"

BENCHMARKS = ("treiber", "elimination_stack", "exchanger", "ms_2lock_queue",
              "ms_lockfree_queue", "hw_queue")


def benchmark_path(name: str):
    """Path of a bundled benchmark source (``name`` without the ``.rdsl`` suffix)."""
    return resources.files(__name__) / "benchmarks" / f"{name}.rdsl"


def load_benchmark(name: str):
    from .frontend import parse_library

    return parse_library(benchmark_path(name).read_text())
