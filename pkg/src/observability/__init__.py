"""Observability Layer (logging and run tracing)"""

from .log_setup import configure_logging, get_logger
from .tracing import trace_stage, RunTracer

__all__ = ["configure_logging", "get_logger", "trace_stage", "RunTracer"]
