"""
Run tracing: timed spans and acceptance scores recorded into the artifact bundle
"""

from functools import wraps
from typing import Callable, Any, Dict, List, Optional
import time

from .log_setup import get_logger

logger = get_logger("trace")


def trace_stage(name: str):
    """Decorator to time a pipeline stage and log success or failure"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            try:
                result = func(*args, **kwargs)
                logger.debug(
                    "stage finished",
                    extra={"stage": name, "success": True,
                           "duration_ms": (time.time() - start_time) * 1000},
                )
                return result
            except Exception as e:
                logger.warning(
                    "stage failed",
                    extra={"stage": name, "success": False, "error": str(e),
                           "duration_ms": (time.time() - start_time) * 1000},
                )
                raise
        return wrapper
    return decorator


class RunTracer:
    """Class-based tracer for one experiment run"""

    def __init__(self, run_id: Optional[str] = None):
        self.run_id = run_id
        self.trace: Optional[Dict[str, Any]] = None
        self.current_span: Optional[Dict[str, Any]] = None
        self.spans: List[Dict[str, Any]] = []
        self.scores: List[Dict[str, Any]] = []

    def start_trace(self, name: str, metadata: dict = None):
        """Start a new trace (root record)"""
        self.trace = {"name": name, "run_id": self.run_id, "metadata": metadata or {},
                      "start": time.time()}
        logger.info("trace started", extra={"trace": name, "run_id": self.run_id})
        return self

    def start_span(self, name: str, input_data: Any = None):
        """Start a nested span; an open span is closed first"""
        if self.current_span:
            self.end_span()
        self.current_span = {"name": name, "input": input_data, "start": time.time()}
        return self

    def end_span(self, output: Any = None):
        """End the current span"""
        if self.current_span:
            span = self.current_span
            span["duration_ms"] = (time.time() - span.pop("start")) * 1000
            span["output"] = output
            self.spans.append(span)
            logger.debug("span", extra={"span": span["name"], "duration_ms": span["duration_ms"]})
            self.current_span = None
        return self

    def log_score(self, name: str, value: float, comment: str = None):
        """Log a named score (acceptance metric)"""
        self.scores.append({"name": name, "value": value, "comment": comment})
        logger.info("score", extra={"score": name, "value": value})
        return self

    def end(self, output: Any = None) -> Dict[str, Any]:
        """End the trace and return its record"""
        self.end_span()
        record = dict(self.trace or {"name": "untitled", "start": time.time()})
        record["duration_ms"] = (time.time() - record.pop("start")) * 1000
        record["output"] = output
        record["spans"] = self.spans
        record["scores"] = self.scores
        logger.info("trace finished", extra={"trace": record["name"],
                                             "duration_ms": record["duration_ms"]})
        return record
