"""Session language and command-line driver."""

from .dsl import DSLError, Session, format_session, parse_session
from .runner import exit_code, run_session, to_json, to_table

__all__ = ["DSLError", "Session", "format_session", "parse_session", "exit_code",
           "run_session", "to_json", "to_table"]
