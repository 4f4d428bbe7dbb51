"""HTTP session service: the live human-in-the-loop counterpart of the batch engine."""

from xglearn.service.app import create_app
from xglearn.service.session import LiveSession, SessionConfig

__all__ = ["create_app", "LiveSession", "SessionConfig"]
