"""HTTP inference sidecar for the speech screening pipeline."""

from .app import create_app
from .backends import StubBackend, TransformersBackend, make_backend
from .config import Settings

__version__ = "0.1.0"

__all__ = ["create_app", "StubBackend", "TransformersBackend", "make_backend",
           "Settings"]
