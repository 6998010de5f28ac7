"""Networked application layer: sessions, jobs, persistence, streaming."""

from .app import create_app
from .config import AppConfig
from .manager import SessionService
from .storage import DiskDocumentStore, DocumentStore, MemoryDocumentStore, open_store
from .subprocess_gen import SubprocessGenerator, SubprocessGeneratorPool

__all__ = [
    "AppConfig",
    "DiskDocumentStore",
    "DocumentStore",
    "MemoryDocumentStore",
    "SessionService",
    "SubprocessGenerator",
    "SubprocessGeneratorPool",
    "create_app",
    "open_store",
]
