"""Per-session event channel feeding the UI's event stream."""

from __future__ import annotations

import queue
import threading


class EventBus:
    """Fan-out of JSON documents to any number of session subscribers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._subscribers: dict[str, list[queue.Queue]] = {}

    def subscribe(self, session_id: str) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.setdefault(session_id, []).append(q)
        return q

    def unsubscribe(self, session_id: str, q: queue.Queue) -> None:
        with self._lock:
            listeners = self._subscribers.get(session_id, [])
            if q in listeners:
                listeners.remove(q)
            if not listeners:
                self._subscribers.pop(session_id, None)

    def publish(self, session_id: str, doc: dict) -> None:
        with self._lock:
            listeners = list(self._subscribers.get(session_id, []))
        for q in listeners:
            q.put(doc)
