"""In-process keep-last-1 message bus.

Each topic holds only its newest message plus a monotonically increasing
sequence number. Publishing never blocks on subscribers; subscribers poll (or
wait on) the latest value and may skip messages, but never observe them out of
order. One condition variable is shared bus-wide so a forwarder can wait on
any topic cheaply.
"""

from __future__ import annotations

import threading


class Topic:
    def __init__(self, name: str, cond: threading.Condition):
        self.name = name
        self._cond = cond
        self._seq = 0
        self._latest = None

    def publish(self, msg) -> int:
        with self._cond:
            self._seq += 1
            self._latest = msg
            self._cond.notify_all()
            return self._seq

    def read(self):
        """Latest (seq, msg) or None if nothing was ever published."""
        with self._cond:
            if self._seq == 0:
                return None
            return self._seq, self._latest

    def read_new(self, last_seq: int):
        """Latest (seq, msg) if newer than last_seq, else None."""
        with self._cond:
            if self._seq > last_seq:
                return self._seq, self._latest
            return None

    def wait_new(self, last_seq: int, timeout: float | None = None):
        """Block until a message newer than last_seq arrives (or timeout)."""
        with self._cond:
            if self._seq <= last_seq:
                self._cond.wait_for(lambda: self._seq > last_seq, timeout=timeout)
            if self._seq > last_seq:
                return self._seq, self._latest
            return None


class MessageBus:
    def __init__(self):
        self._cond = threading.Condition()
        self._topics: dict[str, Topic] = {}

    def topic(self, name: str) -> Topic:
        with self._cond:
            if name not in self._topics:
                self._topics[name] = Topic(name, self._cond)
            return self._topics[name]

    def publish(self, name: str, msg) -> int:
        return self.topic(name).publish(msg)

    def read(self, name: str):
        return self.topic(name).read()

    def read_new(self, name: str, last_seq: int):
        return self.topic(name).read_new(last_seq)

    def wait_any(self, cursors: dict[str, int], timeout: float | None = None) -> list:
        """Wait until any topic in `cursors` has seq > its cursor.

        Returns a list of (name, seq, msg) for every topic with news; empty on
        timeout. Does not advance the cursors.
        """
        topics = {name: self.topic(name) for name in cursors}

        def fresh():
            return [
                (name, t._seq, t._latest)
                for name, t in topics.items()
                if t._seq > cursors[name]
            ]

        with self._cond:
            got = fresh()
            if got:
                return got
            self._cond.wait_for(lambda: bool(fresh()), timeout=timeout)
            return fresh()
