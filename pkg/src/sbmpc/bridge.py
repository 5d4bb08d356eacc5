"""Websocket bridge between the bus and browser clients.

Serves the GUI bundle over HTTP and speaks JSON text frames over /ws. A
single forwarder thread watches the bus and broadcasts every new message to
every connected client, so all clients see identical streams. Inbound frames
(param updates and commands) are validated and republished onto the bus;
malformed frames get an error reply and the connection stays up.
"""

from __future__ import annotations

import asyncio
import json
import logging
import socket
import threading
import time
from pathlib import Path

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, HTMLResponse
from fastapi.staticfiles import StaticFiles

from sbmpc.bus import MessageBus
from sbmpc.messages import (
    TOPIC_COMMAND,
    TOPIC_PARAM,
    TOPIC_PLAN,
    TOPIC_STATE,
    TOPIC_STATS,
    TOPIC_TRACES,
    CommandMsg,
    parse_client_frame,
)
from sbmpc.registry import Registry
from sbmpc.schema import schema_of

log = logging.getLogger(__name__)

_FORWARDED_TOPICS = (TOPIC_STATE, TOPIC_PLAN, TOPIC_TRACES, TOPIC_STATS)

_PLACEHOLDER = """<!doctype html>
<html><head><title>sbmpc</title></head>
<body><h1>sbmpc bridge</h1>
<p>No GUI bundle found. Build the frontend (npm run build in frontend/) or
connect a websocket client to <code>/ws</code>.</p></body></html>"""


def find_free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def port_available(host: str, port: int) -> bool:
    with socket.socket() as sock:
        try:
            sock.bind((host, port))
            return True
        except OSError:
            return False


class WebsocketBridge:
    def __init__(
        self,
        bus: MessageBus,
        registry: Registry,
        task_name: str,
        optimizer_name: str = "ps",
        host: str = "127.0.0.1",
        port: int = 8008,
        gui_dir: str | Path | None = None,
    ):
        self.bus = bus
        self.registry = registry
        self.task_name = task_name
        self.optimizer_name = optimizer_name
        self.host = host
        self.port = port
        self.gui_dir = Path(gui_dir) if gui_dir else None
        self._clients: dict[int, asyncio.Queue] = {}
        self._clients_lock = threading.Lock()
        self._next_client = 0
        self._loop: asyncio.AbstractEventLoop | None = None
        self._stop = threading.Event()
        self._forwarder: threading.Thread | None = None
        self._server: uvicorn.Server | None = None
        self._server_thread: threading.Thread | None = None
        self.app = self._build_app()

    # -- schema frames -------------------------------------------------------

    def schema_frames(self) -> list[dict]:
        task_cfg, opt_cfg, ctrl_cfg = self.registry.resolve_config(self.task_name, self.optimizer_name)
        frames = [
            {"type": "schema", "scope": "task", "fields": schema_of(task_cfg).to_json()},
            {"type": "schema", "scope": "optimizer", "fields": schema_of(opt_cfg).to_json()},
            {"type": "schema", "scope": "controller", "fields": schema_of(ctrl_cfg).to_json()},
            {
                "type": "schema",
                "scope": "stack",
                "fields": [
                    {
                        "name": "task",
                        "kind": "dropdown",
                        "default": self.task_name,
                        "min": None,
                        "max": None,
                        "step": None,
                        "options": self.registry.task_names(),
                        "subfields": [],
                    },
                    {
                        "name": "optimizer",
                        "kind": "dropdown",
                        "default": self.optimizer_name,
                        "min": None,
                        "max": None,
                        "step": None,
                        "options": self.registry.optimizer_names(),
                        "subfields": [],
                    },
                ],
            },
        ]
        return frames

    # -- client plumbing ------------------------------------------------------

    def _broadcast(self, text: str):
        with self._clients_lock:
            queues = list(self._clients.values())
        for queue in queues:
            self._loop.call_soon_threadsafe(queue.put_nowait, text)

    def _forward_loop(self):
        cursors = {name: 0 for name in _FORWARDED_TOPICS}
        current = (self.task_name, self.optimizer_name)
        while not self._stop.is_set():
            news = self.bus.wait_any(cursors, timeout=0.1)
            if self._loop is None:
                continue
            for name, seq, msg in sorted(news, key=lambda item: item[1]):
                cursors[name] = seq
                self._broadcast(json.dumps(msg.to_json(seq)))
                if name == TOPIC_STATS and (msg.task, msg.optimizer) != current:
                    current = (msg.task, msg.optimizer)
                    self.task_name, self.optimizer_name = current
                    for frame in self.schema_frames():
                        self._broadcast(json.dumps(frame))

    # -- app ------------------------------------------------------------------

    def _build_app(self) -> FastAPI:
        app = FastAPI(title="sbmpc bridge")
        bridge = self

        @app.get("/", response_class=HTMLResponse)
        async def index():
            if bridge.gui_dir and (bridge.gui_dir / "index.html").exists():
                return FileResponse(bridge.gui_dir / "index.html")
            return HTMLResponse(_PLACEHOLDER)

        if self.gui_dir and self.gui_dir.exists():
            app.mount("/static", StaticFiles(directory=self.gui_dir), name="static")

        @app.websocket("/ws")
        async def ws_endpoint(ws: WebSocket):
            await ws.accept()
            queue: asyncio.Queue = asyncio.Queue()
            with bridge._clients_lock:
                client_id = bridge._next_client
                bridge._next_client += 1
                bridge._clients[client_id] = queue
            bridge._loop = asyncio.get_running_loop()
            try:
                for frame in bridge.schema_frames():
                    await ws.send_text(json.dumps(frame))
                sender = asyncio.create_task(bridge._send_loop(ws, queue))
                try:
                    await bridge._receive_loop(ws)
                finally:
                    sender.cancel()
            except WebSocketDisconnect:
                pass
            finally:
                with bridge._clients_lock:
                    bridge._clients.pop(client_id, None)

        return app

    async def _send_loop(self, ws: WebSocket, queue: asyncio.Queue):
        while True:
            text = await queue.get()
            await ws.send_text(text)

    async def _receive_loop(self, ws: WebSocket):
        while True:
            text = await ws.receive_text()
            try:
                data = json.loads(text)
                msg = parse_client_frame(data)
            except (json.JSONDecodeError, ValueError) as exc:
                await ws.send_text(json.dumps({"type": "error", "message": str(exc)}))
                continue
            topic = TOPIC_COMMAND if isinstance(msg, CommandMsg) else TOPIC_PARAM
            self.bus.publish(topic, msg)

    # -- lifecycle ---------------------------------------------------------------

    def start(self):
        if not port_available(self.host, self.port):
            raise OSError(f"port {self.port} on {self.host} is already in use")
        self._forwarder = threading.Thread(target=self._forward_loop, name="bridge-forwarder", daemon=True)
        self._forwarder.start()
        config = uvicorn.Config(self.app, host=self.host, port=self.port, log_level="warning")
        self._server = uvicorn.Server(config)
        self._server_thread = threading.Thread(target=self._server.run, name="bridge-server", daemon=True)
        self._server_thread.start()
        deadline = time.perf_counter() + 10.0
        while not self._server.started and time.perf_counter() < deadline:
            if not self._server_thread.is_alive():
                raise RuntimeError("bridge server failed to start")
            time.sleep(0.01)
        return self

    def stop(self):
        self._stop.set()
        if self._server is not None:
            self._server.should_exit = True
        if self._server_thread is not None and self._server_thread.is_alive():
            self._server_thread.join(timeout=5.0)
        if self._forwarder is not None and self._forwarder.is_alive():
            self._forwarder.join(timeout=5.0)

    @property
    def alive(self) -> bool:
        return self._server_thread is not None and self._server_thread.is_alive()

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"
