"""Shared fixtures: a real uvicorn server wrapper for service tests."""

from __future__ import annotations

import threading
import time
from contextlib import contextmanager

import pytest
import uvicorn


class ServerHandle:
    def __init__(self, server: uvicorn.Server, thread: threading.Thread, base_url: str):
        self.server = server
        self.thread = thread
        self.base_url = base_url


@contextmanager
def run_server(app):
    """Serve an ASGI app on an ephemeral port in a background thread."""
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 15.0
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("test server failed to start")
        if not thread.is_alive():
            raise RuntimeError("test server thread died during startup")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    try:
        yield ServerHandle(server, thread, f"http://127.0.0.1:{port}")
    finally:
        server.should_exit = True
        thread.join(timeout=15.0)


@pytest.fixture
def serve_app():
    """Factory fixture: serve_app(app) -> ServerHandle, torn down at test end."""
    exits = []

    def factory(app) -> ServerHandle:
        cm = run_server(app)
        handle = cm.__enter__()
        exits.append(cm)
        return handle

    yield factory
    for cm in reversed(exits):
        cm.__exit__(None, None, None)
