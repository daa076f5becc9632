"""Mission HTTP + WebSocket gateway.

One mission at a time (single drone); each mission appends to its own
EventLog and WebSocket clients replay from seq 0 before following live,
so a reconnecting observer never sees a gap.
"""

import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .bench import load_bundled_world, load_fixtures, load_tasks
from .default_skills import build_default_registry
from .errors import ConfigError, MiniSpecError
from .events import EventLog
from .llm import HTTPLLM, MockLLM
from .mission import MissionOptions, run_mission


@dataclass
class MissionRun:
    mission_id: str
    request: dict
    log: EventLog = field(default_factory=EventLog)
    ctl_out: list = field(default_factory=list)
    state_out: list = field(default_factory=list)
    terminal: threading.Event = field(default_factory=threading.Event)
    error: str = None

    @property
    def state(self):
        return self.state_out[0] if self.state_out else None

    def summary(self):
        out = {"mission_id": self.mission_id, "request": self.request,
               "terminal": self.terminal.is_set()}
        if self.state is not None:
            out.update(self.state.summary())
        if self.error:
            out["error"] = self.error
        return out


def default_client_factory():
    """Build the LLM client from MINISPEC_LLM / MINISPEC_FIXTURES."""
    mode = os.environ.get("MINISPEC_LLM", "mock")
    if mode == "mock":
        fixtures = load_fixtures(path=os.environ.get("MINISPEC_FIXTURES"))
        return MockLLM(fixtures["plans"],
                       rate_tps=fixtures.get("rate_tps", 20))
    if mode == "http":
        base = os.environ.get("MINISPEC_LLM_BASE_URL")
        if not base:
            raise ConfigError("MINISPEC_LLM=http requires "
                              "MINISPEC_LLM_BASE_URL")
        return HTTPLLM(base, model=os.environ.get("MINISPEC_LLM_MODEL",
                                                  "gpt-4"),
                       api_key=os.environ.get("MINISPEC_LLM_API_KEY", ""))
    raise ConfigError(f"MINISPEC_LLM must be mock or http, not {mode!r}")


def create_app(client_factory=None, ui_dir=None):
    client_factory = client_factory or default_client_factory
    app = FastAPI(title="minispec gateway")
    missions = {}
    lock = threading.Lock()

    def active_run():
        for run in missions.values():
            if not run.terminal.is_set():
                return run
        return None

    @app.get("/healthz")
    def healthz():
        return PlainTextResponse("ok")

    @app.get("/worlds")
    def worlds():
        return {"worlds": [{"id": t["world"], "task_id": t["id"],
                            "task": t["task"]} for t in load_tasks()]}

    @app.post("/missions", status_code=201)
    def start_mission(body: dict):
        task = (body or {}).get("task", "")
        world_id = (body or {}).get("world", "")
        opts = (body or {}).get("options", {}) or {}
        if not task or not world_id:
            return JSONResponse({"detail": "task and world are required"},
                                status_code=422)
        try:
            world = load_bundled_world(world_id)
        except (FileNotFoundError, MiniSpecError):
            return JSONResponse({"detail": f"unknown world {world_id!r}"},
                                status_code=404)
        with lock:
            if active_run() is not None:
                return JSONResponse(
                    {"detail": "a mission is already active"},
                    status_code=409)
            run = MissionRun(uuid.uuid4().hex[:12], dict(body))
            missions[run.mission_id] = run
        options = MissionOptions(
            stream=bool(opts.get("stream", True)),
            replan_limit=int(opts.get("replan_limit", 3)),
            rate_tps=opts.get("rate_tps"),
            pace=float(opts.get("pace", 0.0)))

        def work():
            try:
                run_mission(task, world, client_factory(),
                            build_default_registry(), options,
                            emit=run.log, ctl_out=run.ctl_out,
                            state_out=run.state_out)
            except Exception as exc:
                run.error = str(exc)
            finally:
                run.terminal.set()

        threading.Thread(target=work, daemon=True).start()
        return {"mission_id": run.mission_id}

    @app.get("/missions/{mission_id}")
    def get_mission(mission_id: str):
        run = missions.get(mission_id)
        if run is None:
            return JSONResponse({"detail": "unknown mission"},
                                status_code=404)
        return run.summary()

    @app.post("/missions/{mission_id}/abort", status_code=202)
    def abort_mission(mission_id: str):
        run = missions.get(mission_id)
        if run is None:
            return JSONResponse({"detail": "unknown mission"},
                                status_code=404)
        if run.terminal.is_set():
            return JSONResponse({"detail": "mission already terminal"},
                                status_code=409)
        deadline = time.monotonic() + 1.0
        while not run.ctl_out and time.monotonic() < deadline:
            time.sleep(0.005)
        if not run.ctl_out:
            return JSONResponse({"detail": "mission not started"},
                                status_code=409)
        run.ctl_out[0].abort()
        return {"status": "aborting"}

    @app.get("/missions/{mission_id}/report")
    def report(mission_id: str):
        run = missions.get(mission_id)
        if run is None:
            return JSONResponse({"detail": "unknown mission"},
                                status_code=404)
        if not run.terminal.is_set():
            return JSONResponse({"detail": "mission still running"},
                                status_code=409)
        state = run.state
        if state is None:
            return JSONResponse({"detail": run.error or "mission crashed"},
                                status_code=500)
        mode = "stream" if run.request.get("options", {}) \
            .get("stream", True) else "batch"
        return {"task": state.task, "world": state.world_id, "mode": mode,
                "success": state.success, "r_time": state.r_time_s,
                "c_time": state.c_time_s, "tokens": state.output_tokens}

    @app.websocket("/missions/{mission_id}/events")
    async def mission_events(ws: WebSocket, mission_id: str):
        import asyncio
        await ws.accept()
        run = missions.get(mission_id)
        if run is None:
            await ws.close(code=4404)
            return
        seq = 0
        try:
            while True:
                events = await asyncio.to_thread(run.log.wait_beyond,
                                                 seq, 0.1)
                for event in events:
                    await ws.send_text(event.to_json())
                    seq = event.seq + 1
                if run.terminal.is_set() and seq >= len(run.log):
                    break
            await ws.close()
        except WebSocketDisconnect:
            pass

    if ui_dir is None:
        ui_dir = os.environ.get("MINISPEC_UI", "frontend/dist")
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True),
                  name="ui")

    return app


def serve(host="127.0.0.1", port=8008, **kwargs):
    import uvicorn
    uvicorn.run(create_app(**kwargs), host=host, port=port)
