"""HTTP wiring for the live session: four JSON endpoints plus optional static UI."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query

from xglearn.service import schemas
from xglearn.service.session import (
    InvalidLabelRequestError,
    LiveSession,
    SessionConfig,
    VersionConflictError,
)


def create_app(config: SessionConfig | None = None, ui_dir: str | None = None) -> FastAPI:
    session = LiveSession(config)
    app = FastAPI(title="xglearn session service")
    app.state.session = session

    @app.get("/state", response_model=schemas.StateView)
    def get_state() -> schemas.StateView:
        return session.state_view()

    @app.post("/label", response_model=schemas.StateView)
    def post_label(request: schemas.LabelRequest) -> schemas.StateView:
        try:
            return session.submit(request)
        except VersionConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InvalidLabelRequestError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/reset", response_model=schemas.StateView)
    def post_reset(request: schemas.ResetRequest) -> schemas.StateView:
        return session.reset(request)

    @app.get("/surface", response_model=schemas.SurfaceView)
    def get_surface(
        resolution: int | None = Query(default=None, ge=2, le=512),
    ) -> schemas.SurfaceView:
        return session.surface_view(resolution)

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
