"""HTTP service exposing generation, rendering, and estimation.

All handlers are stateless: every response is a pure function of the
request payload. JSON responses are rendered by the shared canonical
encoder, so they match CLI output byte for byte. Errors come back as
{"error": {"code", "message"}} with 400 for malformed payloads, 422 for
domain violations, and 500 (with no internals leaked) for anything
else.
"""

import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from .errors import DataError, ParameterError, PerceptaError
from .images import png_bytes
from .jsonutil import canonical_json
from .pipeline import run_compare, run_estimate, run_generate, run_render

BIND_ENV = "PERCEPTA_BIND"

_ERROR_CODES = (
    (DataError, 400, "schema"),
    (ParameterError, 422, "parameter"),
    (PerceptaError, 422, "domain"),
)


def _error_response(exc):
    for klass, status, code in _ERROR_CODES:
        if isinstance(exc, klass):
            return JSONResponse(status_code=status,
                                content={"error": {"code": code, "message": str(exc)}})
    return JSONResponse(status_code=500,
                        content={"error": {"code": "internal", "message": "internal error"}})


async def _payload(request):
    try:
        return await request.json()
    except ValueError as exc:
        raise DataError(f"request body is not valid JSON: {exc}") from exc


def _json(document):
    return Response(content=canonical_json(document), media_type="application/json")


def default_static_dir():
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(static_dir="auto"):
    app = FastAPI(title="percepta", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(PerceptaError)
    async def _handle_domain(request, exc):
        return _error_response(exc)

    @app.exception_handler(Exception)
    async def _handle_unexpected(request, exc):
        return _error_response(exc)

    @app.get("/api/health")
    async def health():
        return PlainTextResponse("ok")

    @app.post("/api/generate")
    async def generate(request: Request):
        return _json(run_generate(await _payload(request)))

    @app.post("/api/render")
    async def render(request: Request):
        image = run_render(await _payload(request))
        return Response(content=png_bytes(image), media_type="image/png")

    @app.post("/api/estimate")
    async def estimate(request: Request):
        return _json(run_estimate(await _payload(request)))

    @app.post("/api/compare")
    async def compare(request: Request):
        return _json(run_compare(await _payload(request)))

    if static_dir == "auto":
        static_dir = default_static_dir()
    if static_dir:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app


def parse_bind(bind):
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ParameterError(f"bind address must be HOST:PORT, got {bind!r}")
    return host, int(port)


def resolve_bind(bind):
    """PERCEPTA_BIND wins over the configured bind address."""
    return parse_bind(os.environ.get(BIND_ENV) or bind)


def serve_api(bind):
    import uvicorn

    host, port = resolve_bind(bind)
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
