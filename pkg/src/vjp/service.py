"""FastAPI service wrapping the pipeline.

One endpoint per command under /v1; the request carries the problem
document inline plus optional seed/tolerance overrides. Input errors map to
422, mathematical precondition failures to 409, numerical non-convergence
to 502; every error body carries the CLI exit code for parity between the
two surfaces.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .errors import InputError, NumericalError, VjpError
from .pipeline import COMMANDS
from .problem import SCHEMA_VERSION, load_problem

_HTTP_BY_EXIT = {2: 422, 3: 409, 4: 502}


class AnalyzeRequest(BaseModel):
    problem: dict
    seed: int | None = None
    tolerances: dict[str, float] = Field(default_factory=dict)


class AnalyzeResponse(BaseModel):
    report: dict


class ErrorBody(BaseModel):
    kind: str
    message: str
    exit_code: int


def create_app():
    app = FastAPI(
        title="vjp",
        version=__version__,
        description=(
            "Variational workbench: Euler-Lagrange data, Helmholtz checks,"
            " Noether currents, and cohomological obstruction classes over"
            " user-supplied atlases."
        ),
    )

    @app.exception_handler(VjpError)
    async def _vjp_error(_request, err: VjpError):
        status = _HTTP_BY_EXIT.get(err.exit_code, 409)
        body = ErrorBody(
            kind=type(err).__name__, message=str(err), exit_code=err.exit_code
        )
        return JSONResponse(status_code=status, content={"error": body.model_dump()})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "schema": SCHEMA_VERSION, "version": __version__}

    def _make_endpoint(name, fn):
        def endpoint(req: AnalyzeRequest) -> AnalyzeResponse:
            problem = load_problem(req.problem)
            report = fn(problem, seed=req.seed, tolerances=req.tolerances)
            return AnalyzeResponse(report=report)

        endpoint.__name__ = name.replace("-", "_")
        return endpoint

    for name, fn in COMMANDS.items():
        app.post(f"/v1/{name}", response_model=AnalyzeResponse)(
            _make_endpoint(name, fn)
        )
    return app


app = create_app()
