"""HTTP service wrapping the operations layer.

Every CLI operation is exposed as an endpoint returning the same table
(columns, rows, metadata) as JSON.  Parameter errors map to 422, numerical
failures to 500.

Run with ``lovelieb serve`` or ``uvicorn lovelieb.service:app``.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .core import SolverError
from .tables import (
    OutputTable,
    energy_table,
    fig_table,
    fit_table,
    infinite_table,
    solve_table,
    sweep_table,
)

app = FastAPI(title="lovelieb", version=__version__)


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[list[float]]
    metadata: dict[str, str]

    @staticmethod
    def from_table(table: OutputTable) -> "TableResponse":
        return TableResponse(columns=table.columns, rows=table.rows,
                             metadata=table.metadata)


class SolveRequest(BaseModel):
    sign: Literal["plus", "minus"]
    rhs: str = "one"
    alpha: float = Field(gt=0)
    method: Literal["nystrom", "elements", "neumann", "collocation",
                    "galerkin", "maclaurin"] = "nystrom"
    quad: Literal["trapezoid", "simpson", "gauss", "cc"] = "gauss"
    n: int = Field(default=129, ge=1)
    probes: int = Field(default=201, ge=2)
    regularize: bool = False
    parity: bool = False


class SweepRequest(BaseModel):
    sign: Literal["plus", "minus"]
    alphas: str | list[float]
    quad: Literal["trapezoid", "simpson", "gauss", "cc"] = "simpson"
    n: int = Field(default=1025, ge=3)
    regularize: bool = True
    log: bool = False


class EnergyRequest(BaseModel):
    model: Literal["lieb-liniger", "gaudin"]
    alphas: str | list[float]
    quad: Literal["trapezoid", "simpson", "gauss", "cc"] = "gauss"
    n: int = Field(default=128, ge=2)


class InfiniteRequest(BaseModel):
    sign: Literal["plus", "minus"]
    rhs: str
    alpha: float = Field(gt=0)
    xs: str | list[float]


class FitRequest(BaseModel):
    points: list[tuple[float, float]] = Field(min_length=4)


def _run(fn, *args, **kwargs) -> TableResponse:
    try:
        return TableResponse.from_table(fn(*args, **kwargs))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except SolverError as exc:
        raise HTTPException(status_code=500, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/solve", response_model=TableResponse)
def solve(req: SolveRequest):
    return _run(solve_table, req.sign, req.rhs, req.alpha, req.method,
                req.quad, req.n, req.probes, req.regularize, req.parity,
                command=f"POST /solve {req.model_dump_json()}")


@app.post("/sweep", response_model=TableResponse)
def sweep(req: SweepRequest):
    return _run(sweep_table, req.sign, req.alphas, req.quad, req.n,
                req.regularize, True, req.log,
                command=f"POST /sweep {req.model_dump_json()}")


@app.post("/energy", response_model=TableResponse)
def energy(req: EnergyRequest):
    return _run(energy_table, req.model, req.alphas, req.quad, req.n,
                command=f"POST /energy {req.model_dump_json()}")


@app.post("/infinite", response_model=TableResponse)
def infinite(req: InfiniteRequest):
    return _run(infinite_table, req.sign, req.rhs, req.alpha, req.xs,
                command=f"POST /infinite {req.model_dump_json()}")


@app.post("/fit", response_model=TableResponse)
def fit(req: FitRequest):
    return _run(fit_table, req.points, command="POST /fit")


@app.get("/figures/{fig_id}", response_model=TableResponse)
def figure(fig_id: int):
    if not 1 <= fig_id <= 4:
        raise HTTPException(status_code=422, detail="figure id must be 1..4")
    return _run(fig_table, fig_id)
