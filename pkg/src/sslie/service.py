"""HTTP service exposing the CLI commands.

    uvicorn sslie.service:app

POST /run/<command> with a JSON body mirroring the CLI flags returns the command's
output text and exit code. GET /catalog lists the embedded entries."""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from pydantic import BaseModel, model_validator

from . import catalog
from .commands import run


class SpecRef(BaseModel):
    spec: Optional[str] = None
    spec_text: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        if bool(self.spec) == bool(self.spec_text):
            raise ValueError("give exactly one of spec (catalog name) or spec_text")
        return self


class DimsRequest(SpecRef):
    levels: str = "6"
    restricted: bool = False


class HausdorffRequest(SpecRef):
    window: str = "2..6"
    relative: bool = True


class NucleusRequest(SpecRef):
    dim_cap: int = 64
    iter_cap: int = 64


class NilcertRequest(SpecRef):
    gens: Optional[str] = None
    ell: int = 1


class NilorderRequest(SpecRef):
    element: str
    level: str = "4"
    cap: int = 16


class PoincareRequest(SpecRef):
    cutoff: int = 20
    char: int = 0


class GroupRequest(SpecRef):
    action: str
    word: str
    vertex: Optional[str] = None
    cap: int = 20000


class VerifyRequest(BaseModel):
    entry: Optional[str] = None
    all: bool = False
    strict: bool = False


class RunResponse(BaseModel):
    output: str
    exit_code: int
    error: str = ""


app = FastAPI(title="sslie")


def _respond(command: str, req: BaseModel) -> RunResponse:
    res = run(command, req.model_dump(exclude_none=True))
    return RunResponse(output=res.output, exit_code=res.exit_code, error=res.error)


@app.get("/catalog")
def list_catalog() -> list:
    return sorted(catalog.ENTRIES)


@app.post("/run/dims", response_model=RunResponse)
def dims(req: DimsRequest):
    return _respond("dims", req)


@app.post("/run/hausdorff", response_model=RunResponse)
def hausdorff(req: HausdorffRequest):
    return _respond("hausdorff", req)


@app.post("/run/nucleus", response_model=RunResponse)
def nucleus(req: NucleusRequest):
    return _respond("nucleus", req)


@app.post("/run/nilcert", response_model=RunResponse)
def nilcert(req: NilcertRequest):
    return _respond("nilcert", req)


@app.post("/run/nilorder", response_model=RunResponse)
def nilorder(req: NilorderRequest):
    return _respond("nilorder", req)


@app.post("/run/poincare", response_model=RunResponse)
def poincare(req: PoincareRequest):
    return _respond("poincare", req)


@app.post("/run/group", response_model=RunResponse)
def group(req: GroupRequest):
    return _respond("group", req)


@app.post("/run/verify-paper", response_model=RunResponse)
def verify_paper(req: VerifyRequest):
    return _respond("verify-paper", req)
