"""FastAPI service exposing the analysis pipeline over HTTP.

Grammar problems (syntax errors, reserved symbols, non-reduced grammars) map
to 400 with a structured error body; malformed requests are FastAPI's usual
422.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..automata import to_dot
from ..engine import ConflictedTableError
from ..grammar import GrammarError
from . import ops
from .schemas import (
    AutomatonRequest,
    AutomatonResponse,
    CheckResponse,
    ClassifyResponse,
    ErrorResponse,
    FirstFollowResponse,
    GrammarRequest,
    ParseRequest,
    ParseResponse,
    TableRequest,
    TableResponse,
)

app = FastAPI(
    title="lrkit",
    version=__version__,
    description="SLR(1), canonical LR(1), and LALR(1) table construction and parsing",
)


@app.exception_handler(GrammarError)
async def grammar_error_handler(_request: Request, exc: GrammarError) -> JSONResponse:
    body = ErrorResponse(error=str(exc), line=exc.line, column=exc.column)
    return JSONResponse(status_code=400, content=body.model_dump())


@app.exception_handler(ConflictedTableError)
async def conflicted_table_handler(_request: Request, exc: ConflictedTableError) -> JSONResponse:
    return JSONResponse(status_code=400, content=ErrorResponse(error=str(exc)).model_dump())


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=CheckResponse)
def check(req: GrammarRequest) -> CheckResponse:
    g, useless = ops.check(req.grammar)
    return CheckResponse.from_core(g, useless)


@app.post("/first-follow", response_model=FirstFollowResponse)
def first_follow(req: GrammarRequest) -> FirstFollowResponse:
    return FirstFollowResponse.from_core(ops.first_follow(req.grammar))


@app.post("/automaton", response_model=AutomatonResponse, response_model_exclude_none=True)
def automaton(req: AutomatonRequest) -> AutomatonResponse:
    built = ops.build(req.grammar, req.method)
    dot = to_dot(built.automaton) if req.include_dot else None
    return AutomatonResponse.from_core(built, dot=dot)


@app.post("/table", response_model=TableResponse)
def table(req: TableRequest) -> TableResponse:
    return TableResponse.from_core(ops.build(req.grammar, req.method).table)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: GrammarRequest) -> ClassifyResponse:
    return ClassifyResponse.from_core(ops.classify(req.grammar))


@app.post("/parse", response_model=ParseResponse, response_model_exclude_none=True)
def parse(req: ParseRequest) -> ParseResponse:
    built, _tokens, result = ops.parse_input(req.grammar, req.method, req.input, trace=req.trace)
    return ParseResponse.from_core(built, result, with_trace=req.trace)
