from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from .errors import ConvergenceError, ParadoxError
from .routers import analysis, tables

app = FastAPI(title="Jeffreys-Lindley Paradox - Reports API")

app.include_router(tables.router)
app.include_router(analysis.router)


# ----------------------------
# Errors
# ----------------------------
@app.exception_handler(ParadoxError)
def paradox_error(request: Request, exc: ParadoxError):
    status = 500 if isinstance(exc, ConvergenceError) else 422
    return JSONResponse(status_code=status, content={"detail": exc.to_dict()})


@app.exception_handler(ValidationError)
def invalid_settings(request: Request, exc: ValidationError):
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first["loc"])
    return JSONResponse(status_code=422, content={"detail": f"invalid value for {where}: {first['msg']}"})


# ----------------------------
# Health
# ----------------------------
@app.get("/health")
def health():
    return {"status": "ok"}
