import json

from fastapi import APIRouter, HTTPException

from ..reporting import render_json, run_command
from ..schemas import RunConfig

router = APIRouter(tags=["analysis"])


def _run(command: str, payload: dict) -> dict:
    if payload.get("command", command) != command:
        raise HTTPException(status_code=422, detail=f"body command must be {command!r}")
    run = RunConfig(**{**payload, "command": command, "output_format": "json"})
    return json.loads(render_json(run_command(run)))


@router.post("/analyze")
def analyze(payload: dict):
    return _run("analyze", payload)


@router.post("/zone")
def zone(payload: dict):
    return _run("zone", payload)


@router.post("/simulate")
def simulate(payload: dict):
    return _run("simulate", payload)


@router.post("/calibrate")
def calibrate(payload: dict):
    return _run("calibrate", payload)
