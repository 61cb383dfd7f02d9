import json
from typing import List, Optional

from fastapi import APIRouter, HTTPException, Query

from .. import config
from ..reporting import cmd_figure1, cmd_table1, render_json

router = APIRouter(tags=["tables"])


@router.get("/table1")
def table1(
    alphas: Optional[List[float]] = Query(None),
    c: float = config.DEFAULT_C,
    tau: float = config.DEFAULT_TAU,
    sigma: float = config.DEFAULT_SIGMA,
    quote_z: bool = False,
):
    report = cmd_table1(alphas or config.TABLE1_ALPHAS, c=c, tau=tau, sigma=sigma, quote_z=quote_z)
    return json.loads(render_json(report))


@router.get("/figure1/{panel}")
def figure1(panel: str, grid: Optional[str] = None, c: float = config.DEFAULT_C, quote_z: bool = False):
    if panel not in ("A", "B"):
        raise HTTPException(status_code=404, detail="Panel not found")
    return json.loads(render_json(cmd_figure1(panel, grid, c=c, quote_z=quote_z)))
