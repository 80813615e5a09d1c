"""
Relation endpoints
Rule-set closures and last-bit influence tables
"""

from typing import Optional

from fastapi import APIRouter, Query

from becorder.config import settings
from becorder.models import ClosureReport, InfluenceReport
from becorder.utils.reports import Reports

router = APIRouter()


@router.get("/closure", response_model=ClosureReport)
def get_closure(
    rules: str = Query("ABCEF", description="Rule-set letters from ABCDEF"),
    max_len: int = Query(6, ge=0, le=settings.CLOSURE_HTTP_MAX_LEN, description="Longest string in the universe"),
    enable_rsd: bool = Query(False, description="Admit the conjectured rule set D"),
    limit: int = Query(50, ge=0, le=1000, description="Sample edges to return"),
):
    """Edge count, provenance counts and a sample of the closed relation"""
    return Reports.closure(rules, max_len, enable_rsd, limit)


@router.get("/influence", response_model=InfluenceReport)
def get_influence(
    max_level: int = Query(6, ge=0, le=settings.INFLUENCE_MAX_LEVEL, description="Deepest level"),
    precision: Optional[int] = Query(None, ge=1, le=4096, description="Interval precision in bits"),
    slope_from: int = Query(4, ge=0, description="First level of the slope fit"),
):
    """Influence of the last bit for every string up to max_level"""
    return Reports.influence(max_level, precision, slope_from)
