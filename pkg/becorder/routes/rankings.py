"""
Ranking endpoints
Total orders on {0,1}^m and the crossing counts between them
"""

from typing import List, Optional

from fastapi import APIRouter, Path, Query

from becorder.config import settings
from becorder.models import KendallReport, MethodSpec, RankingResponse
from becorder.utils.reports import Reports, default_ranking_methods

router = APIRouter()


@router.get("/{m}", response_model=RankingResponse)
def get_ranking(
    m: int = Path(..., ge=0, le=settings.RANK_MAX_LEN, description="String length"),
    method: str = Query("hlf", description="beta:spec, avg, hlf, at0 or at1"),
    precision: Optional[int] = Query(None, ge=1, le=4096, description="Interval precision in bits"),
):
    """{0,1}^m best first; ties go to the lexicographically smaller string"""
    return Reports.ranking(m, MethodSpec.parse(method), precision)


@router.get("/{m}/kendall", response_model=KendallReport)
def get_kendall(
    m: int = Path(..., ge=0, le=settings.RANK_MAX_LEN, description="String length"),
    method: Optional[List[str]] = Query(None, description="Repeat for each ranking; default two beta presets, avg and hlf"),
):
    """Pairwise Kendall tau distances"""
    return Reports.kendall(m, method or default_ranking_methods())
