"""
Compare endpoints
One pair of strings under one method
"""

import logging
from typing import Optional

from fastapi import APIRouter, Query

from becorder.bitstrings import parse_bitstring
from becorder.models import CompareReport, MethodSpec
from becorder.utils.reports import Reports

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("", response_model=CompareReport)
def compare(
    alpha: str = Query(..., description="Bit string; '-' or 'eps' for the empty string"),
    gamma: str = Query(..., description="Bit string; '-' or 'eps' for the empty string"),
    method: str = Query("std", description="std, ber:n, fst, beta:spec, avg, hlf, at0, at1, rules:SETS"),
    enable_rsd: bool = Query(False, description="Admit the conjectured rule set D"),
    precision: Optional[int] = Query(None, ge=1, le=4096, description="Starting interval precision in bits"),
):
    """Outcome and evidence for alpha against gamma"""
    spec = MethodSpec.parse(method)
    logger.info("compare %s %s under %s", alpha, gamma, spec.label)
    return Reports.compare(parse_bitstring(alpha), parse_bitstring(gamma), spec, enable_rsd, precision)
