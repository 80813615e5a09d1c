"""
becorder HTTP service
JSON access to comparisons, rankings and closures of synthetic channels
"""

import logging
from contextlib import asynccontextmanager
from datetime import datetime

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from becorder import __version__
from becorder.config import settings
from becorder.errors import BecOrderError, InconsistencyError
from becorder.logs import configure_logging
from becorder.models import ErrorResponse
from becorder.routes import compare, rankings, relations

logger = logging.getLogger(__name__)


# Lifespan context manager for startup/shutdown
@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    logger.info("Starting becorder API %s", __version__)
    logger.info("Environment: %s", settings.ENVIRONMENT)
    logger.info(
        "Caps: L_MAX=%d RANK_MAX_LEN=%d SEED_MAX_LEN=%d INFLUENCE_MAX_LEVEL=%d",
        settings.L_MAX, settings.RANK_MAX_LEN, settings.SEED_MAX_LEN, settings.INFLUENCE_MAX_LEVEL,
    )
    yield
    logger.info("Shutting down becorder API")


app = FastAPI(
    title="becorder API",
    description="Exact comparisons of synthetic binary erasure channels",
    version=settings.API_VERSION,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/")
async def root():
    """Service information"""
    return {
        "message": "becorder API",
        "version": settings.API_VERSION,
        "status": "operational",
        "timestamp": datetime.utcnow().isoformat(),
        "endpoints": {
            "compare": "/api/v1/compare",
            "rankings": "/api/v1/rankings/{m}",
            "kendall": "/api/v1/rankings/{m}/kendall",
            "closure": "/api/v1/relations/closure",
            "influence": "/api/v1/relations/influence",
            "health": "/health",
            "docs": "/docs",
        },
    }


@app.get("/health")
async def health_check():
    """Health check endpoint for monitoring"""
    return {
        "status": "healthy",
        "timestamp": datetime.utcnow().isoformat(),
        "version": settings.API_VERSION,
        "environment": settings.ENVIRONMENT,
        "caps": {
            "l_max": settings.L_MAX,
            "rank_max_len": settings.RANK_MAX_LEN,
            "matrix_max_len": settings.MATRIX_MAX_LEN,
            "seed_max_len": settings.SEED_MAX_LEN,
            "closure_http_max_len": settings.CLOSURE_HTTP_MAX_LEN,
            "influence_max_level": settings.INFLUENCE_MAX_LEVEL,
            "precision": [settings.HLF_START_PRECISION, settings.HLF_MAX_PRECISION],
        },
    }


app.include_router(compare.router, prefix="/api/v1/compare", tags=["Compare"])
app.include_router(rankings.router, prefix="/api/v1/rankings", tags=["Rankings"])
app.include_router(relations.router, prefix="/api/v1/relations", tags=["Relations"])


@app.exception_handler(BecOrderError)
async def becorder_exception_handler(request, exc: BecOrderError):
    status_code = 500 if isinstance(exc, InconsistencyError) else 400
    if status_code == 500:
        logger.error("Oracle inconsistency: %s", exc)
    return JSONResponse(
        status_code=status_code,
        content=ErrorResponse(error=type(exc).__name__, message=str(exc)).model_dump(mode="json"),
    )


# Anything a route did not map to a BecOrderError
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    logger.error("Unhandled %s on %s", type(exc).__name__, request.url.path, exc_info=exc)
    message = f"{type(exc).__name__}: {exc}" if settings.DEBUG else "the computation failed unexpectedly"
    return JSONResponse(
        status_code=500,
        content=ErrorResponse(
            error="InternalError", message=message, details={"path": request.url.path}
        ).model_dump(mode="json"),
    )


@app.exception_handler(404)
async def not_found_handler(request: Request, exc):
    return JSONResponse(
        status_code=404,
        content=ErrorResponse(
            error="NotFound",
            message=f"no route at {request.url.path}; see / for compare, rankings and relations",
            details={"path": request.url.path},
        ).model_dump(mode="json"),
    )
