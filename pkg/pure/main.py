from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from starlette.middleware.base import BaseHTTPMiddleware
from fastapi.responses import JSONResponse
from . import __version__
from .routers import uncertainty, evaluation, statistics, simulation
from .config import settings, LoguruLogConfig
from .middleware import log_middleware

description = """
Prediction-surface uncertainty for Monte-Carlo dropout object detections:
cluster the boxes of T runs, measure per-corner convex hull areas, evaluate
detections against ground truth and correlate uncertainty with IoU.
"""

LoguruLogConfig().configure()

app = FastAPI(
    title="PURE",
    description=description,
    version=__version__,
)

# Middleware logs
app.add_middleware(
    BaseHTTPMiddleware,
    dispatch=log_middleware
)

app.add_middleware(
    CORSMiddleware,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
    allow_origins=[settings.client_origin]
)

app.include_router(uncertainty.router, prefix="/v1/quantify", tags=["Uncertainty"])
app.include_router(evaluation.router, prefix="/v1/evaluate", tags=["Evaluation"])
app.include_router(statistics.router, prefix="/v1/correlate", tags=["Statistics"])
app.include_router(simulation.router, prefix="/v1/simulate", tags=["Simulation"])


@app.get("/", tags=["Root"], summary="Checks API status")
async def read_root():
    return JSONResponse(content={
        "status": "running!",
        "defaults": {
            "eps": settings.eps,
            "min_samples": settings.min_samples,
            "iou_threshold": settings.iou_threshold,
            "t_runs": settings.t_runs,
        },
    })

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "pure.main:app",
        host="0.0.0.0",
        port=8000,
        log_level=settings.logging_level.lower()
    )
