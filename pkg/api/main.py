"""
FastAPI Backend - REST API over the VQE harness

Endpoints:
    GET  /api/health                          - Health check
    GET  /api/hamiltonians/{qubits}/spectrum  - Exact spectrum of a builtin H2 Hamiltonian
    POST /api/sweeps                          - Start a sweep in the background (202 + job_id)
    GET  /api/jobs                            - Status of retained jobs
    GET  /api/jobs/{job_id}                   - Job status and, when done, its summaries
"""

import os
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from fastapi import BackgroundTasks, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from analysis.statistics import summarize_all
from core.config import get_settings
from core.errors import InvalidArgumentError, LabError
from core.job_manager import JobStatus, job_manager
from core.logging import get_harness_logger
from core.models import ExperimentConfig
from engine.hamiltonians import builtin_hamiltonian
from engine.pauli import diagonalize
from harness.sweep import run_sweep

# Load environment variables
load_dotenv()

API_VERSION = "1.0.0"

logger = get_harness_logger("api")

app = FastAPI(
    title="VQE Lab API",
    description="Simulated VQE ground-state searches for H2, run as background sweep jobs",
    version=API_VERSION,
)

allowed_origins = os.getenv("ALLOWED_ORIGINS", "").split(",")
if not allowed_origins or allowed_origins == [""]:
    allowed_origins = [
        "http://localhost:8000",
        "http://127.0.0.1:8000",
    ]

app.add_middleware(
    CORSMiddleware,
    allow_origins=allowed_origins,
    allow_credentials=True,
    allow_methods=["GET", "POST"],
    allow_headers=["Content-Type", "Authorization"],
)


class SweepResponse(BaseModel):
    success: bool
    job_id: str
    message: str
    status: str


class HealthResponse(BaseModel):
    status: str
    timestamp: str
    version: str
    max_qubits: int


class SpectrumResponse(BaseModel):
    num_qubits: int
    ground_energy: float
    eigenvalues: List[float]


def run_sweep_task(job_id: str, config: ExperimentConfig) -> None:
    """Background task: run the sweep and store summaries on the job."""
    try:
        job_manager.update_job(job_id, JobStatus.PROCESSING)
        records = run_sweep(config)

        ok = [r for r in records if r.succeeded]
        result: Dict[str, Any] = {
            "axes": config.axes(),
            "completed": len(ok),
            "failed": len(records) - len(ok),
            "summaries": [],
            "trials": [r.model_dump(mode="json") for r in records],
        }
        if not ok:
            job_manager.update_job(job_id, JobStatus.FAILED, result=result, error="All trials failed")
            return

        result["summaries"] = [s.model_dump(mode="json") for s in summarize_all(records)]
        job_manager.update_job(job_id, JobStatus.COMPLETED, result=result)

    except Exception as e:
        logger.error(f"Sweep job {job_id} failed: {e}")
        job_manager.update_job(job_id, JobStatus.FAILED, error=str(e))


@app.get("/api/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=API_VERSION,
        max_qubits=get_settings().max_qubits,
    )


@app.get("/api/hamiltonians/{qubits}/spectrum", response_model=SpectrumResponse)
async def hamiltonian_spectrum(qubits: int, decimals: Optional[int] = None):
    """Exact spectrum of the 2- or 4-qubit builtin Hamiltonian."""
    try:
        spectrum = diagonalize(builtin_hamiltonian(qubits))
    except InvalidArgumentError as e:
        raise HTTPException(status_code=404, detail=str(e))
    return SpectrumResponse(**spectrum.as_dict(decimals))


@app.post("/api/sweeps", status_code=202, response_model=SweepResponse)
async def start_sweep(config: ExperimentConfig, background_tasks: BackgroundTasks):
    """
    Start a sweep asynchronously.
    Returns immediately with a job_id.
    """
    job_id = job_manager.create_job(params=config.model_dump(mode="json"))
    background_tasks.add_task(run_sweep_task, job_id, config)

    return SweepResponse(
        success=True,
        job_id=job_id,
        status=JobStatus.PENDING.value,
        message=f"Sweep of {config.trials} trials started in background",
    )


@app.get("/api/jobs")
async def list_jobs():
    """Status of every retained job, oldest first, without results."""
    return [
        {"id": job_id, "status": job["status"], "error": job.get("error")}
        for job_id, job in job_manager.list_jobs().items()
    ]


@app.get("/api/jobs/{job_id}")
async def get_job_status(job_id: str):
    """Get status of a background job."""
    job = job_manager.get_job(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")
    return job


@app.exception_handler(LabError)
async def lab_error_handler(request, exc: LabError):
    return JSONResponse(status_code=400, content=exc.to_dict())


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
