import threading
import uuid
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, Optional


class JobStatus(str, Enum):
    PENDING = "pending"
    PROCESSING = "processing"
    COMPLETED = "completed"
    FAILED = "failed"


class JobManager:
    """
    Singleton in-memory registry of background sweep jobs.
    Bounded: once MAX_JOBS is reached the oldest job is evicted.
    """
    _instance = None
    _jobs: Dict[str, Dict[str, Any]] = {}
    _lock = threading.Lock()
    MAX_JOBS = 100

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(JobManager, cls).__new__(cls)
        return cls._instance

    @staticmethod
    def _now() -> str:
        return datetime.now(timezone.utc).isoformat()

    def create_job(self, params: Optional[Dict[str, Any]] = None) -> str:
        """Create a new job and return its ID."""
        job_id = str(uuid.uuid4())
        with self._lock:
            if len(self._jobs) >= self.MAX_JOBS:
                # dicts are insertion-ordered
                oldest_key = next(iter(self._jobs))
                del self._jobs[oldest_key]

            self._jobs[job_id] = {
                "id": job_id,
                "status": JobStatus.PENDING,
                "created_at": self._now(),
                "params": params or {},
                "result": None,
                "error": None,
            }
        return job_id

    def update_job(
        self,
        job_id: str,
        status: JobStatus,
        result: Optional[Dict[str, Any]] = None,
        error: Optional[str] = None,
    ) -> None:
        """Update job status and result; unknown (evicted) ids are ignored."""
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return
            job["status"] = status
            if result is not None:
                job["result"] = result
            if error:
                job["error"] = error
            job["updated_at"] = self._now()

    def get_job(self, job_id: str) -> Optional[Dict[str, Any]]:
        with self._lock:
            job = self._jobs.get(job_id)
            return dict(job) if job is not None else None

    def list_jobs(self) -> Dict[str, Dict[str, Any]]:
        """List all jobs (debug only)."""
        with self._lock:
            return dict(self._jobs)

    def clear(self) -> None:
        """Drop every job (tests)."""
        with self._lock:
            self._jobs.clear()


# Global instance
job_manager = JobManager()
