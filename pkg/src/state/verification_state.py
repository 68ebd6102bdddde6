"""
Verification run state.

Suites may run on worker threads, so every access goes through the lock.
"""
from datetime import datetime
from threading import Lock
from typing import Any, Dict, List, Optional

from utils.logger import logger


class VerificationState:
    """
    Thread-safe record of one invariant-corpus run: suites, case counts and
    failures with their reproducers.
    """

    def __init__(self):
        self._status: str = "idle"
        self._seed: Optional[int] = None
        self._suites: Dict[str, Dict[str, Any]] = {}
        self._failures: List[Dict[str, Any]] = []
        self._started_at: Optional[datetime] = None
        self._finished_at: Optional[datetime] = None
        self._lock = Lock()

    def start_run(self, seed: int) -> None:
        with self._lock:
            self._reset_state()
            self._status = "running"
            self._seed = seed
            self._started_at = datetime.now()

        logger.info(f"Verification run started: seed={seed}")

    def start_suite(self, name: str) -> None:
        with self._lock:
            self._suites[name] = {"status": "running", "cases": 0, "failures": 0}
        logger.debug(f"Suite started: {name}")

    def record_case(self, suite: str, count: int = 1) -> None:
        with self._lock:
            self._suites.setdefault(suite, {"status": "running", "cases": 0, "failures": 0})
            self._suites[suite]["cases"] += count

    def record_failure(self, suite: str, message: str, reproducer: Optional[Dict[str, Any]] = None) -> None:
        with self._lock:
            self._suites.setdefault(suite, {"status": "running", "cases": 0, "failures": 0})
            self._suites[suite]["failures"] += 1
            self._failures.append({"suite": suite, "message": message, "reproducer": reproducer})

        logger.warning(f"[{suite}] {message}")

    def complete_suite(self, name: str) -> None:
        with self._lock:
            suite = self._suites.get(name)
            if suite is None:
                return
            suite["status"] = "failed" if suite["failures"] else "passed"
        logger.info(f"Suite {name}: {suite['status']} ({suite['cases']} cases)")

    def complete_run(self) -> bool:
        with self._lock:
            passed = not self._failures
            self._status = "passed" if passed else "failed"
            self._finished_at = datetime.now()
        logger.info(f"Verification run {'passed' if passed else 'failed'}")
        return passed

    def get_status(self) -> str:
        with self._lock:
            return self._status

    def get_seed(self) -> Optional[int]:
        with self._lock:
            return self._seed

    def get_failures(self) -> List[Dict[str, Any]]:
        with self._lock:
            return [dict(f) for f in self._failures]

    def get_summary(self) -> Dict[str, Any]:
        with self._lock:
            elapsed = None
            if self._started_at and self._finished_at:
                elapsed = (self._finished_at - self._started_at).total_seconds()
            return {
                "status": self._status,
                "seed": self._seed,
                "suites": {name: dict(data) for name, data in self._suites.items()},
                "cases": sum(s["cases"] for s in self._suites.values()),
                "failures": len(self._failures),
                "elapsed_seconds": elapsed,
            }

    def is_active(self) -> bool:
        with self._lock:
            return self._status == "running"

    def _reset_state(self) -> None:
        self._status = "idle"
        self._seed = None
        self._suites = {}
        self._failures = []
        self._started_at = None
        self._finished_at = None


# Global singleton
verification_state = VerificationState()
