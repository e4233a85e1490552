"""
Logging module for ELICITCHECK
Run logs for triage of checks, constructions and calibration sweeps
"""

import logging
import sys
import threading
import time
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, List, Optional

LOG_PREFIX = "elicitcheck_"
DEFAULT_LOG_DIR = "/tmp/elicitcheck_logs"

DETAILED = "%(asctime)s - %(name)s - %(levelname)s - %(module)s.%(funcName)s:%(lineno)d - %(message)s"
BRIEF = "%(levelname)s: %(message)s"


def _coords(p: Any) -> List[float]:
    return p.to_list() if hasattr(p, "to_list") else [float(x) for x in p]


class ElicitLogger:
    """Run logger: a detailed log and an errors-only log per run, warnings on stderr

    stdout is never touched; the CLI writes JSON and CSV there.
    """

    def __init__(self, log_dir: str = DEFAULT_LOG_DIR, log_level: str = "INFO"):
        self.log_dir = Path(log_dir)
        self.log_level = getattr(logging, log_level.upper(), logging.INFO)
        self.run_stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.logger = self._setup_logger()

    def _file_handler(self, name: str, level: int) -> logging.Handler:
        handler = logging.FileHandler(self.log_dir / name, mode="a", encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(DETAILED))
        return handler

    def _setup_logger(self) -> logging.Logger:
        logger = logging.getLogger("elicitcheck")
        logger.setLevel(self.log_level)
        logger.handlers.clear()
        logger.propagate = False

        console = logging.StreamHandler(sys.stderr)
        console.setLevel(max(self.log_level, logging.WARNING))
        console.setFormatter(logging.Formatter(BRIEF))
        logger.addHandler(console)

        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
        except OSError:
            # read-only environments keep the console handler only
            return logger
        logger.addHandler(self._file_handler(f"{LOG_PREFIX}{self.run_stamp}.log", self.log_level))
        logger.addHandler(self._file_handler(f"{LOG_PREFIX}errors_{self.run_stamp}.log", logging.ERROR))
        return logger

    def log_run_info(self):
        """Interpreter, numeric stack and host"""
        import platform

        import numpy
        import psutil
        import scipy

        memory_gb = psutil.virtual_memory().total / (1024**3)
        self.logger.info("=== Run Information ===")
        self.logger.info(f"Platform: {platform.platform()}, Python {platform.python_version()}")
        self.logger.info(f"NumPy {numpy.__version__}, SciPy {scipy.__version__}")
        self.logger.info(f"CPU Cores: {psutil.cpu_count()}, Memory Total: {memory_gb:.2f} GB")

    def log_verdict(self, verdict: Any):
        self.logger.info(
            f"{verdict.claim} verdict: {verdict.status} "
            f"(resolution {verdict.resolution:.4g}, {verdict.entries_checked} reports)"
        )
        cert = verdict.certificate
        if cert is None:
            return
        self.logger.debug(f"  report u = {list(cert.u)}")
        for corner, gammas in zip(cert.corners, cert.corner_gammas):
            self.logger.debug(f"  corner {_coords(corner)} -> gamma {sorted(gammas)}")

    def log_probe(self, probe: Any):
        p = [round(x, 6) for x in _coords(probe.p)]
        self.logger.debug(
            f"probe p={p} gamma={sorted(probe.gamma)} opt={probe.opt_value:.10g} "
            f"restricted={probe.restricted_value:.10g} gap={probe.gap:.3g} violated={probe.violated}"
        )

    def log_construction(self, enumeration: Any, betas: Any, knots: Any):
        self.logger.info(f"Constructed 1-d surrogate for enumeration {list(enumeration)}")
        self.logger.debug(f"  scalings beta = {list(betas)}, knots = {list(knots)}")

    def log_error(self, error: Exception, context: str = ""):
        """Error line plus traceback; lands in both log files"""
        self.logger.error(f"{context or 'run'} failed: {type(error).__name__}: {error}")
        self.logger.error(traceback.format_exc())

    def log_warning(self, message: str):
        self.logger.warning(message)

    def log_info(self, message: str):
        self.logger.info(message)

    def log_debug(self, message: str):
        self.logger.debug(message)

    def get_log_files(self) -> List[str]:
        if not self.log_dir.is_dir():
            return []
        return sorted(str(f) for f in self.log_dir.glob(f"{LOG_PREFIX}*.log"))

    def cleanup_old_logs(self, days: int = 7):
        cutoff = time.time() - days * 86400
        for path in self.log_dir.glob(f"{LOG_PREFIX}*.log") if self.log_dir.is_dir() else ():
            if path.stat().st_mtime >= cutoff:
                continue
            try:
                path.unlink()
                self.logger.info(f"Removed old log file {path}")
            except OSError as e:
                self.logger.error(f"Failed to remove log file {path}: {e}")


# Global logger instance
_logger_instance: Optional[ElicitLogger] = None
_lock = threading.Lock()


def get_logger(log_dir: str = DEFAULT_LOG_DIR, log_level: str = "INFO") -> ElicitLogger:
    """Get or create the global logger instance"""
    global _logger_instance

    with _lock:
        if _logger_instance is None:
            _logger_instance = ElicitLogger(log_dir, log_level)
    return _logger_instance


def configure_logger(log_dir: str, log_level: str) -> ElicitLogger:
    """Replace the global logger; the CLI calls this once per run"""
    global _logger_instance

    with _lock:
        _logger_instance = ElicitLogger(log_dir, log_level)
    return _logger_instance


def log_run_info():
    get_logger().log_run_info()


def log_error(error: Exception, context: str = ""):
    get_logger().log_error(error, context)


def log_info(message: str):
    get_logger().log_info(message)


def log_warning(message: str):
    get_logger().log_warning(message)


def log_debug(message: str):
    get_logger().log_debug(message)
