"""
Logging configuration for cn-groups using loguru
"""

import sys
import time
import functools
from pathlib import Path
from typing import Dict, Any, Optional
from loguru import logger
import yaml


CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}"


class LoggingManager:
    """Manages logging configuration and setup"""

    def __init__(self, config: Dict[str, Any]):
        self.config = config
        self._configured = False

    def setup_logging(self, logs_dir: Optional[Path] = None):
        """Setup loguru sinks; file sinks only when a logs directory is given"""
        if self._configured:
            return

        logger.remove()

        logger.add(
            sys.stderr,
            level=self.config.get("level", "INFO"),
            format=CONSOLE_FORMAT,
            colorize=True
        )

        if logs_dir is not None:
            logs_dir.mkdir(parents=True, exist_ok=True)

            logger.add(
                str(logs_dir / self.config.get("file", "cn_groups.log")),
                level=self.config.get("level", "INFO"),
                format=FILE_FORMAT,
                rotation=self.config.get("rotation", "10 MB"),
                retention=self.config.get("retention", "7 days"),
                compression="gz",
                serialize=False
            )

            logger.add(
                str(logs_dir / "errors.log"),
                level="ERROR",
                format=FILE_FORMAT,
                rotation="1 week",
                retention="30 days",
                compression="gz"
            )

            # Per-group classification records
            logger.add(
                str(logs_dir / "reports.log"),
                level="INFO",
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {message} | {extra}",
                filter=lambda record: "group_name" in record["extra"],
                rotation="10 MB",
                retention="30 days",
                compression="gz"
            )

        self._configured = True
        logger.debug("Logging system initialized")

    def log_system_info(self, bounds=None):
        """Log system information and the active resource bounds at startup"""
        import platform
        import psutil
        from cn_groups import __version__

        logger.info("=" * 50)
        logger.info(f"cn-groups {__version__}")
        logger.info("=" * 50)
        logger.info(f"Python version: {platform.python_version()}")
        logger.info(f"Platform: {platform.platform()}")
        logger.info(f"CPU count: {psutil.cpu_count()}")
        logger.info(f"Memory: {psutil.virtual_memory().total / 1024 / 1024 / 1024:.1f} GB")
        if bounds is not None:
            logger.info(f"Bounds: {bounds}")
        logger.info("=" * 50)


def setup_logging_from_config(config_path: Path, logs_dir: Optional[Path] = None,
                              level: Optional[str] = None) -> LoggingManager:
    """Setup logging from configuration file"""
    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}

        logging_config = dict(config.get('logging', {}))
        if level:
            logging_config["level"] = level
        logging_manager = LoggingManager(logging_config)
        logging_manager.setup_logging(logs_dir)

        return logging_manager

    except Exception as e:
        # Fallback logging setup
        logger.remove()
        logger.add(sys.stderr, level=level or "INFO")
        logger.error(f"Failed to setup logging from config: {e}")

        return LoggingManager({})


def log_performance_metrics(func):
    """Decorator to log performance metrics for functions"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.time()
        try:
            result = func(*args, **kwargs)
            duration = time.time() - start_time
            logger.debug(f"{func.__name__} completed in {duration:.3f}s")
            return result
        except Exception as e:
            duration = time.time() - start_time
            logger.error(f"{func.__name__} failed after {duration:.3f}s: {e}")
            raise

    return wrapper


class StructuredLogger:
    """Structured logging helper for consistent log formatting"""

    @staticmethod
    def log_chain_built(degree: int, order: int, base_length: int):
        """Log a finished stabilizer chain"""
        logger.debug(
            "Stabilizer chain built",
            event="chain_built",
            degree=degree,
            order=order,
            base_length=base_length
        )

    @staticmethod
    def log_classification(report: Dict[str, Any]):
        """Log a classification verdict bound to its group"""
        log_data = {
            "event": "classification",
            "group_order": report.get("group_order"),
            "case": report.get("case"),
            "fitting_order": report.get("fitting_order"),
        }
        bound = logger.bind(group_name=report.get("group_name"))
        if report.get("case") == "TheoremViolation":
            bound.error("Classification violated the case analysis", **log_data)
        else:
            bound.info("Classification completed", **log_data)

    @staticmethod
    def log_search(event_type: str, message: str, **extra_fields):
        """Log backtrack search events with structured data"""
        log_data = {
            "event": "search",
            "event_type": event_type,
            "message": message,
            **extra_fields
        }

        logger.debug("Search event", **log_data)

    @staticmethod
    def log_sweep_result(name: str, status: str, **extra_fields):
        """Log the outcome of one property sweep"""
        log_data = {
            "event": "sweep",
            "sweep": name,
            "status": status,
            **extra_fields
        }

        if status == "fail":
            logger.error("Sweep failed", **log_data)
        else:
            logger.debug("Sweep finished", **log_data)

