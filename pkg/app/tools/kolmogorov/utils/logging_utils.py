"""Logging utilities for the monotone Kolmogorov toolkit."""

import json
import logging
import os
import sys
import time
from datetime import datetime
from typing import Dict, Any, Optional

import psutil

from config.parameter_manager import default_manager

# Package logger; library modules log through children of it
logger = logging.getLogger('app')
errorLogger = logging.getLogger('error')


def setupLogging(level: Optional[str] = None, logsDir: Optional[str] = None) -> None:
    """Set up logging configuration.

    Console output goes to stderr. File handlers are only attached when a logs
    directory is configured, either here or under "logging" in parameters.json.
    """
    try:
        settings = default_manager.get_category_parameters('logging')
        level = (level or settings.get('level') or 'WARNING').upper()
        logsDir = logsDir or settings.get('logs_dir')
        formatter = logging.Formatter(settings.get('format') or '%(asctime)s - %(levelname)s - %(message)s')

        # Configure package logger
        logger.setLevel(logging.DEBUG)
        errorLogger.setLevel(logging.ERROR)
        for target in (logger, errorLogger):
            for handler in list(target.handlers):
                target.removeHandler(handler)

        if logsDir:
            # Create logs directory if it doesn't exist
            os.makedirs(logsDir, exist_ok=True)

            debugHandler = logging.FileHandler(os.path.join(logsDir, 'debug.log'))
            debugHandler.setLevel(logging.DEBUG)
            debugHandler.setFormatter(formatter)
            logger.addHandler(debugHandler)

            errorHandler = logging.FileHandler(os.path.join(logsDir, 'error.log'))
            errorHandler.setLevel(logging.ERROR)
            errorHandler.setFormatter(formatter)
            errorLogger.addHandler(errorHandler)

        # Console handler on the package logger; the error logger only feeds error.log
        consoleHandler = logging.StreamHandler()
        consoleHandler.setLevel(getattr(logging, level, logging.WARNING))
        consoleHandler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
        logger.addHandler(consoleHandler)

        errorLogger.propagate = False
        if not errorLogger.handlers:
            errorLogger.addHandler(logging.NullHandler())

    except Exception as e:
        print(f"Error setting up logging: {str(e)}", file=sys.stderr)
        raise


def logCalculationResult(params: Dict[str, Any], result: Dict[str, Any]) -> None:
    """Log calculation parameters and results."""
    try:
        values = [
            datetime.now().isoformat(),
            json.dumps(params, default=str),
            json.dumps(result, default=str)
        ]
        logger.debug(','.join(values))

    except Exception as e:
        logger.error(f"Error logging calculation result: {str(e)}")


def logDebug(level: str, message: str, runId: Optional[str] = None) -> None:
    """Log a message with optional run ID context."""
    try:
        if runId:
            message = f"[Run {runId}] {message}"

        if level.upper() == 'DEBUG':
            logger.debug(message)
        elif level.upper() == 'INFO':
            logger.info(message)
        elif level.upper() == 'WARNING':
            logger.warning(message)
        elif level.upper() == 'ERROR':
            logger.error(message)
            errorLogger.error(message)
        else:
            logger.debug(message)

    except Exception as e:
        logger.error(f"Error logging debug message: {str(e)}")


def logSolveStart(runId: str, kind: str, params: Dict[str, Any]) -> float:
    """Log the start of a solve and return its start time."""
    try:
        logData = {
            'runId': runId,
            'kind': kind,
            'startTime': datetime.now().isoformat(),
            'params': params
        }
        logDebug('INFO', f"Starting {kind}", runId)
        logDebug('DEBUG', f"Parameters: {json.dumps(logData, default=str)}", runId)

    except Exception as e:
        logger.error(f"Error logging solve start: {str(e)}")
    return time.perf_counter()


def logSolveEnd(runId: str, kind: str, started: float, outcome: Dict[str, Any]) -> None:
    """Log the end of a solve with its outcome."""
    try:
        duration = time.perf_counter() - started
        logData = {
            'runId': runId,
            'endTime': datetime.now().isoformat(),
            'duration': duration,
            'outcome': outcome
        }
        logDebug('INFO', f"{kind} completed in {duration:.3f}s", runId)
        logDebug('DEBUG', f"Results: {json.dumps(logData, default=str)}", runId)

    except Exception as e:
        logger.error(f"Error logging solve end: {str(e)}")


def logSolveError(runId: str, errorMsg: str, phase: str = 'unknown') -> None:
    """Log a solve error with context."""
    try:
        logDebug('ERROR', f"Error in phase {phase}: {errorMsg}", runId)

    except Exception as e:
        logger.error(f"Error logging solve error: {str(e)}")


def logResourceUsage(runId: str, phase: str) -> None:
    """Log memory and CPU time of the current process for a phase."""
    try:
        process = psutil.Process()
        cpu = process.cpu_times()
        logData = {
            'runId': runId,
            'timestamp': datetime.now().isoformat(),
            'phase': phase,
            'memoryUsageMB': process.memory_info().rss / (1024 * 1024),
            'cpuTimeSeconds': cpu.user + cpu.system
        }
        logDebug('DEBUG', f"Resource usage in {phase}: {json.dumps(logData)}", runId)

    except Exception as e:
        logger.error(f"Error logging resource usage: {str(e)}")
