import logging
import sys
import traceback
from datetime import datetime
from pathlib import Path

LOG_PREFIX = 'spingreen_'


def setup_logging(log_level='INFO', log_to_file=True, log_to_console=True, log_dir='logs'):
    """Setup logging configuration for spingreen runs"""

    log_dir = Path(log_dir)
    log_file = None
    if log_to_file:
        log_dir.mkdir(exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        log_file = log_dir / f'{LOG_PREFIX}{timestamp}.log'

    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    date_format = '%Y-%m-%d %H:%M:%S'

    level = getattr(logging, str(log_level).upper(), logging.INFO)

    # Clear any existing handlers
    logging.getLogger().handlers.clear()

    logging.basicConfig(
        level=level,
        format=log_format,
        datefmt=date_format,
        handlers=[]
    )

    logger = logging.getLogger()

    if log_to_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(log_format, date_format))
        logger.addHandler(file_handler)

    # Console goes to stderr so stdout stays clean for piped output
    if log_to_console:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter(log_format, date_format))
        logger.addHandler(console_handler)

    logger.info(f"Logging system initialized - Level: {log_level}, File: {log_file if log_to_file else 'None'}")

    return logger, log_file


def get_logger(name):
    """Get a logger with the specified name"""
    return logging.getLogger(name)


def log_exception(logger, message="An error occurred") -> str:
    """Log the active exception with full traceback; return a one-line summary.

    The summary names the exception type and the innermost frame, so a crash
    outside the SpinGreenError hierarchy is still identifiable from stderr alone.
    """
    logger.exception(message)
    error = sys.exc_info()[1]
    if error is None:
        return message
    summary = f"{message}: {type(error).__name__}: {error}"
    frames = traceback.extract_tb(error.__traceback__)
    if frames:
        last = frames[-1]
        summary += f" (at {Path(last.filename).name}:{last.lineno} in {last.name})"
    return summary


def log_system_info(logger):
    """Log interpreter and numerical stack versions"""
    import platform

    import numpy
    import pandas
    import scipy

    logger.info("=== System Information ===")
    logger.info(f"Python version: {sys.version}")
    logger.info(f"Platform: {platform.platform()}")
    logger.info(f"numpy {numpy.__version__}, scipy {scipy.__version__}, pandas {pandas.__version__}")
    logger.info(f"Float epsilon: {sys.float_info.epsilon}")
    logger.info("=========================")


def cleanup_old_logs(max_age_days=30, log_dir='logs'):
    """Clean up log files older than max_age_days"""
    log_dir = Path(log_dir)
    if not log_dir.exists():
        return 0

    import time
    current_time = time.time()
    max_age_seconds = max_age_days * 24 * 60 * 60

    cleaned_count = 0
    for log_file in log_dir.glob(f'{LOG_PREFIX}*.log'):
        file_age = current_time - log_file.stat().st_mtime
        if file_age > max_age_seconds:
            try:
                log_file.unlink()
                cleaned_count += 1
            except OSError:
                pass  # file in use

    if cleaned_count > 0:
        get_logger(__name__).info(f"Cleaned up {cleaned_count} old log files")
    return cleaned_count
