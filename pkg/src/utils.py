import glob
import hashlib
import math
import os
from datetime import datetime, timedelta
from typing import Optional


def cleanup_old_logs(log_dir="logs", max_age_days=7, keep_min=10):
    """
    Clean up old scitrade log files.

    Args:
        log_dir (str): Directory containing log files
        max_age_days (int): Maximum age of log files in days
        keep_min (int): Minimum number of log files to keep regardless of age

    Returns:
        list: paths that were removed
    """
    removed = []
    if not log_dir or not os.path.isdir(log_dir):
        return removed

    log_files = glob.glob(os.path.join(log_dir, "scitrade_*.log"))
    # Newest first; the first keep_min are never touched
    log_files.sort(key=os.path.getmtime, reverse=True)

    cutoff_date = datetime.now() - timedelta(days=max_age_days)
    for log_file in log_files[keep_min:]:
        mod_time = datetime.fromtimestamp(os.path.getmtime(log_file))
        if mod_time < cutoff_date:
            try:
                os.remove(log_file)
                removed.append(log_file)
            except OSError:
                continue
    return removed


def file_digest(path: str, algorithm: str = "sha256") -> str:
    """Hex digest of a file's bytes."""
    digest = hashlib.new(algorithm)
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return f"{algorithm}:{digest.hexdigest()}"


def sig6(value: Optional[float]) -> Optional[float]:
    """Round a float to 6 significant digits; None and non-finite pass through."""
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return value
    return float(f"{value:.6g}")
