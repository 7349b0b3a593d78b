# File: app/settings.py

import os

import psutil
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _int_from_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


LOG_LEVEL = os.environ.get("CRSEQ_LOG_LEVEL", "WARNING").upper()
DATA_DIR = os.environ.get("CRSEQ_DATA_DIR", os.path.join(BASE_DIR, "data"))

DEFAULT_GUARD = _int_from_env("CRSEQ_GUARD", 10)
DEFAULT_TRIALS = _int_from_env("CRSEQ_TRIALS", 3)
DEFAULT_HEIGHT = _int_from_env("CRSEQ_HEIGHT", 50)
DEFAULT_MMAX = _int_from_env("CRSEQ_MMAX", 8)
DEFAULT_BUDGET = _int_from_env("CRSEQ_BUDGET", 200_000)
DEFAULT_SEED = 0

# 0 or unset means "use the physical core count"
THREADS = _int_from_env("CRSEQ_THREADS", 0)
if THREADS < 0:
    raise ValueError("CRSEQ_THREADS must be >= 0")


def worker_count(requested=None) -> int:
    """
    Number of search worker processes: the explicit request, capped by
    CRSEQ_THREADS when that is set, falling back to the physical core count.
    """
    available = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    count = requested if requested else available
    if THREADS:
        count = min(count, THREADS)
    return max(1, count)
