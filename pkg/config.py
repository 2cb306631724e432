import os

from dotenv import load_dotenv

load_dotenv()  # .env в корне репозитория, если есть; иначе только переменные окружения

VERSION = "1.0.0"

THREADS          = max(int(os.getenv("RAMA_THREADS", 1)), 1)
MAX_GROUP_ORDER  = int(os.getenv("RAMA_MAX_GROUP_ORDER", 10_000_000))
LANCZOS_MAX_ITER = int(os.getenv("RAMA_LANCZOS_MAX_ITER", 600))
ORACLE_MAX_NORM  = int(os.getenv("RAMA_ORACLE_MAX_NORM", 10**10))
RANDOM_RETRIES   = int(os.getenv("RAMA_RANDOM_RETRIES", 1000))
LOG_LEVEL        = os.getenv("RAMA_LOG_LEVEL", "INFO").upper()


# Директория для файлов графов.
# Приоритет: 1) env var RAMA_DATA_DIR  2) локальная ./data/
def _detect_data_dir() -> str:
    if explicit := os.getenv("RAMA_DATA_DIR"):
        return explicit
    return "data"


DATA_DIR = _detect_data_dir()


def resolve_threads(threads: int | None) -> int:
    """Значение --threads, если задано, иначе RAMA_THREADS."""
    if threads is None:
        return THREADS
    return max(int(threads), 1)
