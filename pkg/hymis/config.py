import os
from typing import Optional

from dotenv import load_dotenv


load_dotenv()


def _optional_float(name: str) -> Optional[float]:
    raw = os.getenv(name, "").strip()
    if not raw:
        return None
    return float(raw)


class Settings:
    def __init__(self) -> None:
        self.threads = int(os.getenv("HYMIS_THREADS", str(os.cpu_count() or 1)))
        self.time_limit = _optional_float("HYMIS_TIME_LIMIT")

        self.exact_max_vertices = int(os.getenv("HYMIS_EXACT_MAX_VERTICES", "64"))
        self.exact_time_limit = _optional_float("HYMIS_EXACT_TIME_LIMIT")

        self.service_url = os.getenv("HYMIS_SERVICE_URL", "http://localhost:8000").rstrip("/")
        self.stats_csv = os.getenv("HYMIS_STATS_CSV", "stats.csv")
        self.request_timeout_seconds = float(os.getenv("REQUEST_TIMEOUT_SECONDS", "10"))
        self.request_retries = int(os.getenv("REQUEST_RETRIES", "2"))

        self.log_level = os.getenv("LOG_LEVEL", "INFO")


settings = Settings()
