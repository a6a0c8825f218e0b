"""
Runtime configuration for local-smith.

Values come from the environment (optionally a .env file) and are overridden
by the input document and the command line, in that order.
"""

import os
from dataclasses import dataclass, field
from typing import List

from dotenv import load_dotenv

load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults, read once from the environment."""

    backend: str = "exact"
    tolerance: float = 1e-10
    k_max: int = 64
    sample_points: List[str] = field(default_factory=lambda: ["1/7", "-1/5", "2"])
    log_level: str = "WARNING"


def get_settings() -> Settings:
    """
    Build Settings from LOCAL_SMITH_* environment variables.

    Returns:
        Settings with environment overrides applied
    """
    samples = os.getenv("LOCAL_SMITH_SAMPLES")
    return Settings(
        backend=os.getenv("LOCAL_SMITH_BACKEND", "exact"),
        tolerance=float(os.getenv("LOCAL_SMITH_TOLERANCE", "1e-10")),
        k_max=int(os.getenv("LOCAL_SMITH_K_MAX", "64")),
        sample_points=(
            [s.strip() for s in samples.split(",") if s.strip()]
            if samples
            else ["1/7", "-1/5", "2"]
        ),
        log_level=os.getenv("LOCAL_SMITH_LOG_LEVEL", "WARNING").upper(),
    )
