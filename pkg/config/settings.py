import logging
import os
from dataclasses import dataclass, asdict

from dotenv import load_dotenv


LOGGER = logging.getLogger(__name__)

load_dotenv()


def _env_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@dataclass
class Settings:
    # Solver settings
    eps_feas: float = 1e-8
    gap_tol: float = 1e-9
    max_iter: int = 200

    # Bisection / eigenvalue settings
    tol: float = 1e-6
    spectral_tol: float = 1e-10

    # Enumeration caps
    lift_cap: int = 20000
    product_cap: int = 1_000_000

    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from JSRKIT_* environment variables (a .env file is honoured)."""
        return cls(
            eps_feas=_env_float("JSRKIT_EPS_FEAS", "1e-8"),
            gap_tol=_env_float("JSRKIT_GAP_TOL", "1e-9"),
            max_iter=_env_int("JSRKIT_MAX_ITER", "200"),
            tol=_env_float("JSRKIT_TOL", "1e-6"),
            spectral_tol=_env_float("JSRKIT_SPECTRAL_TOL", "1e-10"),
            lift_cap=_env_int("JSRKIT_LIFT_CAP", "20000"),
            product_cap=_env_int("JSRKIT_PRODUCT_CAP", "1000000"),
            log_level=os.getenv("JSRKIT_LOG_LEVEL", "INFO").upper(),
        )

    def validate(self) -> None:
        """Validate that tolerances and caps are in their documented ranges"""
        if not 1e-10 <= self.eps_feas <= 1e-4:
            raise ValueError("JSRKIT_EPS_FEAS must lie in [1e-10, 1e-4]")
        if not 0 < self.gap_tol < 1:
            raise ValueError("JSRKIT_GAP_TOL must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("JSRKIT_MAX_ITER must be positive")
        if not 0 < self.tol < 1:
            raise ValueError("JSRKIT_TOL must lie in (0, 1)")
        if not 0 < self.spectral_tol <= 1e-2:
            raise ValueError("JSRKIT_SPECTRAL_TOL must lie in (0, 1e-2]")
        if self.lift_cap < 1 or self.product_cap < 1:
            raise ValueError("JSRKIT_LIFT_CAP and JSRKIT_PRODUCT_CAP must be positive")
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            LOGGER.warning("Unknown JSRKIT_LOG_LEVEL %s, falling back to INFO", self.log_level)
            self.log_level = "INFO"

    def reload(self) -> "Settings":
        """Re-read the environment into this instance; modules keep a reference to SETTINGS."""
        fresh = Settings.from_env()
        fresh.validate()
        for key, value in asdict(fresh).items():
            setattr(self, key, value)
        return self

    def as_dict(self) -> dict:
        return asdict(self)


SETTINGS = Settings.from_env()

# Validate settings on import
try:
    SETTINGS.validate()
except ValueError as e:
    logging.error("Configuration error: %s", e)
    raise
