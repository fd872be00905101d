"""Settings management following SOLID principles."""

import logging
from fractions import Fraction
from typing import List, Optional


class DefaultSettings:
    """Default settings as class variables for centralized management."""

    # Convention settings
    DEFAULT_RICCI_CONVENTION = "standard"
    DEFAULT_D_CONVENTION = "both"
    RICCI_CONVENTIONS = ("standard", "flipped")
    D_CONVENTIONS = ("half", "full", "both")

    # Flow settings
    DEFAULT_DT = 1e-3
    DEFAULT_T_MAX = 0.5
    DEFAULT_K0_SCALE = "0"
    DEFAULT_FLOW_KIND = "hyperbolic"
    FLOW_KINDS = ("hyperbolic", "conformal")
    DEFAULT_OUTPUT_FORMAT = "csv"
    OUTPUT_FORMATS = ("csv", "json")

    # Thread pool settings
    DEFAULT_WORKER_COUNT = 4

    # Output settings
    DEFAULT_OUTPUT_DIR = "output"
    DEFAULT_LOG_LEVEL = "INFO"


class SettingsManager:
    """Manages application settings with validation."""

    def __init__(
        self,
        output_dir: str = DefaultSettings.DEFAULT_OUTPUT_DIR,
        ricci_convention: str = DefaultSettings.DEFAULT_RICCI_CONVENTION,
        d_convention: str = DefaultSettings.DEFAULT_D_CONVENTION,
        dt: float = DefaultSettings.DEFAULT_DT,
        t_max: float = DefaultSettings.DEFAULT_T_MAX,
        k0_scale: str = DefaultSettings.DEFAULT_K0_SCALE,
        kind: str = DefaultSettings.DEFAULT_FLOW_KIND,
        pressure: Optional[str] = None,
        worker_count: int = DefaultSettings.DEFAULT_WORKER_COUNT,
        output_format: str = DefaultSettings.DEFAULT_OUTPUT_FORMAT,
        log_level: str = DefaultSettings.DEFAULT_LOG_LEVEL,
    ):
        """Initialize settings with validation."""
        self._validate_inputs(output_dir, ricci_convention, d_convention, kind, output_format)

        self.output_dir = output_dir
        self.ricci_convention = ricci_convention
        self.d_convention = d_convention
        self.dt = float(dt)
        self.t_max = float(t_max)
        self.kind = kind
        self.output_format = output_format
        self.worker_count = int(worker_count)
        self.log_level = log_level.upper()

        if self.dt <= 0:
            raise ValueError("Step size dt must be positive")
        if self.t_max < 0:
            raise ValueError("t_max must be non-negative")
        if self.worker_count < 1:
            raise ValueError("Worker count must be at least 1")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ValueError(f"Unknown log level: {log_level}")

        self.pressure = self._parse_pressure(pressure, kind)
        # Parse k0 scales
        self.k0_scales = self._parse_scales(k0_scale)

    def _validate_inputs(self, output_dir: str, ricci: str, d_conv: str, kind: str, fmt: str):
        """Validate required inputs."""
        if not output_dir or not output_dir.strip():
            raise ValueError("Output directory is required")

        if ricci not in DefaultSettings.RICCI_CONVENTIONS:
            raise ValueError(f"Ricci convention must be one of {DefaultSettings.RICCI_CONVENTIONS}")

        if d_conv not in DefaultSettings.D_CONVENTIONS:
            raise ValueError(f"d convention must be one of {DefaultSettings.D_CONVENTIONS}")

        if kind not in DefaultSettings.FLOW_KINDS:
            raise ValueError(f"Kind must be one of {DefaultSettings.FLOW_KINDS}")

        if fmt not in DefaultSettings.OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {DefaultSettings.OUTPUT_FORMATS}")

    @staticmethod
    def _parse_pressure(pressure: Optional[str], kind: str) -> Optional[Fraction]:
        if kind == "conformal":
            if pressure is None or not str(pressure).strip():
                raise ValueError("Pressure p is required for the conformal kind")
            try:
                return Fraction(str(pressure).strip())
            except ValueError:
                raise ValueError(f"Pressure must be rational, got {pressure!r}") from None
        if pressure is not None and str(pressure).strip():
            raise ValueError("Pressure p is only allowed for the conformal kind")
        return None

    @staticmethod
    def _parse_scales(k0_scale: str) -> List[float]:
        try:
            scales = [float(part) for part in str(k0_scale).split(",") if part.strip()]
        except ValueError:
            raise ValueError(f"k0 scales must be numbers, got {k0_scale!r}") from None
        if not scales:
            raise ValueError("At least one k0 scale is required")
        return scales

    def get_d_conventions(self) -> List[str]:
        """Exterior-derivative conventions to report."""
        if self.d_convention == "both":
            return ["half", "full"]
        return [self.d_convention]

    def get_step_count(self) -> int:
        """Number of RK4 steps covering ``[0, t_max]``."""
        return int(round(self.t_max / self.dt))

    def get_log_level(self) -> int:
        return logging.getLevelName(self.log_level)

    def __repr__(self) -> str:
        """String representation of settings."""
        return (
            f"SettingsManager("
            f"ricci={self.ricci_convention}, "
            f"d={self.d_convention}, "
            f"dt={self.dt}, t_max={self.t_max}, "
            f"kind={self.kind}, "
            f"workers={self.worker_count})"
        )
