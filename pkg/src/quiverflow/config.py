import functools
import os
from importlib.resources import files
from pathlib import Path
from typing import Annotated, Literal

import toml
from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from quiverflow.logger import get_logger, set_log_level

logger = get_logger(__name__)


def positive(value: float) -> float:
    if value <= 0:
        raise ValueError(f"Expected a positive tolerance, got {value}.")
    return value


PositiveFloat = Annotated[float, AfterValidator(positive)]


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")
    residual: PositiveFloat = 1e-9
    kernel_cutoff: PositiveFloat = 1e-10  # relative to sigma_max
    rank_cutoff: PositiveFloat = 1e-8  # relative to sigma_max
    chart_boundary: PositiveFloat = 1e-8
    merge: PositiveFloat = 1e-9  # pole merging in rational functions
    prune: PositiveFloat = 1e-13
    simple_rank: PositiveFloat = 1e-8


class Window(BaseModel):
    """Order window [low, high] for truncated operator arithmetic."""

    model_config = ConfigDict(extra="forbid")
    low: int = -12
    high: int = 6

    @model_validator(mode="after")
    def check_order(self) -> "Window":
        if not self.low < 0 <= self.high:
            raise ValueError(
                f"Invalid window [{self.low}, {self.high}]. Expected low < 0 <= high."
            )
        return self


class QuiverflowConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tolerances: Tolerances = Field(default_factory=Tolerances)
    window: Window = Field(default_factory=Window)
    seed: int = 42
    threads: int | None = None
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    degree_cap: int = 64
    path_cap_cyclic_factor: int = 4
    path_cap_general: int = 12
    fd_step: PositiveFloat = 1e-3

    def resolved_threads(self) -> int:
        """Number of worker threads, QUIVERFLOW_THREADS taking precedence."""
        env_threads = os.getenv("QUIVERFLOW_THREADS")
        if env_threads is not None:
            return max(1, int(env_threads))
        return max(1, self.threads or 1)


def load_default_config() -> QuiverflowConfig:
    """Load the configuration shipped with the package."""
    resource = files("quiverflow").joinpath("resources/config.toml")
    return QuiverflowConfig(**toml.loads(resource.read_text()))


def default_config_path() -> Path:
    return Path(
        os.getenv(
            "QUIVERFLOW_CONFIG",
            (Path.home() / ".config/quiverflow.toml"),
        )
    )


@functools.cache
def get_config() -> QuiverflowConfig:
    """Get the quiverflow configuration."""
    config_path = default_config_path()

    if config_path.exists():
        config_data = toml.load(config_path)
        try:
            config = QuiverflowConfig(**config_data)
        except ValidationError as e:
            error_msg = f"Invalid configuration file {config_path.as_posix()}."
            logger.error(error_msg)
            raise ValueError(error_msg) from e
        logger.info(f"Configuration read from {config_path.as_posix()}.")
    else:
        logger.warning(f"Configuration file {config_path} does not exist.")
        logger.warning("Creating configuration file with default configuration.")
        config = load_default_config()
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with config_path.open("w") as f:
            toml.dump(config.model_dump(exclude_none=True), f)
        logger.info(f"Default configuration saved to {config_path.as_posix()}.")

    if os.getenv("QUIVERFLOW_LOG_LEVEL") is None:
        set_log_level(config.log_level)
    logger.debug(f"{config=}")
    return config


def reset_config_cache() -> None:
    """Forget the memoized configuration."""
    get_config.cache_clear()
