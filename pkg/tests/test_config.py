import pytest
from pydantic import ValidationError

from quiverflow.config import (
    QuiverflowConfig,
    Tolerances,
    Window,
    get_config,
    load_default_config,
    reset_config_cache,
)


def test_get_config_reads_the_test_file():
    config = get_config()
    assert config.log_level == "WARNING"
    assert config.seed == 42
    assert config.window == Window(low=-12, high=6)
    assert get_config() is config


def test_missing_config_is_written(tmp_path, monkeypatch):
    path = tmp_path / "nested" / "quiverflow.toml"
    monkeypatch.setenv("QUIVERFLOW_CONFIG", path.as_posix())
    reset_config_cache()
    config = get_config()
    assert path.exists()
    assert config == load_default_config()

    reset_config_cache()
    assert get_config() == config


def test_invalid_config(tmp_path, monkeypatch):
    path = tmp_path / "quiverflow.toml"
    path.write_text("seed = 1\ncolor = 'blue'\n")
    monkeypatch.setenv("QUIVERFLOW_CONFIG", path.as_posix())
    reset_config_cache()
    with pytest.raises(ValueError):
        get_config()


def test_validation():
    for field in ["residual", "kernel_cutoff", "merge"]:
        with pytest.raises(ValidationError):
            Tolerances(**{field: 0.0})
        with pytest.raises(ValidationError):
            Tolerances(**{field: -1e-9})

    for low, high in [(0, 3), (-2, -1), (-1, -1)]:
        with pytest.raises(ValidationError):
            Window(low=low, high=high)
    assert Window(low=-1, high=0).high == 0

    with pytest.raises(ValidationError):
        QuiverflowConfig(log_level="TRACE")


def test_resolved_threads(monkeypatch):
    monkeypatch.delenv("QUIVERFLOW_THREADS", raising=False)
    assert QuiverflowConfig().resolved_threads() == 1
    assert QuiverflowConfig(threads=3).resolved_threads() == 3

    monkeypatch.setenv("QUIVERFLOW_THREADS", "4")
    assert QuiverflowConfig(threads=3).resolved_threads() == 4
    monkeypatch.setenv("QUIVERFLOW_THREADS", "0")
    assert QuiverflowConfig().resolved_threads() == 1
