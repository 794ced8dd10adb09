"""Tests for the YAML defaults, environment settings and per-run configuration."""

import importlib
import sys
import textwrap
from pathlib import Path

import pytest

from poincare_cube.config.run import RunConfig, build_config, load_config_file, merge_sources
from poincare_cube.errors import InvalidInputError
from poincare_cube.norms import FunctionSpace


def _reload(module_name: str):
    sys.modules.pop(module_name, None)
    return importlib.import_module(module_name)


class TestDefaultsLoader:
    def test_bundled_yaml_values(self):
        defaults = _reload("poincare_cube.config.defaults")
        assert defaults.LIMITS.cube_max_n == 12
        assert defaults.LIMITS.dense_max_n == 6
        assert defaults.LIMITS.pauli_max_n == 8
        assert defaults.TOLERANCES.inequality == 1e-9
        assert defaults.UNIVERSAL_CONSTANT_C == 1.0
        assert defaults.DEFAULTS.search.starts == 6

    def test_env_var_override_path(self, monkeypatch, tmp_path: Path):
        """POINCARE_DEFAULTS_PATH redirects the loader; missing keys keep model defaults."""
        custom = tmp_path / "defaults.yaml"
        custom.write_text(
            textwrap.dedent(
                """
                universal_constant_c: 2.5
                limits:
                  cube_max_n: 8
                """
            ).strip()
        )
        monkeypatch.setenv("POINCARE_DEFAULTS_PATH", str(custom))
        try:
            defaults = _reload("poincare_cube.config.defaults")
            assert defaults.UNIVERSAL_CONSTANT_C == 2.5
            assert defaults.LIMITS.cube_max_n == 8
            assert defaults.LIMITS.dense_max_n == 6
            assert defaults.TOLERANCES.exact == 1e-12
        finally:
            monkeypatch.delenv("POINCARE_DEFAULTS_PATH")
            _reload("poincare_cube.config.defaults")

    def test_unknown_key_is_rejected(self, monkeypatch, tmp_path: Path):
        custom = tmp_path / "defaults.yaml"
        custom.write_text("nonsense: 1\n")
        monkeypatch.setenv("POINCARE_DEFAULTS_PATH", str(custom))
        try:
            with pytest.raises(ValueError):
                _reload("poincare_cube.config.defaults")
        finally:
            monkeypatch.delenv("POINCARE_DEFAULTS_PATH")
            _reload("poincare_cube.config.defaults")

    def test_non_mapping_yaml_is_rejected(self, monkeypatch, tmp_path: Path):
        custom = tmp_path / "defaults.yaml"
        custom.write_text("- 1\n- 2\n")
        monkeypatch.setenv("POINCARE_DEFAULTS_PATH", str(custom))
        try:
            with pytest.raises(RuntimeError, match="YAML mapping"):
                _reload("poincare_cube.config.defaults")
        finally:
            monkeypatch.delenv("POINCARE_DEFAULTS_PATH")
            _reload("poincare_cube.config.defaults")


class TestSettings:
    def test_defaults_without_env(self):
        settings = _reload("poincare_cube.config.settings")
        assert settings.WORKERS == 1
        assert settings.LOG_LEVEL == "INFO"
        assert settings.ALWAYS_EMIT_WITNESS is True

    def test_env_values_are_parsed(self, monkeypatch):
        monkeypatch.setenv("POINCARE_WORKERS", " 4 ")
        monkeypatch.setenv("POINCARE_LOG_LEVEL", "debug")
        monkeypatch.setenv("POINCARE_ALWAYS_EMIT_WITNESS", "no")
        settings = _reload("poincare_cube.config.settings")
        assert settings.WORKERS == 4
        assert settings.LOG_LEVEL == "DEBUG"
        assert settings.ALWAYS_EMIT_WITNESS is False

    @pytest.mark.parametrize("raw", ["0", "-2", "many"])
    def test_invalid_workers_raise(self, monkeypatch, raw):
        monkeypatch.setenv("POINCARE_WORKERS", raw)
        with pytest.raises(RuntimeError, match="POINCARE_WORKERS"):
            _reload("poincare_cube.config.settings")

    def test_invalid_log_level_raises(self, monkeypatch):
        monkeypatch.setenv("POINCARE_LOG_LEVEL", "chatty")
        with pytest.raises(RuntimeError, match="POINCARE_LOG_LEVEL"):
            _reload("poincare_cube.config.settings")

    @pytest.fixture(autouse=True)
    def _restore_settings(self, monkeypatch):
        yield
        for name in ("POINCARE_WORKERS", "POINCARE_LOG_LEVEL", "POINCARE_ALWAYS_EMIT_WITNESS"):
            monkeypatch.delenv(name, raising=False)
        _reload("poincare_cube.config.settings")


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.space == "lp:2"
        assert cfg.function_space == FunctionSpace.lp(2.0)
        assert cfg.format == "json"
        assert cfg.n is None and cfg.trials is None
        assert cfg.theorems == []

    def test_comma_separated_lists(self):
        cfg = build_config({"theorems": "poincare, moment", "t_grid": "0.5,1"})
        assert cfg.theorems == ["poincare", "moment"]
        assert cfg.t_grid == [0.5, 1.0]

    def test_unknown_theorem_is_rejected(self):
        with pytest.raises(InvalidInputError, match="unknown theorem"):
            build_config({"theorems": ["poincare", "fermat"]})

    def test_n_above_theorem_cap_is_rejected(self):
        with pytest.raises(InvalidInputError, match="cap"):
            build_config({"theorems": ["lemma53"], "n": 9})

    def test_bad_space_is_rejected(self):
        with pytest.raises(InvalidInputError):
            build_config({"space": "lq:3"})

    def test_log_level_is_normalized(self):
        assert build_config({"log_level": "warning"}).log_level == "WARNING"
        with pytest.raises(InvalidInputError):
            build_config({"log_level": "loud"})

    def test_extra_keys_are_forbidden(self):
        with pytest.raises(InvalidInputError):
            build_config({"colour": "blue"})

    def test_config_is_frozen(self):
        cfg = RunConfig()
        with pytest.raises(ValueError):
            cfg.seed = 3  # type: ignore[misc]


class TestConfigFile:
    def test_load_config_file(self, tmp_path: Path):
        path = tmp_path / "run.env"
        path.write_text("# a run\nSPACE=lp:4\nn-max = 6\nexport SEED=7\n")
        assert load_config_file(path) == {"space": "lp:4", "n_max": "6", "seed": "7"}

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(InvalidInputError, match="does not exist"):
            load_config_file(tmp_path / "absent.env")

    def test_unknown_key(self, tmp_path: Path):
        path = tmp_path / "run.env"
        path.write_text("speed=3\n")
        with pytest.raises(InvalidInputError, match="unknown key"):
            load_config_file(path)

    def test_flags_override_file_override_defaults(self, tmp_path: Path):
        path = tmp_path / "run.env"
        path.write_text("space=lp:4\nseed=7\ntrials=3\n")
        cfg = merge_sources({"seed": 11, "trials": None, "n": None}, path)
        assert cfg.space == "lp:4"
        assert cfg.seed == 11
        assert cfg.trials == 3
        assert cfg.theta0 == 1.0
