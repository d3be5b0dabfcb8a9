import io
import json
import logging
import math
import sys

import numpy as np
import pytest

from qdcluster.config.settings import (
    DEFAULT_CONFIG,
    RunConfig,
    parse_config_text,
    parse_float,
    parse_override,
)
from qdcluster.core.errors import ConfigError
from qdcluster.utils.helpers import bit_table, dump_json, parse_range, sample_stream, to_jsonable
from qdcluster.utils.log import configure_logging, get_logger


class TestParseFloat:
    @pytest.mark.parametrize("text, expected", [
        ("0.5", 0.5),
        ("0.023pi", 0.023 * math.pi),
        ("2*pi", 2 * math.pi),
        ("pi", math.pi),
        (" 1e-3 ", 1e-3),
    ])
    def test_values(self, text, expected):
        assert parse_float(text) == pytest.approx(expected)

    def test_garbage(self):
        with pytest.raises(ValueError):
            parse_float("abc")


class TestConfigText:
    def test_types_follow_defaults(self):
        values = parse_config_text(
            "# comment\n"
            "n_qubits = 4\n"
            "sigma_rad = 0.05pi   # inline\n"
            "budget_exit = no\n"
            "model = widetext\n"
            "g0_over_2pi_hz = none\n"
        )
        assert values == {
            'n_qubits': 4,
            'sigma_rad': pytest.approx(0.05 * math.pi),
            'budget_exit': False,
            'model': 'widetext',
            'g0_over_2pi_hz': None,
        }

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config_text("k = 2\n\nbogus = 1\n")
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("k = 1\nk = 2\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError) as info:
            parse_config_text("n_qubits 3\n")
        assert info.value.line == 1

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="n_qubits"):
            parse_config_text("n_qubits = three\n")

    def test_bad_boolean(self):
        with pytest.raises(ConfigError):
            parse_override("unsafe_dims=maybe")


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.as_dict() == DEFAULT_CONFIG
        assert set(config.get_config_status().values()) == {'default'}

    def test_cli_beats_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("k = 3\nn = 1\n", encoding="utf-8")
        config = RunConfig.load(path, {'k': 5})
        assert config['k'] == 5
        assert config['n'] == 1
        status = config.get_config_status()
        assert status['k'] == 'cli'
        assert status['n'] == 'file'
        assert status['seed'] == 'default'

    def test_none_override_is_ignored(self):
        config = RunConfig(overrides={'seed': None})
        assert config['seed'] == DEFAULT_CONFIG['seed']

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            RunConfig(overrides={'nope': 1})

    def test_text_round_trip(self, tmp_path):
        config = RunConfig(overrides={'sigma_rad': 0.1, 'unsafe_dims': True, 'g0_over_2pi_hz': 1e8})
        path = tmp_path / "echo.cfg"
        path.write_text(config.to_text(), encoding="utf-8")
        assert RunConfig.load(path).as_dict() == config.as_dict()

    def test_as_dict_keeps_order(self):
        assert list(RunConfig().as_dict()) == list(DEFAULT_CONFIG)

    def test_parse_override(self):
        assert parse_override("mc_samples=500") == {'mc_samples': 500}
        with pytest.raises(ConfigError):
            parse_override("mc_samples")


class TestHelpers:
    def test_bit_table_most_significant_first(self):
        table = bit_table(3)
        assert table.shape == (8, 3)
        np.testing.assert_array_equal(table[6], [1, 1, 0])

    def test_sample_stream_depends_only_on_seed_and_index(self):
        a = sample_stream(7, 3).normal(size=4)
        b = sample_stream(7, 3).normal(size=4)
        c = sample_stream(7, 4).normal(size=4)
        np.testing.assert_array_equal(a, b)
        assert not np.allclose(a, c)

    def test_parse_range(self):
        assert parse_range("2..30") == (2, 30)
        with pytest.raises(ValueError):
            parse_range("5..2")
        with pytest.raises(ValueError):
            parse_range("5")

    def test_to_jsonable(self):
        value = to_jsonable({'a': np.float64(1.5), 'b': np.arange(2), 'c': 1 + 2j, 'd': np.inf,
                             'e': np.bool_(True)})
        assert value == {'a': 1.5, 'b': [0, 1], 'c': {'re': 1.0, 'im': 2.0}, 'd': None, 'e': True}

    def test_dump_json_keeps_insertion_order(self):
        text = dump_json({'z': 1, 'a': 2})
        assert list(json.loads(text)) == ['z', 'a']
        assert text.endswith("\n")


class TestLogging:
    def test_single_handler(self):
        configure_logging('DEBUG', color=False)
        root = configure_logging('INFO', color=False)
        names = [h.get_name() for h in root.handlers]
        assert names.count('qdcluster-stderr') == 1
        assert root.level == logging.INFO

    def test_child_loggers_propagate(self, caplog):
        configure_logging('INFO', color=False)
        with caplog.at_level(logging.WARNING, logger='qdcluster'):
            get_logger('qdcluster.tests').warning("watch out")
        assert "watch out" in caplog.text

    def test_env_level(self, monkeypatch):
        monkeypatch.setenv('QDCLUSTER_LOG_LEVEL', 'warning')
        assert configure_logging(color=False).level == logging.WARNING
        configure_logging('INFO', color=False)

    def test_reconfigure_after_stream_closed(self, monkeypatch):
        first = io.StringIO()
        monkeypatch.setattr(sys, 'stderr', first)
        configure_logging('INFO', color=False)
        first.close()

        second = io.StringIO()
        monkeypatch.setattr(sys, 'stderr', second)
        root = configure_logging('INFO', color=False)
        get_logger('qdcluster.tests').warning("after reconfigure")
        assert "after reconfigure" in second.getvalue()
        assert [h.get_name() for h in root.handlers].count('qdcluster-stderr') == 1
