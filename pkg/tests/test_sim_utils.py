"""Tests for configuration, seeds, formatting and range parsing."""

import pytest

from cuckoo_thresholds.sim_utils import (
    DEFAULT_CONFIG,
    derive_seed,
    format_value,
    get_experiment_config,
    load_config,
    make_c_grid,
    parse_float_list,
    parse_int_range,
)


def test_load_config_defaults_without_path():
    config = load_config(None)
    assert config == DEFAULT_CONFIG
    config["experiments"]["trials"] = 99
    assert DEFAULT_CONFIG["experiments"]["trials"] == 20


def test_load_config_merges_known_keys(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("experiments:\n  workers: 4\n  unknown: 1\ntable:\n  max_steps_factor: 50\n")
    config = load_config(str(path))
    assert config["experiments"]["workers"] == 4
    assert config["experiments"]["model"] == "simple"
    assert "unknown" not in config["experiments"]
    assert config["table"]["max_steps_factor"] == 50
    assert get_experiment_config(config)["workers"] == 4


def test_load_config_missing_file_exits(tmp_path):
    with pytest.raises(SystemExit, match="Config file not found"):
        load_config(str(tmp_path / "missing.yaml"))


def test_load_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("- just\n- a list\n")
    with pytest.raises(SystemExit, match="mapping"):
        load_config(str(path))


def test_derive_seed_depends_only_on_inputs():
    assert derive_seed(0, 5) == derive_seed(0, 5)
    assert derive_seed(0, 5) != derive_seed(0, 6)
    assert derive_seed(0, 5) != derive_seed(1, 5)
    assert 0 <= derive_seed(123, 456) < 2**64


def test_format_value():
    assert format_value(None) == "NULL"
    assert format_value(True) == "1"
    assert format_value(False) == "0"
    assert format_value(7) == "7"
    assert format_value("simple") == "simple"
    assert float(format_value(0.1)) == 0.1
    assert format_value(0.5) == "0.5"


@pytest.mark.parametrize("text, expected", [
    ("3..6", [3, 4, 5, 6]),
    ("3,5", [3, 5]),
    ("4", [4]),
    (" 2..2 ", [2]),
])
def test_parse_int_range(text, expected):
    assert parse_int_range(text) == expected


@pytest.mark.parametrize("text", ["6..3", "a..b", "3,x"])
def test_parse_int_range_rejects(text):
    with pytest.raises(ValueError):
        parse_int_range(text)


def test_parse_float_list():
    assert parse_float_list("0.7,0.8") == [0.7, 0.8]
    with pytest.raises(ValueError):
        parse_float_list("0.7,abc")


def test_make_c_grid():
    assert make_c_grid(0.88, 0.9, 0.005) == [0.88, 0.885, 0.89, 0.895, 0.9]
    assert make_c_grid(0.9, 0.9, 0.01) == [0.9]
    with pytest.raises(ValueError):
        make_c_grid(0.9, 0.8, 0.01)
    with pytest.raises(ValueError):
        make_c_grid(0.8, 0.9, 0.0)
