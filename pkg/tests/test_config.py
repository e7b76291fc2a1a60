"""Configuration loading, merging and validation."""
from __future__ import annotations

import pytest
import yaml

from coreprune.config import (
    DEFAULT_CONFIG,
    get_caratheodory_config,
    get_cli_config,
    get_config,
    get_geometry_config,
    get_pruning_config,
    load_main_config,
    validate_config,
)
from coreprune.errors import InvalidParameter


def _write_config(tmp_path, section):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump({"coreprune": section}))
    return path


def test_missing_file_falls_back_to_defaults(tmp_path):
    config = get_config(tmp_path / "absent.yaml")
    assert config == DEFAULT_CONFIG
    with pytest.raises(FileNotFoundError):
        load_main_config(tmp_path / "absent.yaml")


def test_shipped_config_is_valid():
    assert validate_config() == []
    assert get_geometry_config()["eps_mvee"] == 1e-6


def test_overrides_are_deep_merged(tmp_path):
    path = _write_config(tmp_path, {"geometry": {"eps_mvee": 1e-4}})
    geometry = get_geometry_config(path)
    assert geometry["eps_mvee"] == 1e-4
    assert geometry["rank_tol"] == DEFAULT_CONFIG["geometry"]["rank_tol"]
    assert get_caratheodory_config(path) == DEFAULT_CONFIG["caratheodory"]


def test_defaults_are_not_mutated(tmp_path):
    path = _write_config(tmp_path, {"cli": {"seed": 42}})
    assert get_cli_config(path)["seed"] == 42
    assert DEFAULT_CONFIG["cli"]["seed"] == 0


def test_pruning_defaults():
    pruning = get_pruning_config()
    assert pruning["reduce_method"] is None
    assert pruning["probe_inputs"] == 1000


@pytest.mark.parametrize("section, fragment", [
    ({"geometry": {"eps_mvee": 2.0}}, "eps_mvee"),
    ({"geometry": {"rank_tol": 0}}, "rank_tol"),
    ({"sampling": {"coreset_size": 0}}, "coreset_size"),
    ({"complexity": {"refine_steps": -1}}, "refine_steps"),
    ({"pruning": {"reduce_method": "umap"}}, "reduce_method"),
    ({"pruning": {"reduce_method": "pca"}}, "reduce_dim"),
    ({"cli": {"format": "xml"}}, "format"),
    ({"geometry": {"eps_mvee": "small"}}, "eps_mvee"),
    ({"linf": {"trials": "many"}}, "trials"),
    ({"evaluation": {"activation": "tanh"}}, "activation"),
    ({"cli": {"seed": 1.5}}, "seed"),
])
def test_validation_flags_bad_values(tmp_path, section, fragment):
    problems = validate_config(_write_config(tmp_path, section))
    assert len(problems) == 1
    assert fragment in problems[0]


@pytest.mark.parametrize("text", [
    "coreprune: [unclosed\n",
    "- just\n- a list\n",
    "coreprune: [1, 2]\n",
    "coreprune:\n  geometry: 5\n",
])
def test_malformed_files_raise_input_error(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    with pytest.raises(InvalidParameter):
        get_config(path)
    with pytest.raises(InvalidParameter):
        validate_config(path)


def test_empty_section_keeps_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("coreprune:\n  geometry:\n")
    assert get_geometry_config(path) == DEFAULT_CONFIG["geometry"]
