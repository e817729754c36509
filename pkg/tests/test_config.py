from __future__ import annotations

from pathlib import Path

import pytest

from latticecft.config import SUITE_NAMES, ModelConfig, load_config, select_suites
from latticecft.errors import ConfigError
from latticecft.suites import prepare_model, resolve_backend

ROOT = Path(__file__).resolve().parents[1]


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "model.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_root_config():
    config = load_config(ROOT / "config.yaml")
    assert config.space.d_plus == 1 and config.space.d_minus == 1
    assert config.lattice.r_squared == "1"
    assert config.lattice.generators[0].plus == ("R/sqrt2",)
    assert config.lattice.generators[1].minus == ("-1/(R*sqrt2)",)
    assert (config.cutoffs.energy, config.cutoffs.series_order, config.cutoffs.box_radius) == (8, 5, 3)
    assert config.suites == SUITE_NAMES


def test_defaults_fill_missing_sections(tmp_path):
    config = load_config(_write(tmp_path, "lattice:\n  generators:\n    - {plus: ['1'], minus: ['1']}\n"))
    assert config.cutoffs == ModelConfig().cutoffs
    assert config.backend.kind == "auto"
    assert config.name == "model"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.yaml")


def test_non_mapping_document(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "- just\n- a list\n"))


def test_unknown_backend(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "backend: {kind: octonion}\n"))


def test_unknown_suite(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, "suites: [lattice, plotting]\n"))


@pytest.mark.parametrize(
    "text, key",
    [
        ("vertex: {comm_order: 9}\n", "vertex.comm_order"),
        ("cutoffs: {energy: 4, series_order: 5}\n", "cutoffs.series_order"),
        ("fock: {max_mode: 9}\n", "fock.max_mode"),
        ("net2d: {energy: 1}\n", "net2d.modes"),
    ],
)
def test_windows_outside_cutoff(tmp_path, text, key):
    with pytest.raises(ConfigError, match=key):
        load_config(_write(tmp_path, text))


def test_comm_order_at_half_cutoff(tmp_path):
    config = load_config(_write(tmp_path, "vertex: {comm_order: 4}\n"))
    assert config.vertex.comm_order == 4


def test_suite_selection_keeps_canonical_order():
    assert select_suites(["classify", "lattice"], SUITE_NAMES) == ("lattice", "classify")
    assert select_suites(None, ("fock",)) == ("fock",)
    assert select_suites(["all"], ()) == SUITE_NAMES


@pytest.mark.parametrize(
    "name, kind",
    [
        ("rank2_r2_two_thirds.yaml", "quadratic"),
        ("rank2_float.yaml", "float"),
        ("isotropic.yaml", "rational"),
        ("heterotic.yaml", "quadratic"),
    ],
)
def test_auto_backend(name, kind):
    backend, note = resolve_backend(load_config(ROOT / "configs" / name))
    assert backend.kind == kind
    assert note


def test_root_config_needs_sqrt2():
    backend, _ = resolve_backend(load_config(ROOT / "config.yaml"))
    assert backend.name == "quadratic(2)"


def test_odd_norm_is_a_config_error():
    config = load_config(ROOT / "configs" / "odd_norm.yaml")
    with pytest.raises(ConfigError, match="OddNorm"):
        prepare_model(config)


def test_bad_token(tmp_path):
    config = load_config(_write(tmp_path, "lattice:\n  generators:\n    - {plus: ['1/'], minus: ['1']}\n"))
    with pytest.raises(ConfigError):
        prepare_model(config)


def test_prepared_model(tmp_path):
    model = prepare_model(load_config(ROOT / "config.yaml"))
    assert model.lattice.gram_indef == ((0, 1), (1, 0))
    assert [c.coords for c in model.generator_charges] == [(1, 0), (0, 1)]
