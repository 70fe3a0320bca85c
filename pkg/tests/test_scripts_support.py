import json
from pathlib import Path

import pytest

from ahsm import HierarchyExportScript, HierarchyKind, load_experiment_config
from ahsm.chmodel import CHCase
from ahsm.modelfile import parse_model
from ahsm.numlab import REPORTED, EvalPoint
from ahsm.pde_generators import random_polynomial_pde

from conftest import assert_same

PARAMS_DIR = Path(__file__).parent.parent / "scripts" / "experiments" / "theta_sweep_params"


@pytest.mark.parametrize("case", [CHCase.INV_U, CHCase.LINEAR_U])
def test_shipped_configs(case):
    config = load_experiment_config(PARAMS_DIR, case.value)
    assert config["case"] == case.value
    reported = REPORTED[case]
    assert EvalPoint.from_mapping(config["point"]) == reported.point
    assert config["reported"]["theta"] == str(reported.theta.evalf(4))
    assert config["reported"]["abs_residual"] == reported.abs_residual


def test_missing_config(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_experiment_config(tmp_path, "nothing")


def test_export_script(tmp_path, monkeypatch, ch_generic):
    pde = random_polynomial_pde(1)
    strategy = iter(
        [
            ("ch.json", ch_generic, HierarchyKind.AHSM_REARRANGED, 1),
            ("random.json", pde, HierarchyKind.ASM, 2),
        ]
    )
    monkeypatch.setattr("sys.argv", ["generate", "--overwrite", str(tmp_path)])
    HierarchyExportScript(strategy).run()

    document = json.loads((tmp_path / "ch.json").read_text())
    assert document["kind"] == "ahsm"
    assert document["order"] == 1
    assert len(document["equations"]) == 2
    assert_same(parse_model(document["model"]).E0, ch_generic.E0)

    document = json.loads((tmp_path / "random.json").read_text())
    assert len(document["equations"]) == 3


def test_export_script_dry_run(tmp_path, monkeypatch):
    strategy = iter([("a.json", random_polynomial_pde(2), HierarchyKind.ASM, 1)])
    monkeypatch.setattr("sys.argv", ["generate", "--dry-run", str(tmp_path / "out")])
    HierarchyExportScript(strategy).run()
    assert not any((tmp_path / "out").iterdir())
