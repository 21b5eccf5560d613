import json
import subprocess
import sys
from pathlib import Path

import pytest

from lmfkit import gallery
from lmfkit.skeleton import skeleton_to_json
from lmfkit.support import family_to_json

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*args, **kw):
    return subprocess.run([sys.executable, "-m", "lmfkit.cli", *args],
                          capture_output=True, text=True, **kw)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    out = {}
    for name in ("heart", "lune", "snail", "van_der_pol_golden"):
        p = d / f"{name}.json"
        p.write_text(json.dumps(skeleton_to_json(gallery.SKELETONS[name]()),
                                indent=2, sort_keys=True))
        out[name] = p
    fam = d / "lbs_ex_f.json"
    fam.write_text(json.dumps(family_to_json(gallery.family_f()),
                              indent=2, sort_keys=True))
    out["family_f"] = fam

    from skeleton_transforms import relabel_skeleton

    p = d / "heart_relabeled.json"
    p.write_text(json.dumps(skeleton_to_json(
        relabel_skeleton(gallery.heart())), indent=2, sort_keys=True))
    out["heart_relabeled"] = p

    bad = d / "broken.json"
    bad.write_text("{not json")
    out["broken"] = bad

    invalid = d / "invalid_skeleton.json"
    data = skeleton_to_json(gallery.heart())
    data["singular_points"][0]["index"] = 5
    invalid.write_text(json.dumps(data, indent=2, sort_keys=True))
    out["invalid"] = invalid
    return out


def test_validate_ok(files):
    res = run_cli("validate", str(files["heart"]))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["ok"] is True


def test_validate_rejects_and_exits_1(files):
    res = run_cli("validate", str(files["invalid"]))
    assert res.returncode == 1
    assert json.loads(res.stdout)["issues"]


def test_parse_error_exits_2(files):
    res = run_cli("validate", str(files["broken"]))
    assert res.returncode == 2


def test_equiv_exit_codes(files):
    same = run_cli("equiv", str(files["heart"]), str(files["heart_relabeled"]))
    assert same.returncode == 0
    assert json.loads(same.stdout)["equivalent"] is True
    diff = run_cli("equiv", str(files["heart"]), str(files["lune"]))
    assert diff.returncode == 3
    assert json.loads(diff.stdout)["equivalent"] is False


def test_lmf_json_and_dot(files):
    res = run_cli("lmf", str(files["snail"]))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert {"vertices", "edges", "containment", "loops", "faces"} <= set(payload)
    dot = run_cli("lmf", str(files["snail"]), "--format", "dot")
    assert dot.returncode == 0
    assert dot.stdout.startswith("digraph")


def test_support_report(files):
    res = run_cli("support", str(files["family_f"]))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["lbs"]["separatrices"] == ["glow", "gup"]
    assert payload["lbs"]["regions"] == ["r_lens"]
    assert payload["sep_property_holds"] is True


def test_render_dot(files):
    res = run_cli("render", str(files["heart"]))
    assert res.returncode == 0
    assert "digraph" in res.stdout


def test_outputs_are_byte_identical(files):
    a = run_cli("lmf", str(files["heart"]))
    b = run_cli("lmf", str(files["heart"]))
    assert a.stdout == b.stdout
    c = run_cli("support", str(files["family_f"]))
    d = run_cli("support", str(files["family_f"]))
    assert c.stdout == d.stdout


@pytest.mark.parametrize("field_name", ["saddle_basins_field",
                                        "van_der_pol_field",
                                        "exact_circle_field"])
def test_extract_and_roundtrip(tmp_path, field_name):
    # validate(lmf(extract(field))) must succeed on every shipped field
    field = FIXTURES / f"{field_name}.json"
    skel = tmp_path / "skel.json"
    res = run_cli("extract", str(field), "--output", str(skel))
    assert res.returncode == 0, res.stderr
    built = tmp_path / "lmf.json"
    lmf = run_cli("lmf", str(skel), "--output", str(built))
    assert lmf.returncode == 0, lmf.stderr
    val = run_cli("validate", str(skel))
    assert val.returncode == 0
    graph_val = run_cli("validate", str(built))
    assert graph_val.returncode == 0


def test_extract_settings_env(tmp_path):
    field = FIXTURES / "saddle_basins_field.json"
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"integ_tol": 1e-8, "grid_n": 21}))
    import os

    env = dict(os.environ, LMFKIT_SETTINGS=str(settings))
    res = subprocess.run([sys.executable, "-m", "lmfkit.cli", "extract",
                          str(field)], capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
