import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from shiftlab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def files(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return {
        "bergman": write("bergman.json", {"kind": "bergman"}),
        "sie": write("sie.json", {"kind": "sie_bergman"}),
        "rank_one_high": write(
            "rank_one_high.json",
            {
                "prefix_sq": ["7/10"],
                "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1], "start": 1},
            },
        ),
        "three_atoms": write(
            "three_atoms.json",
            {
                "kind": "atomic1d",
                "atoms": ["1/3", "1/2", "1"],
                "densities": ["1/3", "1/3", "1/3"],
            },
        ),
        "planar": write(
            "planar.json",
            {
                "kind": "atomic2d",
                "atoms": [["1/3", "2/3"], ["1/2", "1/2"], ["1", "0"]],
                "densities": ["1/3", "1/3", "1/3"],
            },
        ),
        "family": write(
            "family.json",
            {
                "parameter": "x",
                "lo": "1/2",
                "hi": "4/5",
                "shift": {
                    "prefix_sq": ["x"],
                    "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1], "start": 1},
                    "norm_bound_sq": "2",
                },
            },
        ),
    }


def _payload(result):
    return json.loads(result.stdout)


def test_moments1(runner, files):
    result = runner.invoke(main, ["moments1", "--shift", files["bergman"], "--count", "4"])
    assert result.exit_code == 0
    assert _payload(result)["result"]["moments"] == ["1", "1/2", "1/3", "1/4"]


def test_moments2_and_determinism(runner, files):
    args = ["moments2", "--shift", files["sie"], "--window", "3"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout  # byte-stable
    table = _payload(first)["result"]["moments"]
    assert table[2][1] == "1/12"


def test_khypo1_verdict_exit_codes(runner, files):
    good = runner.invoke(main, ["khypo1", "--shift", files["bergman"], "--k", "2"])
    assert good.exit_code == 0
    bad = runner.invoke(
        main, ["khypo1", "--shift", files["rank_one_high"], "--k", "2", "--window", "10"]
    )
    assert bad.exit_code == 2
    body = _payload(bad)
    assert body["result"]["holds"] is False
    assert body["result"]["certificate"]["first_failure"] is not None


def test_khypo2_with_restriction(runner, files):
    result = runner.invoke(
        main,
        [
            "khypo2",
            "--shift",
            files["sie"],
            "--k",
            "2",
            "--window",
            "6",
            "--restriction",
            "2,3,0,0",
        ],
    )
    assert result.exit_code == 0


def test_sixpoint(runner, files):
    result = runner.invoke(main, ["sixpoint", "--shift", files["sie"], "--window", "8"])
    assert result.exit_code == 0


def test_embed_spherical_matches_closed_form(runner, files):
    result = runner.invoke(
        main,
        ["embed", "--kind", "spherical", "--c", "1", "--row0", files["bergman"], "--window", "4"],
    )
    assert result.exit_code == 0
    grid = _payload(result)["result"]["shift"]
    assert grid["alpha_sq"][0] == ["1/2", "1/3", "1/4", "1/5"]
    assert grid["beta_sq"][0] == ["1/2", "2/3", "3/4", "4/5"]


def test_embed_stall_exits_2(runner, tmp_path):
    descriptor = {
        "prefix_sq": ["9/16"],
        "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1], "start": 1},
    }
    path = tmp_path / "stall.json"
    path.write_text(json.dumps(descriptor))
    result = runner.invoke(
        main,
        ["embed", "--kind", "spherical", "--c", "1", "--row0", str(path), "--window", "10"],
    )
    assert result.exit_code == 2
    body = _payload(result)
    assert body["result"]["stalled"]["location"] == [0, 7]


def test_power_and_decompose(runner, files):
    result = runner.invoke(
        main,
        ["power", "--shift", files["sie"], "--m", "2", "--n", "2", "--k", "1", "--window", "4"],
    )
    assert result.exit_code == 0
    decomposed = runner.invoke(
        main, ["decompose", "--shift", files["bergman"], "--m", "2", "--window", "3"]
    )
    assert decomposed.exit_code == 0
    parts = _payload(decomposed)["result"]["components"]
    assert parts[0]["prefix_sq"] == ["1/3", "3/5", "5/7"]


def test_curto_park(runner, files):
    result = runner.invoke(main, ["curto-park", "--measure", files["three_atoms"], "--m", "2"])
    assert result.exit_code == 0
    measures = _payload(result)["result"]["measures"]
    assert measures[1]["densities"] == ["2/11", "3/11", "6/11"]


def test_recursion_from_moments(runner):
    result = runner.invoke(
        main,
        [
            "recursion",
            "--moments",
            "1,11/18,49/108,251/648,1393/3888,8051/23328,47449/139968",
            "--max-order",
            "3",
        ],
    )
    assert result.exit_code == 0
    body = _payload(result)["result"]
    assert body["found"] is True and body["order"] == 3
    assert body["atoms"] == [["1/3", "1/3"], ["1/2", "1/3"], ["1", "1/3"]]


def test_pushforward_and_marginal(runner, files):
    pushed = runner.invoke(
        main,
        ["pushforward", "--measure", files["three_atoms"], "--p", "0,1", "--q", "1,-1"],
    )
    assert pushed.exit_code == 0
    mu = _payload(pushed)["result"]["measure"]
    assert mu["atoms"] == [["1/3", "2/3"], ["1/2", "1/2"], ["1", "0"]]
    marg = runner.invoke(main, ["marginal", "--measure", files["planar"], "--axis", "x"])
    assert marg.exit_code == 0
    assert _payload(marg)["result"]["measure"]["atoms"] == ["1/3", "1/2", "1"]


def test_recover_and_spherical_check(runner, files, tmp_path):
    embed_result = runner.invoke(
        main,
        ["embed", "--kind", "spherical", "--c", "1", "--base", files["three_atoms"],
         "--window", "6"],
    )
    assert embed_result.exit_code == 0
    grid_path = tmp_path / "grid.json"
    grid_path.write_text(json.dumps(_payload(embed_result)["result"]["shift"]))
    recovered = runner.invoke(
        main, ["recover", "--shift", str(grid_path), "--atoms", "1/3,1/2,1"]
    )
    assert recovered.exit_code == 0
    assert _payload(recovered)["result"]["measure"]["densities"] == ["1/3", "1/3", "1/3"]
    check = runner.invoke(main, ["spherical-check", "--shift", str(grid_path)])
    assert check.exit_code == 0
    assert _payload(check)["result"]["constant"] == "1"
    not_spherical = runner.invoke(
        main, ["spherical-check", "--shift", files["sie"], "--window", "4"]
    )
    assert not_spherical.exit_code == 0


def test_spherical_check_verdicts(runner, tmp_path, files):
    # all-ones grid: constant sum 2
    hh = tmp_path / "hh.json"
    hh.write_text(json.dumps({"kind": "helton_howe"}))
    constant = runner.invoke(main, ["spherical-check", "--shift", str(hh), "--window", "3"])
    assert constant.exit_code == 0
    assert _payload(constant)["result"]["constant"] == "2"
    # diagonal Bergman embedding: sum varies, verdict exits 2
    diag = tmp_path / "diag.json"
    diag.write_text(json.dumps({"kind": "classical", "base": {"kind": "bergman"}}))
    varying = runner.invoke(main, ["spherical-check", "--shift", str(diag), "--window", "3"])
    assert varying.exit_code == 2
    assert _payload(varying)["result"]["constant"] is None


def test_threshold_cli(runner, files):
    result = runner.invoke(
        main,
        [
            "threshold",
            "--family",
            files["family"],
            "--op",
            "khypo1",
            "--k",
            "2",
            "--window",
            "15",
            "--precision",
            "1000",
            "--candidate",
            "9/16",
        ],
    )
    assert result.exit_code == 0
    body = _payload(result)["result"]
    assert body["candidate_confirmed"] is True


def test_csv_output_is_flat_and_stable(runner, files):
    args = ["moments1", "--shift", files["bergman"], "--count", "3", "--csv"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert "result.moments[2],1/3" in first.stdout


def test_denominator_cap(runner, files, monkeypatch):
    monkeypatch.setenv("SHIFTLAB_MAX_DENOM_BITS", "4")
    result = runner.invoke(main, ["moments1", "--shift", files["bergman"], "--count", "40"])
    assert result.exit_code == 1
    assert "denominator" in result.stderr


def test_schema_error_exit_code(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"prefix_sq": ')
    result = runner.invoke(main, ["khypo1", "--shift", str(bad)])
    assert result.exit_code == 1
    assert "invalid JSON" in result.stderr


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "shiftlab.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0


def test_embed_with_spec_file(runner, tmp_path):
    spec = {"kind": "spherical", "c": "1", "row0": {"kind": "bergman"}}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["embed", "--spec", str(path), "--window", "3"])
    assert result.exit_code == 0
    grid = _payload(result)["result"]["shift"]
    assert grid["alpha_sq"] == [
        ["1/2", "1/3", "1/4"],
        ["2/3", "1/2", "2/5"],
        ["3/4", "3/5", "1/2"],
    ]
