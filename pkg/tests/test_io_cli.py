import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from strobotomo import io, scenarios, workflows
from strobotomo.cli import main
from strobotomo.dynamics import build_gkls
from strobotomo.observability import reconstructibility_check
from strobotomo.randomized import random_complex, random_gkls
from strobotomo.tomography import simulate_measurements, make_time_grid

from conftest import I2, LOWER, SX, SY, SZ

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


def test_matrix_json_is_bit_exact(rng):
    for _ in range(20):
        m = random_complex(rng, int(rng.integers(1, 5)), scale=1e3) / 7
        back = io.matrix_from_json(json.loads(io.dumps(io.matrix_to_json(m))))
        assert back.tobytes() == m.tobytes()


def test_generator_and_records_round_trip(rng):
    gen = random_gkls(rng, 3, n_dissipators=2)
    back = io.generator_from_json(json.loads(io.dumps(io.generator_to_json(gen))))
    assert back.schrodinger.matrix.tobytes() == gen.schrodinger.matrix.tobytes()
    recs = simulate_measurements(gen, np.eye(3) / 3, [np.diag([1.0, 0, -1])],
                                 make_time_grid("uniform", 1.0, 3), 0.1, 5)
    again = io.records_from_json(json.loads(io.dumps(io.records_to_json(recs))))
    assert [(r.i, r.j, r.t, r.value) for r in again] == [(r.i, r.j, r.t, r.value) for r in recs]


def test_config_round_trip():
    cfg = io.load_config(CONFIGS / "ququart_demo.json")
    back = io.config_from_json(json.loads(io.dumps(io.config_to_json(cfg))))
    assert back.generator.schrodinger.matrix.tobytes() == cfg.generator.schrodinger.matrix.tobytes()
    assert back.rho0.matrix.tobytes() == cfg.rho0.matrix.tobytes()
    assert back.time_grid == cfg.time_grid and back.observables.labels == cfg.observables.labels


@pytest.mark.parametrize("mutate, path", [
    (lambda c: c.pop("generator"), "generator"),
    (lambda c: c["generator"]["hamiltonian"]["data"][0].pop(), "generator.hamiltonian.data[0]"),
    (lambda c: c["generator"]["dissipators"][0].update(rate=-1), "generator.dissipators[0].rate"),
    (lambda c: c["observables"][0]["matrix"].update(rows=3), "observables[0].matrix.data"),
    (lambda c: c["noise"].update(std="x"), "noise.std"),
    (lambda c: c["options"].update(identity_augmented="yes"), "options.identity_augmented"),
    (lambda c: c["time_grid"].update(mode="spiral"), "time_grid.mode"),
    (lambda c: c["rho0"]["data"][0][0].__setitem__(0, 5.0), "rho0"),
])
def test_config_errors_name_the_field(mutate, path):
    cfg = json.loads((CONFIGS / "ququart_demo.json").read_text())
    mutate(cfg)
    with pytest.raises(io.ConfigError) as err:
        io.config_from_json(cfg)
    assert err.value.path == path


def test_check_exit_codes(capsys):
    code, out, _ = run(["check", "--config", CONFIGS / "qubit_demo.json"], capsys)
    assert code == 0 and "span: 4/4" in out
    code, out, _ = run(["check", "--config", CONFIGS / "qubit_sx_only.json"], capsys)
    assert code == 2 and "span: 2/4" in out and "missing direction" in out
    code, _, _ = run(["check", "--config", CONFIGS / "qubit_demo.json",
                      "--identity-augmented", "false"], capsys)
    assert code == 2


def test_malformed_json_exits_one(tmp_path, capsys):
    p = write(tmp_path, "bad.json", '{"generator": {\n  "hamiltonian": [1,\n}')
    code, _, err = run(["check", "--config", p], capsys)
    assert code == 1 and "line 3" in err


def test_non_square_exits_one(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "qubit_demo.json").read_text())
    cfg["observables"][0]["matrix"] = io.matrix_to_json(np.zeros((2, 3)))
    code, _, err = run(["check", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 1 and "square" in err
    p = write(tmp_path, "m.json", io.matrix_to_json(np.zeros((1, 2))))
    code, _, _ = run(["decompose", p], capsys)
    assert code == 1


def test_missing_file_and_bad_flags(tmp_path, capsys):
    assert run(["check", "--config", tmp_path / "nope.json"], capsys)[0] == 1
    assert run(["check", "--config", CONFIGS / "qubit_demo.json", "--tol", "-1"], capsys)[0] == 1


def test_roundtrip_exit_codes(capsys):
    code, out, _ = run(["roundtrip", "--config", CONFIGS / "qubit_demo.json", "--json"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["fidelity"] >= 1 - 1e-10 and payload["hs_error"] <= 1e-8
    code, out, _ = run(["roundtrip", "--config", CONFIGS / "qubit_degenerate.json"], capsys)
    assert code == 3 and "frame rank 2 < 4" in out
    code, out, _ = run(["roundtrip", "--config", CONFIGS / "qubit_noisy.json", "--json"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["trace_distance"] > 0
    assert payload["result"]["frame_condition_number"] is not None
    code, _, _ = run(["roundtrip", "--config", CONFIGS / "qubit_sx_only.json"], capsys)
    assert code == 3


def test_roundtrip_without_rho0_exits_one(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "qubit_demo.json").read_text())
    cfg.pop("rho0")
    code, _, err = run(["roundtrip", "--config", write(tmp_path, "c.json", cfg)], capsys)
    assert code == 1 and "rho0" in err


def test_decompose_command(tmp_path, capsys):
    code, out, _ = run(["decompose", CONFIGS / "sigma_plus.json", "--json"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert np.array_equal(io.matrix_from_json(payload["Q"]), SX / 2)
    assert np.array_equal(io.matrix_from_json(payload["R"]), SY / 2)
    p = write(tmp_path, "i.json", io.matrix_to_json([[1j]]))
    payload = json.loads(run(["decompose", p, "--json"], capsys)[1])
    assert io.matrix_from_json(payload["Q"])[0, 0] == 0
    assert io.matrix_from_json(payload["R"])[0, 0] == 1
    h = SX + 0.5 * SY
    p = write(tmp_path, "h.json", io.matrix_to_json(h))
    payload = json.loads(run(["decompose", p, "--json"], capsys)[1])
    assert np.array_equal(io.matrix_from_json(payload["Q"]), h)
    assert not np.any(io.matrix_from_json(payload["R"]))


def test_demo_command(capsys):
    code, out, _ = run(["demo"], capsys)
    assert code == 0 and "qubit" in out and "ququart" in out and "PASS" in out
    code, out, _ = run(["demo", "--json"], capsys)
    payload = json.loads(out)
    rows = {r["scenario"]: r for r in payload["scenarios"]}
    assert (rows["qubit"]["observables_used"], rows["qubit"]["static_count"]) == (1, 3)
    assert (rows["ququart"]["observables_used"], rows["ququart"]["static_count"]) == (2, 15)
    assert all(r["hs_error"] <= 1e-8 for r in rows.values())
    assert all(c["verdict"] == "not_reconstructible" for c in payload["single_observable_ququart"])


@pytest.mark.parametrize("argv", [
    ["check", "--config", CONFIGS / "qubit_demo.json", "--json"],
    ["roundtrip", "--config", CONFIGS / "qubit_noisy.json", "--json"],
    ["demo", "--json", "--seed", "4"],
])
def test_json_output_is_byte_identical(argv, capsys, tmp_path):
    first = run(argv, capsys)[1]
    second = run(argv + ["--out", tmp_path / "o.json"], capsys)[1]
    assert first == second == (tmp_path / "o.json").read_text()


def test_complex_observable_notice(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "qubit_demo.json").read_text())
    cfg["observables"] = [{"label": "A", "matrix": io.matrix_to_json(LOWER)}]
    p = write(tmp_path, "c.json", cfg)
    code, out, _ = run(["check", "--config", p, "--json"], capsys)
    payload = json.loads(out)
    assert payload["labels"] == ["A.re", "A.im"]
    assert any("A.re" in n and "A.im" in n for n in payload["notices"])
    assert code == 2   # span{sx, sy} plus I misses sz
    assert run(["roundtrip", "--config", p], capsys)[0] == 3


def test_cli_matches_library(capsys):
    cfg = io.load_config(CONFIGS / "ququart_demo.json")
    rep = reconstructibility_check(cfg.generator, cfg.observables,
                                   cfg.identity_augmented, cfg.rank_tol)
    payload = json.loads(run(["check", "--config", CONFIGS / "ququart_demo.json", "--json"], capsys)[1])
    assert payload["mu"] == rep.mu
    assert payload["per_observable_dims"] == list(rep.per_observable_dims)
    assert payload["total_span_dim"] == rep.total_span_dim == 16
    code, lib, _ = workflows.run_roundtrip(cfg)
    cli = json.loads(run(["roundtrip", "--config", CONFIGS / "ququart_demo.json", "--json"], capsys)[1])
    assert io.dumps(lib) == io.dumps(cli) and code == 0


def test_overrides(capsys):
    a = json.loads(run(["roundtrip", "--config", CONFIGS / "qubit_noisy.json", "--json",
                        "--seed", "1"], capsys)[1])
    b = json.loads(run(["roundtrip", "--config", CONFIGS / "qubit_noisy.json", "--json",
                        "--seed", "2"], capsys)[1])
    assert a["noise"]["seed"] == 1 and a["hs_error"] != b["hs_error"]
    c = json.loads(run(["check", "--config", CONFIGS / "qubit_demo.json", "--json",
                        "--tol", "1e-6"], capsys)[1])
    assert c["tolerance_used"] == 1e-6


def test_scenario_configs_match_builtins():
    cfg = io.load_config(CONFIGS / "qubit_demo.json")
    ref = scenarios.qubit_demo()
    assert cfg.generator.schrodinger.matrix.tobytes() == ref.generator.schrodinger.matrix.tobytes()
    assert cfg.rho0.matrix.tobytes() == ref.rho0.matrix.tobytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "strobotomo", "check", "--config",
                           str(CONFIGS / "qubit_sx_only.json")], capture_output=True, text=True)
    assert proc.returncode == 2 and "not_reconstructible" in proc.stdout
