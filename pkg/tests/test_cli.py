import copy
import csv
import io
import json

import numpy as np
import pytest
from scipy import integrate

from planarcasimir import C, EPS0, SEMI_INFINITE, VACUUM
from planarcasimir.cli import (
    COLUMNS,
    ConfigError,
    columns_for,
    main,
    parse_config,
    run_job,
)
from planarcasimir.materials import PerfectMirror

W0 = C / 100e-9
ALPHA0 = 1e-39

STATIC_ATOM = {"kind": "atom", "alpha_static_C_m2_per_V": ALPHA0}
OSC_ATOM = {"kind": "atom", "alpha_scale_C_m2_per_V": ALPHA0,
            "oscillators": [{"strength_rad_s": W0, "resonance_rad_s": W0}]}


def minimal():
    return {
        "materials": {"atom": copy.deepcopy(STATIC_ATOM)},
        "stack": [{"material": "perfect_mirror"}],
        "task": "cp-potential",
        "params": {"atom": "atom"},
        "sweep": {"variable": "z", "start_m": 1e-7, "stop_m": 1e-6, "points": 10},
    }


def parse(cfg):
    return parse_config(json.dumps(cfg))


def run(cfg, tmp_path, **kw):
    out = tmp_path / "out.csv"
    status, rows = run_job(parse(cfg), str(out), **kw)
    with open(out, newline="") as fh:
        table = list(csv.reader(fh))
    return status, table, out.read_bytes()


class TestParse:
    def test_minimal_defaults(self):
        cfg = parse(minimal())
        assert cfg.task == "cp-potential"
        assert cfg.quadrature.rel_tol == 1e-8
        assert cfg.sweep.spacing == "linear"
        assert len(cfg.sweep.values()) == 10
        assert isinstance(cfg.stack[0].material, PerfectMirror)
        assert cfg.stack[0].thickness == SEMI_INFINITE

    def test_negative_thickness(self):
        cfg = minimal()
        cfg["stack"].append({"material": "vacuum", "thickness_m": -1e-9})
        with pytest.raises(ConfigError, match="thickness_m"):
            parse(cfg)

    def test_unresolved_reference(self):
        cfg = minimal()
        cfg["params"]["atom"] = "rubidium"
        with pytest.raises(ConfigError, match="rubidium"):
            parse(cfg)
        cfg = minimal()
        cfg["stack"][0]["material"] = "unobtainium"
        with pytest.raises(ConfigError, match="unobtainium"):
            parse(cfg)

    @pytest.mark.parametrize("path,key", [
        ((), "colour"), (("params",), "temperature_K"), (("sweep",), "step"),
        (("materials", "atom"), "mass_kg"), (("quadrature",), "order"),
    ])
    def test_unknown_keys(self, path, key):
        cfg = minimal()
        cfg.setdefault("quadrature", {})
        target = cfg
        for p in path:
            target = target[p]
        target[key] = 1
        with pytest.raises(ConfigError, match=key):
            parse(cfg)

    @pytest.mark.parametrize("mutate,needle", [
        (lambda c: c.update(task="stare"), "task"),
        (lambda c: c["sweep"].update(start_m=-1), "start_m"),
        (lambda c: c["sweep"].update(stop_m=1e-8), "stop_m"),
        (lambda c: c["sweep"].update(variable="d1"), "sweep.variable"),
        (lambda c: c["sweep"].update(points=0), "points"),
        (lambda c: c["sweep"].update(spacing="cubic"), "spacing"),
        (lambda c: c.pop("sweep"), "z_m"),
        (lambda c: c["params"].pop("atom"), "atom"),
        (lambda c: c["params"].update(atom="perfect_mirror"), "not an atom"),
        (lambda c: c["materials"].update(vacuum={"kind": "medium"}), "built-in"),
        (lambda c: c["materials"]["atom"].update(kind="plasma"), "kind"),
        (lambda c: c["materials"]["atom"].update(alpha_static_C_m2_per_V=0), "positive"),
        (lambda c: c.update(quadrature={"rel_tol": -1}), "quadrature"),
        (lambda c: c.update(output={"format": "hdf5"}), "output.format"),
        (lambda c: c["stack"].append({"material": "vacuum"}), "stack"),
    ])
    def test_diagnostics(self, mutate, needle):
        cfg = minimal()
        mutate(cfg)
        with pytest.raises(ConfigError, match=needle):
            parse(cfg)

    def test_invalid_json(self):
        with pytest.raises(ConfigError, match="JSON"):
            parse_config("{'task': 1}")

    def test_layer_task_geometry(self):
        cfg = {"stack": [{"material": "vacuum"}, {"material": "vacuum", "thickness_m": 1e-7},
                         {"material": "vacuum"}],
               "task": "stress-profile", "params": {"layer_index": 1, "z_m": 2e-7}}
        with pytest.raises(ConfigError, match="not inside layer"):
            parse(cfg)
        cfg["params"]["layer_index"] = 5
        with pytest.raises(ConfigError, match="layer_index"):
            parse(cfg)
        cfg["task"], cfg["params"] = "layer-force", {"layer_index": 0}
        with pytest.raises(ConfigError, match="interior"):
            parse(cfg)

    def test_atom_plate_maps_to_medium(self):
        cfg = {"materials": {"gas": dict(OSC_ATOM, eta_per_m3=1e25)},
               "stack": [{"material": "perfect_mirror"}],
               "task": "casimir-plate", "params": {"plate": "gas", "d1_m": 1e-6, "dz_m": 1e-6}}
        plate = parse(cfg).params["plate"]
        assert plate.epsilon(0.0) == pytest.approx(1e25 * ALPHA0 / EPS0, rel=1e-14)
        cfg["materials"]["gas"] = dict(STATIC_ATOM, eta_per_m3=1e25)
        with pytest.raises(ConfigError, match="plate"):
            parse(cfg)


class TestRun:
    def test_columns_and_roundtrip(self, tmp_path):
        status, table, _ = run(minimal(), tmp_path)
        assert status == 0
        assert table[0] == COLUMNS["cp-potential"]
        assert len(table) == 11
        assert all(len(r) == len(table[0]) for r in table)
        z = [float(r[0]) for r in table[1:]]
        np.testing.assert_allclose(z, np.linspace(1e-7, 1e-6, 10), rtol=1e-15)
        assert {r[-1] for r in table[1:]} == {"true"}

    def test_reduced_columns(self, tmp_path):
        cfg = minimal()
        cfg["task"] = "screening-compare"
        status, table, _ = run(cfg, tmp_path, reduced=True)
        assert table[0] == columns_for("screening-compare", True)
        row = dict(zip(table[0], table[1]))
        assert float(row["V_reduced"]) == pytest.approx(-3.0, rel=1e-9)
        assert float(row["V_screened_reduced"]) == pytest.approx(-1.0, rel=1e-9)
        cfg["task"] = "cp-potential"
        cfg2 = {"stack": [], "task": "casimir-plate",
                "materials": {"w": {"kind": "medium", "epsilon": [{"strength_rad_s": 1e16, "resonance_rad_s": 1e16}]}},
                "params": {"plate": "w", "d1_m": 1e-6, "dz_m": 1e-6}}
        with pytest.raises(ConfigError, match="reduced"):
            run_job(parse(cfg2), str(tmp_path / "x.csv"), reduced=True)

    def test_deterministic_and_thread_order(self, tmp_path):
        cfg = minimal()
        cfg["materials"]["atom"] = OSC_ATOM
        cfg["sweep"]["spacing"] = "log"
        a = run(cfg, tmp_path)[2]
        b = run(cfg, tmp_path)[2]
        c = run(cfg, tmp_path, threads=4)[2]
        assert a == b == c

    def test_screening_compare_example(self, tmp_path):
        cfg = minimal()
        cfg["materials"]["atom"] = OSC_ATOM
        cfg["task"] = "screening-compare"
        cfg["sweep"] = {"variable": "z", "start_m": 1e-7, "stop_m": 1e-4, "points": 7,
                        "spacing": "log"}
        status, table, _ = run(cfg, tmp_path)
        assert status == 0
        ratio = float(dict(zip(table[0], table[-1]))["ratio"])
        assert abs(ratio - 1 / 3) <= 1e-3

    def test_plate_matches_integrated_force_density(self, tmp_path):
        # eps_2 - 1 = 1e-3 plate built from atoms; cp-potential gives the per-atom force
        eta = 1e-3 * EPS0 / ALPHA0
        wall = {"kind": "medium", "epsilon": [{"strength_rad_s": 2 * W0, "resonance_rad_s": W0}]}
        d1, dz = 2e-7, 2e-7
        plate = {"materials": {"gas": dict(OSC_ATOM, eta_per_m3=eta), "wall": wall},
                 "stack": [{"material": "wall"}], "task": "casimir-plate",
                 "params": {"plate": "gas", "d1_m": d1, "dz_m": dz}}
        _, table, _ = run(plate, tmp_path)
        f_plate = float(dict(zip(table[0], table[1]))["F_N_per_m2"])

        cp_cfg = {"materials": {"atom": OSC_ATOM, "wall": wall}, "stack": [{"material": "wall"}],
                  "task": "cp-potential", "params": {"atom": "atom"},
                  "sweep": {"variable": "z", "start_m": d1, "stop_m": d1 + dz, "points": 41}}
        _, table, _ = run(cp_cfg, tmp_path)
        z = np.array([float(r[0]) for r in table[1:]])
        f_atom = np.array([float(r[2]) for r in table[1:]])
        f_integrated = integrate.simpson(eta * f_atom, x=z)
        assert f_plate == pytest.approx(f_integrated, rel=1e-2)

    def test_no_wall_gives_zero(self, tmp_path):
        cfg = {"materials": {"w": {"kind": "medium", "epsilon": [{"strength_rad_s": 1e16, "resonance_rad_s": 1e16}]}},
               "stack": [], "task": "casimir-plate",
               "params": {"plate": "w", "d1_m": 1e-6, "dz_m": 1e-6},
               "sweep": {"variable": "d1", "start_m": 1e-7, "stop_m": 1e-6, "points": 3}}
        status, table, _ = run(cfg, tmp_path)
        assert status == 0
        assert all(float(r[2]) == 0.0 for r in table[1:])

    def test_every_task_runs(self, tmp_path):
        med = {"kind": "medium", "epsilon": [{"strength_rad_s": 2e16, "resonance_rad_s": 2e16}]}
        mats = {"m": med, "a": OSC_ATOM}
        layers = [{"material": "m"}, {"material": "vacuum", "thickness_m": 5e-7},
                  {"material": "m", "thickness_m": 1e-7}, {"material": "vacuum"}]
        jobs = [
            {"task": "cp-screened", "stack": [{"material": "m"}], "params": {"atom": "a", "z_m": 1e-7}},
            {"task": "casimir-plate-medium", "stack": [{"material": "perfect_mirror"}],
             "params": {"medium": "m", "z_m": 1e-7, "dz_m": 1e-7}},
            {"task": "stress-profile", "stack": layers, "params": {"layer_index": 3, "z_m": 1e-7}},
            {"task": "layer-force", "stack": layers, "params": {"layer_index": 2, "gap_layer_index": 1},
             "sweep": {"variable": "gap", "start_m": 1e-7, "stop_m": 2e-7, "points": 2}},
        ]
        for job in jobs:
            status, table, _ = run(dict(job, materials=mats), tmp_path)
            assert status == 0
            assert table[0] == COLUMNS[job["task"]]
        # stress behind the last interface of the stack vanishes
        status, table, _ = run(dict(jobs[2], materials=mats), tmp_path)
        assert float(table[1][1]) == 0.0


class TestMain:
    def write(self, tmp_path, cfg):
        p = tmp_path / "job.json"
        p.write_text(json.dumps(cfg))
        return str(p)

    def test_exit_codes(self, tmp_path, capsys):
        good = self.write(tmp_path, minimal())
        assert main(["run", good, "--validate-only"]) == 0
        assert main(["run", good, "--out", str(tmp_path / "o.csv")]) == 0
        assert (tmp_path / "o.csv").read_text().startswith("z_m,V_J")
        assert main(["run", str(tmp_path / "missing.json")]) == 1
        bad = minimal()
        bad["stack"][0]["material"] = "nope"
        assert main(["run", self.write(tmp_path, bad)]) == 1
        assert main(["run", good, "--rel-tol", "-1"]) == 1

    def test_convergence_failure(self, tmp_path, capsys):
        cfg = minimal()
        cfg["materials"]["atom"] = OSC_ATOM
        cfg["stack"] = [{"material": "m"}]
        cfg["materials"]["m"] = {"kind": "medium", "epsilon": [{"strength_rad_s": 1e16, "resonance_rad_s": 1e15}]}
        cfg["quadrature"] = {"rel_tol": 1e-14, "max_evals": 1000}
        out = tmp_path / "f.csv"
        assert main(["run", self.write(tmp_path, cfg), "--out", str(out)]) == 2
        rows = list(csv.reader(io.StringIO(out.read_text())))
        assert len(rows) == 11 and all(r[-1] == "false" for r in rows[1:])

    def test_stdout_and_env_threads(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PLANARCASIMIR_THREADS", "3")
        assert main(["run", self.write(tmp_path, minimal())]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == ",".join(COLUMNS["cp-potential"])
        monkeypatch.setenv("PLANARCASIMIR_THREADS", "many")
        assert main(["run", self.write(tmp_path, minimal())]) == 1

    def test_rel_tol_override(self, tmp_path, capsys):
        assert main(["run", self.write(tmp_path, minimal()), "--rel-tol", "1e-4",
                     "--validate-only"]) == 0

    def test_config_output_path(self, tmp_path):
        cfg = minimal()
        cfg["output"] = {"path": str(tmp_path / "cfg.csv"), "format": "csv"}
        assert main(["run", self.write(tmp_path, cfg)]) == 0
        assert (tmp_path / "cfg.csv").exists()


def test_vacuum_builtin():
    cfg = parse({"stack": [{"material": "vacuum"}], "task": "cp-potential",
                 "materials": {"a": STATIC_ATOM}, "params": {"atom": "a", "z_m": 1e-7}})
    assert cfg.stack[0].material == VACUUM
