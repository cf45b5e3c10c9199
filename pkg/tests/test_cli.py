import math
import shutil
import subprocess
from dataclasses import replace

import pytest

from spinchain import IntegratorConfig, ModelParams, evolve, initial_state
from spinchain.cli import (
    CSV_COLUMNS,
    ConfigError,
    ScenarioConfig,
    detect_events,
    format_csv_value,
    main,
    parse_config_file,
    scenario_from_entries,
    scenario_rows,
)

BASE_CONF = """\
# reference scenario
J = 2.0
eta = 0.2      # anisotropy ratio
J0 = 1.0
B = 0.2
b = 2.0
gamma = 0.2
theta = 0.78539816339744828
t_max = 0.2
dt = 0.001
record_every = 50
"""


@pytest.fixture
def conf(tmp_path):
    path = tmp_path / "base.conf"
    path.write_text(BASE_CONF)
    return path


# --- config parsing -----------------------------------------------------------

def test_parse_config_types_and_comments(conf):
    entries = parse_config_file(conf)
    assert entries["J"] == 2.0
    assert entries["eta"] == 0.2          # inline comment stripped
    assert entries["record_every"] == 50
    assert isinstance(entries["record_every"], int)
    assert "mu" not in entries


@pytest.mark.parametrize("line,fragment", [
    ("bogus = 1", "unknown key"),
    ("J = 2\nJ = 3", "duplicate"),
    ("mu = 1.5", "bad value"),
    ("gamma 0.2", "expected 'key = value'"),
    ("b =", "empty value"),
    ("plot = maybe", "bad value"),
])
def test_parse_config_rejects(tmp_path, line, fragment):
    path = tmp_path / "bad.conf"
    path.write_text(line + "\n")
    with pytest.raises(ConfigError) as err:
        parse_config_file(path)
    assert fragment in str(err.value)


def test_scenario_from_entries_defaults():
    cfg = scenario_from_entries({})
    assert cfg.params == ModelParams()
    assert cfg.mode == "single-sector"
    assert cfg.t_max == 20.0


@pytest.mark.parametrize("entries", [
    {"mode": "both"},
    {"mu": 3},
    {"dt": 0.0},
    {"gamma": -1.0},
    {"record_every": 0},
])
def test_scenario_from_entries_rejects(entries):
    with pytest.raises(ConfigError):
        scenario_from_entries(entries)


def test_format_csv_value_round_trips(rng):
    for _ in range(200):
        x = float(rng.normal()) * 10.0 ** int(rng.integers(-12, 12))
        assert float(format_csv_value(x)) == x


# --- evolve -------------------------------------------------------------------

def test_evolve_writes_expected_csv(conf, tmp_path, capsys):
    out = tmp_path / "run.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(out)]) == 0
    data = out.read_bytes()
    assert b"\r" not in data
    lines = data.decode("ascii").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 5  # t = 0 plus 4 recorded steps
    first = dict(zip(CSV_COLUMNS, map(float, lines[1].split(","))))
    assert first["t"] == 0.0
    assert first["rho22"] == pytest.approx(0.5)
    assert first["rho33"] == pytest.approx(0.5)
    assert first["concurrence"] == pytest.approx(1.0)
    assert first["c2_branch"] == pytest.approx(-0.5)
    assert first["l1_coherence"] == pytest.approx(1.0)
    assert first["lqfi"] == pytest.approx(1.0)
    assert f"wrote {out}" in capsys.readouterr().out


def test_evolve_output_is_byte_deterministic(conf, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(a)]) == 0
    assert main(["evolve", "--config", str(conf), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_evolve_flag_overrides_config(conf, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(a)]) == 0
    assert main(["evolve", "--config", str(conf), "--out", str(b), "--b", "9.9"]) == 0
    assert a.read_bytes() != b.read_bytes()


def test_evolve_reports_death_and_revival(conf, tmp_path, capsys):
    out = tmp_path / "ev.csv"
    code = main(["evolve", "--config", str(conf), "--out", str(out),
                 "--theta", "0", "--t-max", "3", "--record-every", "10"])
    assert code == 0
    text = capsys.readouterr().out
    assert "ESD at t = 2.7" in text
    assert "ESB at t = 2.7" in text


def test_evolve_rotated_coherence_column(conf, tmp_path):
    out = tmp_path / "rot.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(out),
                 "--phi", str(math.pi / 8)]) == 0
    lines = out.read_text().splitlines()
    first = dict(zip(CSV_COLUMNS, map(float, lines[1].split(","))))
    # pi/8 local rotation turns the Bell pair into a four-component
    # superposition with uniform magnitudes, so the rotated reading is 3
    assert first["l1_coherence"] == pytest.approx(1.0)
    assert first["l1_rotated"] == pytest.approx(3.0)


def test_evolve_compare_reference_columns(conf, tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(out),
                 "--compare-j0-zero", "--t-max", "1.0", "--record-every", "100"]) == 0
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    assert header == CSV_COLUMNS + [c + "_ref" for c in CSV_COLUMNS[1:]]
    i23 = header.index("abs_rho23")
    r23 = header.index("abs_rho23_ref")
    i14 = header.index("abs_rho14")
    r14 = header.index("abs_rho14_ref")
    rows = [list(map(float, line.split(","))) for line in lines[1:]]
    # the inner coherence channel ignores the neighborhood coupling
    assert max(abs(r[i23] - r[r23]) for r in rows) < 1e-9
    assert max(abs(r[i14] - r[r14]) for r in rows) > 1e-4


def test_sector_mixture_averages_sectors(conf):
    entries = parse_config_file(conf)
    entries.update({"mode": "sector-mixture", "t_max": 0.2, "record_every": 100})
    cfg = scenario_from_entries(entries)
    header, rows = scenario_rows(cfg)
    icfg = IntegratorConfig(dt=cfg.dt, t_max=0.2, record_every=100)
    rho0 = initial_state(cfg.params.theta)
    by_mu = {mu: evolve(rho0, replace(cfg.params, mu=mu), icfg) for mu in (1, 0, -1)}
    for k, row in enumerate(rows):
        blend = (0.25 * by_mu[1][k][1] + 0.5 * by_mu[0][k][1] + 0.25 * by_mu[-1][k][1])
        assert row[header.index("rho11")] == pytest.approx(blend[0, 0].real, abs=1e-14)
        assert row[header.index("abs_rho14")] == pytest.approx(abs(blend[0, 3]), abs=1e-14)


def test_evolve_plot_flag_writes_svg(conf, tmp_path):
    out = tmp_path / "run.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(out), "--plot"]) == 0
    svg = out.with_suffix(".svg")
    body = svg.read_text()
    assert body.startswith("<svg ")
    assert "polyline" in body
    assert "concurrence" in body


# --- sweep --------------------------------------------------------------------

def test_sweep_grid_and_layout(conf, tmp_path):
    out = tmp_path / "sw.csv"
    assert main(["sweep", "--config", str(conf), "--param", "b",
                 "--from", "0.5", "--to", "2.5", "--count", "3",
                 "--t-max", "0.1", "--record-every", "100", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[0] == "sweep_value"
    assert lines[0].split(",")[1:] == CSV_COLUMNS
    values = [float(line.split(",")[0]) for line in lines[1:]]
    assert values == [0.5, 0.5, 1.5, 1.5, 2.5, 2.5]  # 2 samples per point


def test_sweep_deterministic_under_threads(conf, tmp_path, monkeypatch):
    serial = tmp_path / "serial.csv"
    threaded = tmp_path / "threaded.csv"
    args = ["sweep", "--config", str(conf), "--param", "J0",
            "--from", "0.0", "--to", "1.0", "--count", "4",
            "--t-max", "0.1", "--record-every", "100"]
    monkeypatch.delenv("SPINCHAIN_THREADS", raising=False)
    assert main(args + ["--out", str(serial)]) == 0
    monkeypatch.setenv("SPINCHAIN_THREADS", "3")
    assert main(args + ["--out", str(threaded)]) == 0
    assert serial.read_bytes() == threaded.read_bytes()


@pytest.mark.parametrize("extra", [
    ["--param", "nope", "--from", "0", "--to", "1", "--count", "2"],
    ["--param", "b", "--from", "0", "--to", "1", "--count", "1"],
    ["--param", "mu", "--from", "0", "--to", "1", "--count", "3"],
    ["--param", "gamma", "--from", "-2", "--to", "-1", "--count", "2"],
])
def test_sweep_rejects_bad_grids(conf, extra):
    assert main(["sweep", "--config", str(conf)] + extra) == 2


# --- events -------------------------------------------------------------------

def test_detect_events_quiet_series():
    ts = list(range(10))
    assert detect_events(ts, [1.0] * 10) == []
    assert detect_events(ts, [0.0] * 10) == []


def test_detect_events_death_only():
    ts = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    vs = [1.0, 0.5, 0.0, 0.0, 0.0, 0.0]
    events = detect_events(ts, vs)
    assert [e.kind for e in events] == ["ESD"]
    # crossing interpolated between the 0.5 and 0.0 samples
    assert events[0].t == pytest.approx(2.0, abs=1e-6)


def test_detect_events_death_and_revival():
    ts = [float(k) for k in range(8)]
    vs = [1.0, 0.0, 0.0, 0.0, 0.4, 0.8, 0.9, 1.0]
    events = detect_events(ts, vs)
    assert [e.kind for e in events] == ["ESD", "ESB"]
    assert 0.0 < events[0].t <= 1.0
    assert 3.0 <= events[1].t < 4.0


def test_detect_events_ignores_short_dips():
    ts = [float(k) for k in range(6)]
    vs = [1.0, 0.0, 0.0, 1.0, 1.0, 1.0]
    assert detect_events(ts, vs) == []


def test_detect_events_leading_dead_run_is_birth_only():
    ts = [float(k) for k in range(6)]
    vs = [0.0, 0.0, 0.0, 0.5, 0.8, 0.9]
    events = detect_events(ts, vs)
    assert [e.kind for e in events] == ["ESB"]


# --- plot ---------------------------------------------------------------------

def test_plot_subcommand(conf, tmp_path):
    csv = tmp_path / "run.csv"
    assert main(["evolve", "--config", str(conf), "--out", str(csv)]) == 0
    svg = tmp_path / "chart.svg"
    assert main(["plot", "--csv", str(csv), "--columns",
                 "concurrence,l1_coherence,lqfi", "--out", str(svg)]) == 0
    body = svg.read_text()
    assert body.count("<polyline") == 3
    for name in ("concurrence", "l1_coherence", "lqfi"):
        assert name in body


def test_plot_unknown_column(conf, tmp_path, capsys):
    csv = tmp_path / "run.csv"
    main(["evolve", "--config", str(conf), "--out", str(csv)])
    assert main(["plot", "--csv", str(csv), "--columns", "nope",
                 "--out", str(tmp_path / "x.svg")]) == 2
    assert "nope" in capsys.readouterr().err


def test_plot_empty_csv(tmp_path):
    csv = tmp_path / "empty.csv"
    csv.write_text("t,concurrence\n")
    assert main(["plot", "--csv", str(csv), "--columns", "concurrence",
                 "--out", str(tmp_path / "x.svg")]) == 2


# --- exit codes and validate ----------------------------------------------------

def test_missing_config_exit_code(tmp_path):
    assert main(["evolve", "--config", str(tmp_path / "nope.conf")]) == 2


def test_unknown_config_key_exit_code(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("bogus = 1\n")
    assert main(["evolve", "--config", str(path)]) == 2


def test_unstable_integration_exit_code(conf, tmp_path, capsys):
    code = main(["evolve", "--config", str(conf), "--out", str(tmp_path / "x.csv"),
                 "--J", "40", "--b", "80", "--dt", "0.9", "--t-max", "40",
                 "--record-every", "1"])
    assert code == 3
    assert "reduce dt" in capsys.readouterr().err


def test_validate_quick_passes(capsys):
    assert main(["validate", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 6
    assert "FAIL" not in out
    assert "lqfi variant probe" in out
    assert "diagonal-dropped = 1.0" in out


def test_validate_skips_steady_state_without_damping(capsys):
    assert main(["validate", "--quick", "--gamma", "0"]) == 0
    out = capsys.readouterr().out
    assert "SKIP" in out
    assert "no unique stationary state" in out


def test_console_script_installed():
    exe = shutil.which("spinchain")
    assert exe is not None
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("evolve", "sweep", "validate", "plot"):
        assert sub in proc.stdout
