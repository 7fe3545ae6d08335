import math

import numpy as np
import pytest

import quenchlab as ql

MINIMAL = """
[lattice]
sites = 2
levels = 2

[profiles]
J_mhz = 5
U_mhz = 200

[state]
initial = 01

[protocol]
duration_ns = 10
"""


def test_effective_coupling():
    assert ql.effective_coupling(10.8, 213.6, 120) == pytest.approx(3.8, abs=0.05)
    assert ql.effective_coupling(10.8, 400, 120) == pytest.approx(-3.8, abs=0.05)
    assert ql.bessel_j0(0.0) == 1.0


def test_sector_dimension():
    assert ql.sector_dimension(10, 6, 5) == 2002
    assert ql.sector_dimension(10, 3) == 3**10


def test_presets_validate():
    names = ql.preset_names()
    assert "fig2" in names and "fig8c" in names
    for name in names:
        summary = ql.check_config(ql.preset_text(name))
        assert summary["name"] == name
    fig2 = ql.check_config(ql.preset_text("fig2"))
    assert fig2["driven"] and fig2["duration_assumed"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(KeyError):
        ql.preset_text("nope")
    with pytest.raises(ValueError, match="unknown key"):
        ql.check_config(MINIMAL + "bogus = 1\n")
    with pytest.raises(ql.ValidationError):
        ql.check_config(MINIMAL.replace("initial = 01", "initial = 011"))


def test_two_level_reversal_is_exact():
    result = ql.run_config(MINIMAL)
    run = result["runs"]["01"]
    fidelity = run["records"]["fidelity"]
    assert abs(fidelity[-1] - 1.0) <= 1e-8
    assert run["records"]["time_ns"][-1] == pytest.approx(20.0)
    assert np.all(np.abs(run["echo"]["fidelity"] - 1.0) <= 1e-8)
    assert np.all(np.isnan(run["records"]["P2_total"]))


def test_sweep_size():
    assert ql.sweep_size(MINIMAL, ["profiles.J_mhz=4,6,8,16"]) == 4
    assert ql.sweep_size(ql.preset_text("fig4")) == 4


def test_dominant_frequency():
    dt = 0.5
    t = np.arange(400) * dt
    peak = ql.dominant_frequency(list(np.cos(2 * math.pi * 0.1 * t)), dt)
    assert peak["found"]
    assert abs(peak["frequency_mhz"] - 100.0) <= peak["resolution_mhz"]
