import numpy as np
import pytest

from qzak.config import RunConfig, load_config, parse_config
from qzak.errors import ConfigError

EXAMPLE = """
# gaussian pulse
sim.eps = 0.5
sim.dt = 5e-4
sim.N = 128
initial.profile = gaussian   # inline comment
initial.center = auto
limits.eps_sequence = 0.5, 0.25, 0.125
limits.adiabatic = no
estimates.which = c3
estimates.k = -0.5
estimates.l = -0.6
estimates.n_xi = 5
norms.s = 0, 1, 2
verify.slope_max = 0.1
"""


def test_parse_example():
    cfg = parse_config(EXAMPLE)
    assert cfg.sim.eps == 0.5 and cfg.sim.dt == 5e-4 and cfg.sim.N == 128
    assert cfg.sim.store_states and cfg.sim.initial.center is None
    assert cfg.limits.eps_sequence == [0.5, 0.25, 0.125] and cfg.limits.adiabatic is False
    assert cfg.which == "C3" and cfg.estimate.k == -0.5 and cfg.grid.n_xi == 5
    assert cfg.norms.s == [0.0, 1.0, 2.0]
    assert cfg.verify.slope_max == 0.1 and cfg.verify.mass_drift == 1e-10


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    ref = RunConfig()
    assert cfg.sim.N == ref.sim.N and cfg.which == "C1" and cfg.grid == ref.grid


@pytest.mark.parametrize(
    "text,field",
    [
        ("sim.Nx = 3", "sim.Nx"),
        ("solver.N = 3", "solver.N"),
        ("sim.N = many", "sim.N"),
        ("limits.adiabatic = maybe", "limits.adiabatic"),
        ("estimates.which = C9", "estimates.which"),
        ("sim.dt = -1", "sim.dt"),
        ("initial.profile = square", "initial.profile"),
        ("limits.eps_sequence = 0.1, 0.2", "limits.eps_sequence"),
        ("estimates.theta = 0.7", "estimates"),
        ("estimates.n_xi = 1", "estimates"),
        ("sim.N = 1\nsim.N = 2", "config"),
    ],
)
def test_errors_name_the_key(text, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.field == field
    assert str(exc.value).startswith(field + ":")


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("sim.T_final = 0.5\n")
    assert load_config(path).sim.T_final == 0.5
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")
