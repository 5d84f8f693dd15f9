import math

import pytest

import mlob


@pytest.fixture(scope="module")
def r1():
    spec = mlob.power_law_spec(c=1.0, r=1.0, beta=1.0, delta=0.5)
    return spec, mlob.solve_boundary(spec, theta_max=60.0)


def test_critical_points_closed_form(r1):
    spec, _ = r1
    y0, yinf = mlob.critical_points(spec)
    assert y0 == pytest.approx(-0.5, abs=1e-12)
    assert yinf == pytest.approx(-1.5, abs=1e-12)


def test_boundary_against_closed_form(r1):
    _, fb = r1
    for y in (-0.6, -1.0, -1.4):
        want = (y + 0.5) * (y + 2.5) - 3.0 * math.log(y + 1.5)
        assert fb.theta_at(y) == pytest.approx(want, rel=1e-6)
    assert fb.samples()[0][:2] == (-0.5, 0.0)


def test_schedule_value_consistency(r1):
    _, fb = r1
    field = mlob.ValueField(fb)
    sc = mlob.optimal_schedule(fb, 0.0, 1.0)
    assert sc.kind == "liquidation"
    assert sc.terminal_time == pytest.approx(0.832786, abs=1e-6)
    assert sc.analytic_J(1.0, 0.5) == pytest.approx(field.value(0.0, 1.0), rel=1e-8)
    assert field.region(0.6, 1.0) == "sell2"
    assert field.value(0.6, 1.0) == pytest.approx(math.exp(0.6) - math.exp(-0.4), rel=1e-14)


def test_errors_map_to_python():
    with pytest.raises(mlob.ValidationError, match="h' > 0"):
        mlob.power_law_spec(beta=-1.0)
    spec = mlob.power_law_spec()
    fb = mlob.solve_boundary(spec, theta_max=5.0)
    with pytest.raises(mlob.RangeError):
        fb.y_at(50.0)


def test_monte_carlo_is_seeded(r1):
    spec, fb = r1
    sc = mlob.optimal_schedule(fb, 0.0, 1.0)
    cfg = mlob.SimConfig()
    cfg.mu, cfg.gamma, cfg.sigma = -0.2, 0.3, 0.3
    cfg.horizon, cfg.dt, cfg.n_paths, cfg.seed = 1.0, 1e-2, 2000, 11
    a = mlob.proceeds_estimate(spec, sc, cfg)
    b = mlob.proceeds_estimate(spec, sc, cfg)
    assert a == b
    assert abs(a["estimate"] - sc.analytic_J(1.0, 0.5)) < 4 * a["std_error"] + 1e-3
