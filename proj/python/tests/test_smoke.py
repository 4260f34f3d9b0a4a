import math

import numpy as np
import pytest

import jacobiflow as jf


def test_connector_by_hand_in_flat_space():
    flat = jf.model("euclidean", dim=2)
    assert jf.connector(flat, [1, 2], [3, 4], [5, 6], [7, 8]) == [7, 8]
    assert jf.flip([1], [2], [3], [4]) == ([1], [3], [2], [4])


def test_sphere_geodesic_is_a_meridian():
    sphere = jf.model("sphere", radius=1.0)
    traj = jf.geodesic(sphere, [0.0, 0.0], [1.0, 0.0], t_max=1.0, h=1e-3)
    assert traj["x"].shape == (1001, 2)
    np.testing.assert_allclose(traj["x"][-1], [math.tan(1.0), 0.0], atol=1e-10)


def test_jacobi_matches_sinh_on_half_plane():
    hp = jf.model("half-plane")
    out = jf.jacobi(hp, [0.0, 1.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], t_max=2.0)
    norms = np.hypot(out["J"][:, 0], out["J"][:, 1]) / out["x"][:, 1]
    np.testing.assert_allclose(norms, np.sinh(out["t"]), atol=1e-5)
    assert out["max_residual"] <= 1e-12


def test_flow_agrees_with_classical_oracle():
    demo = jf.model("torsion-demo", beta=0.5)
    args = (demo, [0.1, -0.2], [0.6, 0.3], [0.2, 0.1], [-0.3, 0.4])
    flow = jf.jacobi(*args, t_max=2.0)
    ref = jf.classical_jacobi(*args, t_max=2.0)
    assert np.max(np.abs(flow["J"] - ref["J"])) <= 1e-6
    assert np.max(np.abs(flow["nablaJ"] - ref["P"])) <= 1e-6


def test_curvature_and_torsion():
    assert jf.sectional_curvature(jf.model("sphere"), [0.3, 0.1], [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-8)
    assert jf.torsion(jf.model("torsion_demo"), [0, 0], [1, 0], [0, 1]) == [0.0, 2.0]


def test_custom_metric_from_config():
    m = jf.model_from_config(
        {"kind": "custom", "dim": 2,
         "params": {"family": "conformal_rational", "numerator": [4], "denominator": [1, 2, 1]}})
    assert m.has_metric
    assert jf.sectional_curvature(m, [0.2, 0.2], [1, 0], [0, 1]) == pytest.approx(1.0, abs=1e-8)


def test_errors_map_to_python_exceptions():
    with pytest.raises(jf.LeftDomainError):
        jf.geodesic(jf.model("sphere"), [0.0, 0.0], [1.0, 0.0], t_max=3.0, h=0.01)
    with pytest.raises(jf.InvalidModelError):
        jf.model("sphere", radius=-1.0)
    with pytest.raises(ValueError):
        jf.model("torus")


def test_verify_is_deterministic():
    a = jf.verify("tangent_numbers", seed=42)
    b = jf.verify("tangent_numbers", seed=42, parallel=2)
    assert a == b
    assert a["passed"]
    failing = jf.verify("tangent_numbers", tol={"finite_difference_agreement": 1e-30})
    assert not failing["passed"]
