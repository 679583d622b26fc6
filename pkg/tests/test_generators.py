import math

import pytest

from ripsaw import SolenoidParams, circle_oracle, circle_sample, random_cloud, solenoid_sample
from ripsaw.generators import solenoid_embed, solenoid_step


def test_circle_sample_n4():
    assert circle_sample(4) == [0.0, 0.25, 0.5, 0.75]


def test_circle_sample_single():
    assert circle_sample(1) == [0.0]


def test_circle_sample_32_spacing():
    angles = circle_sample(32)
    o = circle_oracle(angles)
    dists = [o.eval(i, j) for i in range(32) for j in range(i + 1, 32)]
    assert min(dists) == 1 / 32


def test_circle_rotational_symmetry():
    angles = circle_sample(12)
    o = circle_oracle(angles)
    base = sorted(o.eval(i, j) for i in range(12) for j in range(i + 1, 12))
    for shift in (1, 5):
        rotated = sorted(
            o.eval((i + shift) % 12, (j + shift) % 12)
            for i in range(12) for j in range(i + 1, 12))
        assert [pytest.approx(a) for a in base] == rotated


def test_solenoid_step_from_origin():
    assert solenoid_step(0.0, 0.0, 0.0) == (0.0, 1.0, 0.0)
    assert solenoid_embed(0.0, 1.0, 0.0) == (1 + 1 / 3, 0.0, 0.0)


def test_solenoid_step_half_turn():
    phi, x, z = solenoid_step(0.5, 0.0, 0.0)
    assert phi == 0.0
    assert x == pytest.approx(-1.0)
    assert z == pytest.approx(0.0, abs=1e-15)


def test_solenoid_deterministic():
    params = SolenoidParams(n=50, seed=123)
    assert solenoid_sample(params) == solenoid_sample(params)


def test_solenoid_inside_torus_bound():
    for p in solenoid_sample(SolenoidParams(n=400, seed=2)):
        assert p[0] ** 2 + p[1] ** 2 <= (1 + 1.5 / 3) ** 2 + 1e-12
        assert abs(p[2]) <= 1.5


def test_random_cloud_deterministic_and_in_cube():
    a = random_cloud(3, 2, 42)
    b = random_cloud(3, 2, 42)
    assert a == b
    for p in random_cloud(100, 4, 0):
        assert all(0.0 <= c < 1.0 for c in p)
    assert len(random_cloud(1, 2, 0)) == 1


def test_seeds_differ():
    assert random_cloud(5, 2, 0) != random_cloud(5, 2, 1)


def test_param_validation():
    with pytest.raises(Exception):
        circle_sample(0)
    with pytest.raises(Exception):
        SolenoidParams(n=0)
    with pytest.raises(Exception):
        SolenoidParams(n=1, iterations=0)
