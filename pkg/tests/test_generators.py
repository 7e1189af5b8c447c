"""Reference venue builders: sizes, geometry ranges, determinism."""

import math

import pytest

from mmwplan import generate_venue


def test_hall_sizes():
    v = generate_venue("hall")
    assert v.n_grid == 135
    assert v.n_candidates == 20
    assert len(v.blockers) == 135


def test_hall_ceiling_slope():
    v = generate_venue("hall")
    zs = [c.position[2] for c in v.candidates]
    assert abs(min(zs) - 3.40) < 0.2
    assert abs(max(zs) - 4.37) < 0.2
    assert min(zs) < max(zs)


def test_airport_sizes_and_ceiling():
    v = generate_venue("airport")
    assert v.n_grid == 160
    assert v.n_candidates == 16
    assert all(abs(c.position[2] - 10.0) < 1e-9 for c in v.candidates)


def test_airport_back_to_back_facings():
    v = generate_venue("airport")
    facings = {round(gp.facing, 6) for gp in v.grid_positions}
    # paired rows face opposite directions
    assert len(facings) >= 2
    fs = sorted(facings)
    assert any(abs(abs(a - b) - math.pi) < 1e-6
               for a in fs for b in fs if a < b)


def test_stadium_sizes_and_heights():
    v = generate_venue("stadium")
    assert v.n_grid == 1040
    assert v.n_candidates == 16
    zs = [gp.position[2] for gp in v.grid_positions]
    assert min(zs) >= 4.5 and max(zs) <= 36.0
    assert max(zs) - min(zs) > 20.0
    assert all(abs(c.position[2] - 45.0) < 1e-9 for c in v.candidates)


def test_toy_sizes():
    v = generate_venue("toy")
    assert v.n_grid == 6
    assert v.n_candidates == 4


def test_every_seat_contributes_a_prism():
    for kind in ("hall", "airport", "stadium", "toy"):
        v = generate_venue(kind)
        owners = {b.owner for b in v.blockers if b.owner is not None}
        assert owners == set(range(v.n_grid))


def test_candidates_above_devices():
    for kind in ("hall", "airport", "stadium", "toy"):
        v = generate_venue(kind)
        top = max(gp.position[2] for gp in v.grid_positions)
        assert all(c.position[2] > top for c in v.candidates)


def test_deterministic_construction():
    for kind in ("hall", "airport", "stadium", "toy"):
        a = generate_venue(kind).to_dict()
        b = generate_venue(kind).to_dict()
        assert a == b


def test_overrides_apply():
    v = generate_venue("toy", presence_prob=0.6, orientation_std=0.4,
                       name="mini")
    assert v.name == "mini"
    assert all(gp.presence_prob == 0.6 for gp in v.grid_positions)
    assert all(gp.orientation_std == 0.4 for gp in v.grid_positions)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        generate_venue("arena")
