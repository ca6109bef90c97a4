import logging

import numpy as np
import pytest

from core.errors import DegenerateCaseError, ParameterError, WrongCaseError
from core.model import ModelParams
from core.spectrum import (LevelIndex, free_spectrum, landau_levels, level_argument, level_map_g, merge_levels,
                           nearest_level, spin_orbit_levels, spin_orbit_levels_susy, susy_spectrum_map,
                           v_spectrum, zeeman_levels, zero_mode_value)


@pytest.mark.parametrize("kappa, threshold", [(0.0, 0.0), (1.0, -1.0), (0.5, -0.25)])
def test_free_threshold(kappa, threshold):
    line = free_spectrum(ModelParams("R", kappa))
    assert line.threshold == threshold
    assert line.purely_continuous


def test_free_spectrum_rejects_field():
    with pytest.raises(WrongCaseError):
        free_spectrum(ModelParams("R", 1.0, 1.0))


def test_landau_levels():
    assert list(landau_levels(2.0, 2).energies()) == [2.0, 6.0, 10.0]
    assert list(landau_levels(-2.0, 2).energies()) == [2.0, 6.0, 10.0]
    assert list(landau_levels(1.0, 0).energies()) == [1.0]
    with pytest.raises(WrongCaseError):
        landau_levels(0.0, 3)
    with pytest.raises(ParameterError):
        landau_levels(1.0, -1)


def test_zeeman_levels_merge_degeneracies():
    table = zeeman_levels(ModelParams("R", 0.0, 1.0, 1.0), 2)
    # |b|(2n+1) +- 1: 0, 2, 2, 4, 4, 6
    assert list(table.energies()) == pytest.approx([0.0, 2.0, 4.0, 6.0])
    assert len(table.entries[1].indices) == 2


LOWEST = {
    ("R", 1.0, 1.0, 0.0): [-1.0, 4 - 2 * np.sqrt(4.25), 1.0, 8 - 2 * np.sqrt(8.25), 10 - 2 * np.sqrt(10.25), 5.0],
    ("D", 1.0, 1.0, 0.0): [-1.0, 4 - 2 * np.sqrt(4.25), 1.0, 8 - 2 * np.sqrt(8.25), 10 - 2 * np.sqrt(10.25), 5.0],
    ("R", 0.5, 1.0, 1.0): [2 - np.sqrt(6), 4 - np.sqrt(8), 2.0, 6 - np.sqrt(10), 2 + np.sqrt(6), 8 - np.sqrt(12)],
    ("D", 0.5, 1.0, 1.0): [0.0, 2 - np.sqrt(2), 2.0, 2 + np.sqrt(2), 6 - np.sqrt(6), 8 - np.sqrt(8)],
}


@pytest.mark.parametrize("case", sorted(LOWEST))
def test_lowest_levels(case):
    params = ModelParams(*case)
    expected = sorted(LOWEST[case])
    assert spin_orbit_levels(params, 20).lowest(6) == pytest.approx(expected, abs=1e-12)


def test_spurious_root_flagged(caplog):
    params = ModelParams("R", 0.5, 1.0, 1.0)
    with caplog.at_level(logging.WARNING, logger="core.spectrum"):
        table = spin_orbit_levels(params, 3)
    spurious = [e for e in table.entries if not e.admissible]
    assert [e.energy for e in spurious] == pytest.approx([-2.0])
    assert spurious[0].note == "spurious"
    assert -2.0 not in table.energies()
    assert -2.0 in table.energies(admissible_only=False)
    assert "Spurious root" in caplog.text


def test_zero_mode_value():
    # v0 = beta sign(b) for Rashba, -beta sign(b) for Dresselhaus
    assert zero_mode_value(ModelParams("R", 1.0, -1.0, 0.0)) == pytest.approx(0.5)
    assert zero_mode_value(ModelParams("D", 1.0, 1.0, 0.0)) == pytest.approx(0.5)
    assert zero_mode_value(ModelParams("R", 0.5, 1.0, 1.0)) == pytest.approx(2.0)


def test_level_argument():
    params = ModelParams("R", 1.0, 1.0)
    assert level_argument(params, 0, 1) == 0
    assert level_argument(params, 0, -1) == 2
    assert level_argument(params.with_field(-1.0), 0, -1) == 0
    assert level_argument(ModelParams("D", 1.0, 1.0), 0, -1) == 0


def test_dresselhaus_with_reversed_field_mirrors_rashba_without_zeeman():
    for n_max in (0, 3, 8):
        rashba = spin_orbit_levels(ModelParams("R", 0.8, 1.3, 0.0), n_max).energies()
        mirrored = spin_orbit_levels(ModelParams("D", 0.8, -1.3, 0.0), n_max).energies()
        assert rashba == pytest.approx(mirrored)


def test_vanishing_coupling_approaches_shifted_landau_levels():
    b, gamma = 1.0, 0.4
    params = ModelParams("R", 1e-6, b, gamma)
    levels = spin_orbit_levels(params, 3).energies()
    expected = zeeman_levels(ModelParams("R", 0.0, b, gamma), 3).energies()
    # every level near the bottom has a Zeeman partner within O(kappa)
    for energy in levels[levels < 6.0]:
        assert np.min(np.abs(expected - energy)) < 1e-4


def test_spin_orbit_levels_need_coupling_and_field():
    with pytest.raises(DegenerateCaseError):
        spin_orbit_levels(ModelParams("R", 0.0, 1.0), 3)
    with pytest.raises(WrongCaseError):
        spin_orbit_levels(ModelParams("R", 1.0, 0.0), 3)


@pytest.mark.parametrize("case", sorted(LOWEST))
def test_susy_construction_agrees_with_closed_form(case):
    params = ModelParams(*case)
    closed = spin_orbit_levels(params, 10).energies()
    susy = spin_orbit_levels_susy(params, 10)
    low = closed[closed < 10.0]
    assert susy[susy < 10.0] == pytest.approx(low, abs=1e-10)


def test_v_spectrum_maps_onto_levels():
    params = ModelParams("D", 0.5, 1.0, 1.0)
    mapped = np.unique(np.round(level_map_g(params, v_spectrum(params, 6)), 10))
    assert set(np.round(spin_orbit_levels(params, 2).energies(), 10)) <= set(mapped)


@pytest.mark.parametrize("lower, upper, m, expected", [
    ([0.0], [0.0], 0.0, [0.0]),
    ([0.0, 2.0], [2.0], 1.0, [-np.sqrt(3), -1.0, np.sqrt(3)]),
    ([4.0], [4.0], 0.0, [-2.0, 2.0]),
])
def test_susy_spectrum_map(lower, upper, m, expected):
    assert susy_spectrum_map(lower, upper, m) == pytest.approx(expected)


def test_susy_spectrum_map_rejects_negative_input():
    with pytest.raises(ParameterError):
        susy_spectrum_map([-1.0], [0.0], 0.0)


def test_merge_levels_keeps_all_indices():
    table = merge_levels([
        (1.0, LevelIndex(0), True, "a"),
        (1.0 + 1e-14, LevelIndex(1), True, "b"),
        (2.0, LevelIndex(2), False, "spurious"),
    ])
    assert len(table) == 2
    assert [i.n for i in table.entries[0].indices] == [0, 1]
    assert list(table.energies()) == [1.0]
    frame = table.to_frame()
    assert list(frame.columns[:4]) == ["energy", "n", "s", "branch"]
    assert len(frame) == 3


def test_nearest_level():
    params = ModelParams("R", 1.0, 1.0, 0.0)
    distance, energy = nearest_level(params, 5.0 + 0.1j)
    assert energy == pytest.approx(5.0)
    assert distance == pytest.approx(0.1)
    distance, energy = nearest_level(params, 1.0)
    assert distance == pytest.approx(0.0, abs=1e-14)
    # far from any level the distance is positive
    levels = spin_orbit_levels(params, 30).energies()
    z = 1.7 + 0.0j
    assert nearest_level(params, z)[0] == pytest.approx(np.min(np.abs(levels - z)))


def test_nearest_level_free_and_zeeman():
    assert nearest_level(ModelParams("R", 1.0), -3.0) == (pytest.approx(2.0), -1.0)
    assert nearest_level(ModelParams("R", 1.0), 2.0 + 0.5j) == (0.5, 2.0)
    distance, energy = nearest_level(ModelParams("D", 0.0, 1.0, 0.5), 0.6)
    assert (distance, energy) == (pytest.approx(0.1), pytest.approx(0.5))
