"""
Tests for deciding the technology-level factors.
"""

import dataclasses

import pytest

from calibration.tech_factors import (
    TECH_ARRAY_FACTOR,
    TECH_LOGIC_FACTOR,
    decide_tech_array_factor,
    decide_tech_factors,
    decide_tech_logic_factor,
)
from data.models import TechCharacterization
from data.synthetic import characterization_for_factors


@pytest.fixture
def flat_tech(tech):
    """Read and write cost the same per bit, so a 1024x64 reference array costs exactly 4 pJ."""
    return dataclasses.replace(tech, e_bit_read=0.03125, e_bit_write=0.03125)


def make_char(read=8.0, write=4.0, dff=4.0, freq=2e9):
    return TechCharacterization(node_name="lib", sram_rows=1024, sram_width=64, sram_read_energy=read,
                                sram_write_energy=write, dff_worst_case_power=dff, dff_reference_freq_hz=freq)


class TestArrayFactor:
    def test_mean_of_read_and_write_ratios(self, flat_tech):
        assert decide_tech_array_factor(make_char(), flat_tech) == 1.5

    def test_matching_library_gives_one(self, flat_tech):
        assert decide_tech_array_factor(make_char(read=4.0, write=4.0), flat_tech) == 1.0

    def test_half_and_three_quarter_ratios(self, flat_tech):
        assert decide_tech_array_factor(make_char(read=2.0, write=3.0), flat_tech) == 0.625


class TestLogicFactor:
    def test_normalizes_to_reference_frequency(self, tech):
        # 4 uW at 2 GHz against 2 uW at 1 GHz
        assert decide_tech_logic_factor(make_char(), tech) == pytest.approx(1.0)

    def test_same_frequency(self, tech):
        assert decide_tech_logic_factor(make_char(dff=3.0, freq=1e9), tech) == pytest.approx(1.5)

    def test_half_power_library(self, tech):
        model = dataclasses.replace(tech, dff_clock_toggle_power=2.4)
        char = make_char(dff=1.2, freq=tech.reference_frequency_hz)
        assert decide_tech_logic_factor(char, model) == 0.5

    def test_missing_frequency(self, tech):
        char = dataclasses.replace(make_char(), dff_reference_freq_hz=None)
        with pytest.raises(ValueError, match="dff_reference_freq_hz"):
            decide_tech_logic_factor(char, tech)


class TestDecideFactors:
    def test_keys(self, flat_tech):
        decided = decide_tech_factors(make_char(), flat_tech)
        assert set(decided) == {TECH_ARRAY_FACTOR, TECH_LOGIC_FACTOR}

    @pytest.mark.parametrize("array_factor,logic_factor", [(1.0, 1.0), (2.0, 0.5), (0.75, 3.0)])
    def test_characterization_for_factors_inverts(self, tech, array_factor, logic_factor):
        decided = decide_tech_factors(characterization_for_factors(tech, array_factor, logic_factor), tech)
        assert decided[TECH_ARRAY_FACTOR] == pytest.approx(array_factor, rel=1e-12)
        assert decided[TECH_LOGIC_FACTOR] == pytest.approx(logic_factor, rel=1e-12)

    def test_out_of_range(self, flat_tech):
        with pytest.raises(ValueError, match="outside range"):
            decide_tech_factors(make_char(read=1000.0, write=1000.0), flat_tech)

    def test_invalid_characterization(self):
        with pytest.raises(ValueError):
            make_char(read=0.0)
