"""
Tests for the configuration table, file parsers, dataset writer/loader and
the ingest validator.
"""

import dataclasses
import logging

import pytest

from config.parameter_registry import DUPLICATED_ARRAY, ParameterLevel, default_parameter_set
from data.config_table import (
    Family,
    bundled_config_table,
    config_by_id,
    family_configs,
    family_of,
    table_checksum,
)
from data.loader import (
    ConfigParseError,
    DatasetLoader,
    parse_design_config,
    parse_event_trace,
    parse_labels,
    parse_tech_characterization,
)
from data.models import ComponentId
from data.validator import DataValidationError, DataValidator
from data.writer import DatasetWriter, format_design_config, format_labels, format_number

from conftest import hidden_with, make_samples

TABLE_SHA256 = "389f49bdaa5b7157238f42c5cfa26e4a68f133b7042573b103b90f7b43b13754"

B1_DESIGN = """
# smallest BOOM
[hardware]
FetchWidth = 4
DecodeWidth = 1
FetchBufferEntry = 5
RobEntry = 16
IntPhyRegister = 36
FpPhyRegister = 36
LDQ/STQEntry = 4
BranchCount = 6
Mem/FpIssueWidth = 1
IntIssueWidth = 1
DCache/ICacheWay = 2
DTLBEntry = 8
MSHREntry = 2
ICacheFetchBytes = 2
"""


class TestConfigTable:
    def test_cardinality(self):
        assert len(bundled_config_table()) == 25
        assert len(family_configs(Family.BOOM)) == 15
        assert len(family_configs(Family.XIANGSHAN)) == 10

    def test_checksum(self):
        assert table_checksum() == TABLE_SHA256

    def test_b8(self):
        hw = config_by_id("B8")
        assert (hw.fetch_width, hw.decode_width, hw.rob_entry, hw.int_issue_width) == (8, 3, 96, 3)

    def test_family_of(self):
        assert family_of("X4") == Family.XIANGSHAN
        assert Family.parse("boom") == Family.BOOM
        with pytest.raises(ValueError):
            family_of("Z1")

    def test_unknown_config(self):
        with pytest.raises(ValueError, match="Unknown configuration id"):
            config_by_id("B16")


class TestDesignConfig:
    def test_b1(self):
        hw, arch, clock = parse_design_config(B1_DESIGN)
        assert hw == config_by_id("B1")
        assert arch == default_parameter_set().level_values(ParameterLevel.ARCHITECTURE)
        assert clock == 1e9

    def test_architecture_and_clock(self):
        text = B1_DESIGN + "\n[architecture]\nDCache Multi-Port Design = Duplicated Array\n" \
                           "BP Scalability = Yes\n\n[clock]\nclock_frequency = 2e9\n"
        _, arch, clock = parse_design_config(text, fill_defaults=False)
        assert arch == {"DCache Multi-Port Design": DUPLICATED_ARRAY, "BP Scalability": True}
        assert clock == 2e9

    def test_missing_key(self):
        with pytest.raises(ConfigParseError, match="missing mandatory hardware key MSHREntry"):
            parse_design_config(B1_DESIGN.replace("MSHREntry = 2\n", ""), "b1.cfg")

    def test_decode_wider_than_fetch(self):
        with pytest.raises(ConfigParseError, match=r"b1.cfg:5: DecodeWidth 5 exceeds FetchWidth 4"):
            parse_design_config(B1_DESIGN.replace("DecodeWidth = 1", "DecodeWidth = 5"), "b1.cfg")

    def test_non_positive_value(self):
        with pytest.raises(ConfigParseError, match="RobEntry must be a positive integer"):
            parse_design_config(B1_DESIGN.replace("RobEntry = 16", "RobEntry = 0"))

    def test_duplicate_key(self):
        with pytest.raises(ConfigParseError, match="duplicate key RobEntry"):
            parse_design_config(B1_DESIGN + "RobEntry = 32\n")

    def test_bad_architecture_value(self):
        with pytest.raises(ConfigParseError, match="must be Yes or No"):
            parse_design_config(B1_DESIGN + "[architecture]\nICache Scalability = maybe\n")

    def test_implementation_key_in_architecture_section(self):
        with pytest.raises(ConfigParseError, match="unknown architecture key FPU Power Scale"):
            parse_design_config(B1_DESIGN + "[architecture]\nFPU Power Scale = 2\n")

    def test_key_outside_section(self):
        with pytest.raises(ConfigParseError, match="outside a known section"):
            parse_design_config("FetchWidth = 4\n" + B1_DESIGN)


class TestEventTrace:
    def test_missing_counters_default_to_zero(self, caplog):
        with caplog.at_level(logging.WARNING):
            events = parse_event_trace("cycles = 1000\nclock_frequency = 1e9\nrob_reads = 10\n")
        assert events.rob_reads == 10
        assert events.fpu_ops == 0
        assert "counters missing" in caplog.text

    def test_cycles_mandatory(self):
        with pytest.raises(ConfigParseError, match="missing mandatory key cycles"):
            parse_event_trace("clock_frequency = 1e9\n")

    def test_zero_cycles(self):
        with pytest.raises(ConfigParseError, match="cycles must be positive"):
            parse_event_trace("cycles = 0\nclock_frequency = 1e9\n")

    def test_negative_counter(self):
        with pytest.raises(ConfigParseError, match="non-negative"):
            parse_event_trace("cycles = 10\nclock_frequency = 1e9\nloads = -1\n")

    def test_unknown_counter(self):
        with pytest.raises(ConfigParseError, match="unknown event counter l2_misses"):
            parse_event_trace("cycles = 10\nclock_frequency = 1e9\nl2_misses = 3\n")


class TestTechCharacterization:
    TEXT = ("node_name = lib28\nsram_rows = 256\nsram_width = 64\nsram_read_energy_pj = 3.5\n"
            "sram_write_energy_pj = 4.25\ndff_worst_case_power_uw = 1.5\n")

    def test_optional_frequency(self):
        char = parse_tech_characterization(self.TEXT)
        assert char.sram_shape == (256, 64)
        assert char.dff_reference_freq_hz is None

    def test_with_frequency(self):
        char = parse_tech_characterization(self.TEXT + "dff_reference_freq_hz = 2e9\n")
        assert char.dff_reference_freq_hz == 2e9

    def test_missing_energy(self):
        with pytest.raises(ConfigParseError, match="sram_write_energy_pj"):
            parse_tech_characterization(self.TEXT.replace("sram_write_energy_pj = 4.25\n", ""))


class TestLabels:
    def test_parse(self):
        labels = {component_id: 0.01 * (index + 1) for index, component_id in enumerate(ComponentId)}
        parsed, total = parse_labels(format_labels(labels, 0.66))
        assert parsed == labels
        assert total == 0.66

    def test_missing_total(self):
        text = "\n".join(f"{component_id.value} = 0.1" for component_id in ComponentId)
        with pytest.raises(ConfigParseError, match="missing total"):
            parse_labels(text)

    def test_non_positive_label(self):
        with pytest.raises(ConfigParseError, match="must be positive"):
            parse_labels("ROB = 0\n")


class TestDatasetDirectory:
    def test_write_then_load(self, tmp_path, boom_configs):
        hidden = hidden_with({"DCache Multi-Port Design": DUPLICATED_ARRAY, "FPU Power Scale": 2.5})
        samples = make_samples(hidden, boom_configs[:2], noise=0.05, seed=4)
        DatasetWriter().write(samples, str(tmp_path))
        loaded = DatasetLoader(DataValidator()).load(str(tmp_path))
        assert loaded == samples

    def test_natural_order_and_subset(self, tmp_path, boom_configs):
        configs = [boom_configs[index] for index in (0, 1, 9)]
        DatasetWriter().write(make_samples(default_parameter_set(), configs, workloads=("qsort",)), str(tmp_path))
        assert [s.config_id for s in DatasetLoader().load(str(tmp_path))] == ["B1", "B2", "B10"]
        assert [s.config_id for s in DatasetLoader().load(str(tmp_path), ["B10"])] == ["B10"]
        with pytest.raises(FileNotFoundError, match="B7"):
            DatasetLoader().load(str(tmp_path), ["B7"])

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            DatasetLoader().load(str(tmp_path / "absent"))

    def test_conflicting_designs(self, tmp_path, boom_configs):
        samples = make_samples(default_parameter_set(), boom_configs[:1], workloads=("qsort", "spmv"))
        samples[1].arch_params["BP Scalability"] = True
        with pytest.raises(ValueError, match="disagree"):
            DatasetWriter().write(samples, str(tmp_path))

    def test_format_number(self):
        assert format_number(3) == "3"
        assert format_number(0.1) == "0.1"
        with pytest.raises(TypeError):
            format_number(True)

    def test_design_text_parses_back(self, b1):
        text = format_design_config(b1, {"ICache Scalability": True}, 1.5e9)
        hw, arch, clock = parse_design_config(text, fill_defaults=False)
        assert (hw, arch, clock) == (b1, {"ICache Scalability": True}, 1.5e9)


class TestValidator:
    def samples(self, boom_configs):
        return make_samples(default_parameter_set(), boom_configs[:1], workloads=("qsort", "spmv"))

    def test_oracle_samples_pass(self, boom_configs):
        assert DataValidator().validate(self.samples(boom_configs))

    def test_label_sum_mismatch(self, boom_configs):
        samples = self.samples(boom_configs)
        samples[0].total_label *= 1.02
        validator = DataValidator()
        assert not validator.validate(samples)
        assert "apart" in validator.errors[0]

    def test_within_tolerance(self, boom_configs):
        samples = self.samples(boom_configs)
        samples[0].total_label *= 1.005
        assert DataValidator().validate(samples)

    def test_duplicate_samples(self, boom_configs):
        samples = self.samples(boom_configs)
        with pytest.raises(DataValidationError, match="Duplicate"):
            DataValidator().validate_or_raise(samples + samples[:1])

    def test_missing_component_label(self, boom_configs):
        samples = self.samples(boom_configs)
        del samples[0].component_labels[ComponentId.LSU]
        with pytest.raises(DataValidationError, match="missing labels LSU"):
            DataValidator().validate_or_raise(samples)

    def test_inconsistent_hardware(self, boom_configs):
        samples = self.samples(boom_configs)
        samples[1].hw = dataclasses.replace(samples[1].hw, rob_entry=99)
        with pytest.raises(DataValidationError, match="disagree"):
            DataValidator().validate_or_raise(samples)
