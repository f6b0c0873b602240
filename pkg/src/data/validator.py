"""
Ingest checks for training samples.
"""

import logging
from typing import List, Sequence

import numpy as np

from data.models import ComponentId, TrainingSample

LABEL_SUM_TOLERANCE = 0.01


class DataValidationError(ValueError):
    """Raised when training samples fail ingest validation."""


class DataValidator:
    """Training-sample validator."""

    def __init__(self, sum_tolerance: float = LABEL_SUM_TOLERANCE):
        self.sum_tolerance = sum_tolerance
        self.logger = logging.getLogger(__name__)
        self.errors: List[str] = []

    def validate(self, samples: Sequence[TrainingSample]) -> bool:
        """
        Validate training samples.

        Args:
            samples: Samples to validate

        Returns:
            True if validation passes, False otherwise
        """
        self.logger.info(f"Starting validation of {len(samples)} samples")
        self.errors = []

        validation_results = [
            self._validate_structure(samples),
            self._validate_labels(samples),
            self._validate_label_sums(samples),
            self._validate_config_consistency(samples),
        ]

        all_passed = all(validation_results)
        if all_passed:
            self.logger.info("Sample validation passed")
        else:
            self.logger.error(f"Sample validation failed with {len(self.errors)} errors")
        return all_passed

    def validate_or_raise(self, samples: Sequence[TrainingSample]) -> None:
        if not self.validate(samples):
            raise DataValidationError("; ".join(self.errors[:5]))

    def _fail(self, message: str) -> bool:
        self.errors.append(message)
        self.logger.error(message)
        return False

    def _validate_structure(self, samples: Sequence[TrainingSample]) -> bool:
        if not samples:
            return self._fail("No training samples")
        keys = [(sample.config_id, sample.workload) for sample in samples]
        if len(set(keys)) != len(keys):
            return self._fail("Duplicate (config_id, workload) samples")
        return True

    def _validate_labels(self, samples: Sequence[TrainingSample]) -> bool:
        passed = True
        for sample in samples:
            missing = [c.value for c in ComponentId if c not in sample.component_labels]
            if missing:
                passed = self._fail(f"{sample.config_id}/{sample.workload}: missing labels {', '.join(missing)}")
                continue
            values = np.array([sample.component_labels[c] for c in ComponentId] + [sample.total_label], dtype=float)
            if not np.all(np.isfinite(values)) or np.any(values <= 0):
                passed = self._fail(f"{sample.config_id}/{sample.workload}: every label must be positive and finite")
        return passed

    def _validate_label_sums(self, samples: Sequence[TrainingSample]) -> bool:
        passed = True
        for sample in samples:
            if any(c not in sample.component_labels for c in ComponentId) or sample.total_label <= 0:
                continue
            component_sum = sum(sample.component_labels[c] for c in ComponentId)
            deviation = abs(component_sum - sample.total_label) / sample.total_label
            if deviation > self.sum_tolerance:
                passed = self._fail(
                    f"{sample.config_id}/{sample.workload}: component labels sum to {component_sum:.6g} W, "
                    f"total is {sample.total_label:.6g} W ({deviation:.2%} apart)"
                )
        return passed

    def _validate_config_consistency(self, samples: Sequence[TrainingSample]) -> bool:
        passed = True
        seen = {}
        for sample in samples:
            reference = seen.setdefault(sample.config_id, sample)
            if reference.hw != sample.hw or reference.arch_params != sample.arch_params:
                passed = self._fail(f"{sample.config_id}: samples disagree on hardware or architecture values")
        return passed
