"""
Analytical baselines: the uninjected base model and the base model scaled
by one factor fitted on the training configurations.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from data.models import HardwareConfig, EventCounts, TechProfile, TrainingSample
from model.energy import DEFAULT_TECH_PROFILE
from model.estimator import estimate_base
from model.event_mapping import EventMapping

logger = logging.getLogger(__name__)


def fit_scaling_baseline(samples: Sequence[TrainingSample], tech: TechProfile = DEFAULT_TECH_PROFILE,
                         mapping: Optional[EventMapping] = None) -> float:
    """
    Mean ratio of total label to base-model total over the samples.

    Raises:
        ValueError: no samples, or a base prediction that is not positive
    """
    if not samples:
        raise ValueError("fit_scaling_baseline needs at least one training sample")
    ratios = []
    for sample in samples:
        prediction = estimate_base(sample.hw, sample.events, tech, mapping).total_power
        if prediction <= 0:
            raise ValueError(f"{sample.config_id}/{sample.workload}: base prediction {prediction} is not positive")
        ratios.append(sample.total_label / prediction)
    factor = float(np.mean(ratios))
    logger.info(f"Scaled baseline factor {factor:.6g} from {len(samples)} samples")
    return factor


@dataclass(frozen=True)
class ScaledBaseline:
    """Base model output multiplied by a fitted factor."""
    factor: float = 1.0

    @classmethod
    def fit(cls, samples: Sequence[TrainingSample], tech: TechProfile = DEFAULT_TECH_PROFILE,
            mapping: Optional[EventMapping] = None) -> "ScaledBaseline":
        return cls(factor=fit_scaling_baseline(samples, tech, mapping))

    def predict(self, hw: HardwareConfig, events: EventCounts, tech: TechProfile = DEFAULT_TECH_PROFILE,
                mapping: Optional[EventMapping] = None) -> float:
        return estimate_base(hw, events, tech, mapping).total_power * self.factor
