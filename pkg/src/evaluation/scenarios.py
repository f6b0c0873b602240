"""
Training scenarios: three training configurations out of a family, the rest
held out for testing.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

from data.config_table import Family, family_configs
from data.models import TrainingSample

TRAIN_CONFIG_COUNT = 3


class ScenarioKind(Enum):
    BALANCE = "balance"
    SMALL = "small"
    LARGE = "large"

    @classmethod
    def parse(cls, label: str) -> "ScenarioKind":
        for kind in cls:
            if kind.value == str(label).strip().lower():
                return kind
        raise ValueError(f"Unknown scenario: {label}")


@dataclass(frozen=True)
class Scenario:
    """Train/test split of one family's configurations."""
    family: Family
    kind: ScenarioKind
    train_config_ids: Tuple[str, ...]
    test_config_ids: Tuple[str, ...]

    def split_samples(self, samples: Sequence[TrainingSample]) -> Tuple[List[TrainingSample], List[TrainingSample]]:
        """Partition samples into (train, test); samples outside the family are ignored."""
        train_ids = set(self.train_config_ids)
        test_ids = set(self.test_config_ids)
        train = [sample for sample in samples if sample.config_id in train_ids]
        test = [sample for sample in samples if sample.config_id in test_ids]
        return train, test


def _round_half_up(value: float) -> int:
    return int(value + 0.5)


def balance_indices(count: int) -> Tuple[int, int, int]:
    """Evenly spread picks: first, middle (rounded half up) and last."""
    if count < TRAIN_CONFIG_COUNT + 1:
        raise ValueError(f"A family needs more than {TRAIN_CONFIG_COUNT} configurations, got {count}")
    return (0, _round_half_up((count - 1) / 2), count - 1)


def split_scenario(family: Family, kind: ScenarioKind) -> Scenario:
    """
    Build the scenario split of a family.

    Balance picks the smallest, middle and largest configurations, Small the
    first three and Large the last three in table order.
    """
    family = Family.parse(family.value if isinstance(family, Family) else family)
    kind = ScenarioKind.parse(kind.value if isinstance(kind, ScenarioKind) else kind)
    config_ids = [config_id for config_id, _ in family_configs(family)]
    count = len(config_ids)

    if kind == ScenarioKind.BALANCE:
        train_indices = balance_indices(count)
    elif kind == ScenarioKind.SMALL:
        train_indices = tuple(range(TRAIN_CONFIG_COUNT))
    else:
        train_indices = tuple(range(count - TRAIN_CONFIG_COUNT, count))

    train = tuple(config_ids[index] for index in train_indices)
    test = tuple(config_id for config_id in config_ids if config_id not in train)
    return Scenario(family=family, kind=kind, train_config_ids=train, test_config_ids=test)
