"""
Application settings and configuration management.
"""

import os
import logging
from dataclasses import asdict, fields
from pathlib import Path
from typing import Dict, Any, List, Optional
import yaml
from dotenv import load_dotenv

from data.models import CalibrationConfig, TechProfile, WorkloadProfile
from data.workloads import DEFAULT_WORKLOAD_PROFILES
from model.energy import DEFAULT_TECH_PROFILE
from model.event_mapping import DEFAULT_EVENT_MAPPING, EventMapping, normalize_event_mapping

load_dotenv()

ESTIMATION_GRID_SECONDS = 15.0
CALIBRATION_SECONDS = 600.0


class Settings:
    """Application settings and configuration."""

    def __init__(self, config_dir: Optional[str] = None):
        self.project_root = Path(__file__).parent.parent.parent
        self.config_dir = Path(config_dir or os.getenv("CORE_POWER_CONFIG_DIR") or self.project_root / "config")
        self.logger = logging.getLogger(__name__)

        # Initialize configuration containers
        self.calibration = {}
        self.tech_profiles = {}
        self.event_mappings = {}
        self.workloads = {}

        self._load_config()
        self._validate_config()

    def _load_config(self):
        """Load configuration from YAML files with error handling."""
        self.calibration = self._load_yaml_config(
            self.config_dir / "calibration.yaml",
            self._default_calibration,
            "calibration settings"
        )
        self.tech_profiles = self._load_yaml_config(
            self.config_dir / "tech_profiles.yaml",
            self._default_tech_profiles,
            "technology profiles"
        )
        self.event_mappings = self._load_yaml_config(
            self.config_dir / "event_mappings.yaml",
            self._default_event_mappings,
            "event mappings"
        )
        self.workloads = self._load_yaml_config(
            self.config_dir / "workload_profiles.yaml",
            self._default_workloads,
            "workload profiles"
        )

    def _load_yaml_config(self, file_path: Path, default_func, config_name: str) -> Dict[str, Any]:
        """Load a YAML config file with fallback to defaults."""
        try:
            if file_path.exists():
                with open(file_path, 'r', encoding='utf-8') as f:
                    config = yaml.safe_load(f)
                    if config is None:
                        self.logger.warning(f"Empty {config_name} file, using defaults")
                        return default_func()
                    self.logger.debug(f"Loaded {config_name} from {file_path}")
                    return config
            else:
                self.logger.warning(f"{config_name} file not found at {file_path}, using defaults")
                return default_func()
        except yaml.YAMLError as e:
            self.logger.error(f"Error parsing {config_name} YAML: {e}, using defaults")
            return default_func()
        except OSError as e:
            self.logger.error(f"Error loading {config_name}: {e}, using defaults")
            return default_func()

    def _validate_config(self):
        """Validate loaded configuration."""
        try:
            self._validate_calibration()
            self._validate_tech_profiles()
            self._validate_event_mappings()
            self._validate_workloads()
            self.logger.debug("Configuration validation completed successfully")
        except (ValueError, TypeError) as e:
            self.logger.error(f"Configuration validation failed: {e}")
            raise ValueError(str(e)) from e

    def _validate_calibration(self):
        """Validate calibration settings."""
        if 'calibration' not in self.calibration:
            raise ValueError("Missing calibration section in calibration settings")
        known = {item.name for item in fields(CalibrationConfig)}
        unknown = set(self.calibration['calibration'] or {}) - known
        if unknown:
            raise ValueError(f"Unknown calibration keys: {', '.join(sorted(unknown))}")
        self.calibration_config()

        budgets = self.calibration.get('runtime_budgets', {}) or {}
        for key in ('estimation_grid_seconds', 'calibration_seconds'):
            value = budgets.get(key)
            if value is not None and (not isinstance(value, (int, float)) or value <= 0):
                raise ValueError(f"Runtime budget {key} must be a positive number")

    def _validate_tech_profiles(self):
        """Validate technology profiles."""
        profiles = self.tech_profiles.get('profiles')
        if not isinstance(profiles, dict) or not profiles:
            raise ValueError("tech_profiles must define at least one profile")
        for name in profiles:
            self.tech_profile(name)
        default = self.default_tech_profile_name
        if default not in profiles:
            raise ValueError(f"Default technology profile {default} is not defined")

    def _validate_event_mappings(self):
        """Validate event mapping tables."""
        normalize_event_mapping(self.event_mappings)

    def _validate_workloads(self):
        """Validate workload profiles."""
        workloads = self.workloads.get('workloads')
        if not isinstance(workloads, list) or not workloads:
            raise ValueError("workload_profiles must list at least one workload")
        names = [entry.get('name') for entry in workloads]
        if len(set(names)) != len(names):
            raise ValueError("Workload names must be unique")
        self.workload_profiles()

    def _default_calibration(self) -> Dict[str, Any]:
        """Default calibration settings."""
        return {
            "calibration": asdict(CalibrationConfig()),
            "runtime_budgets": {
                "estimation_grid_seconds": ESTIMATION_GRID_SECONDS,
                "calibration_seconds": CALIBRATION_SECONDS,
            },
            "evaluation": {"max_workers": 4, "include_baselines": False},
        }

    def _default_tech_profiles(self) -> Dict[str, Any]:
        """Default technology profiles."""
        profile = asdict(DEFAULT_TECH_PROFILE)
        name = profile.pop("node_name")
        return {"default_profile": name, "profiles": {name: profile}}

    def _default_event_mappings(self) -> Dict[str, Any]:
        """Default event mapping tables in their YAML form."""
        return {
            component.value: {
                structure: {kind: [list(term) for term in terms] for kind, terms in ops.items()}
                for structure, ops in structures.items()
            }
            for component, structures in DEFAULT_EVENT_MAPPING.items()
        }

    def _default_workloads(self) -> Dict[str, Any]:
        """Default workload profiles."""
        return {"workloads": [asdict(profile) for profile in DEFAULT_WORKLOAD_PROFILES]}

    @property
    def log_level(self) -> str:
        """Logging level."""
        return os.getenv("LOG_LEVEL", "INFO")

    @property
    def default_tech_profile_name(self) -> str:
        """Technology profile used when none is given."""
        return os.getenv("CORE_POWER_TECH_PROFILE") or self.tech_profiles.get("default_profile", DEFAULT_TECH_PROFILE.node_name)

    @property
    def estimation_budget_seconds(self) -> float:
        return float(self.calibration.get("runtime_budgets", {}).get("estimation_grid_seconds", ESTIMATION_GRID_SECONDS))

    @property
    def calibration_budget_seconds(self) -> float:
        return float(self.calibration.get("runtime_budgets", {}).get("calibration_seconds", CALIBRATION_SECONDS))

    @property
    def evaluation_workers(self) -> int:
        return int(self.calibration.get("evaluation", {}).get("max_workers", 1))

    @property
    def include_baselines(self) -> bool:
        return bool(self.calibration.get("evaluation", {}).get("include_baselines", False))

    def calibration_config(self, **overrides: Any) -> CalibrationConfig:
        """CalibrationConfig from the YAML defaults with non-None overrides applied."""
        values = dict(self.calibration.get("calibration") or {})
        values.update({key: value for key, value in overrides.items() if value is not None})
        return CalibrationConfig(**values)

    def tech_profile_names(self) -> List[str]:
        return list(self.tech_profiles.get("profiles", {}))

    def tech_profile(self, name: Optional[str] = None) -> TechProfile:
        """Named technology profile, the default one when name is None."""
        name = name or self.default_tech_profile_name
        profiles = self.tech_profiles.get("profiles", {})
        if name not in profiles:
            raise ValueError(f"Unknown technology profile: {name} (known: {', '.join(profiles)})")
        return TechProfile(node_name=name, **profiles[name])

    def event_mapping(self) -> EventMapping:
        return normalize_event_mapping(self.event_mappings)

    def workload_profiles(self) -> List[WorkloadProfile]:
        return [WorkloadProfile(**entry) for entry in self.workloads.get("workloads", [])]
