"""
Evaluation grid engine: runs (family, scenario, variant) calibrations and the
analytical baselines in parallel with error isolation and progress tracking.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, List, Mapping, Optional, Sequence

import pandas as pd

try:
    from ..config.settings import Settings
    from ..data.config_table import Family
    from ..data.models import CalibrationConfig, TechCharacterization, TechProfile, TrainingSample
    from ..evaluation.ablation import (
        AblationVariant,
        BaselineMethod,
        EvaluationOutcome,
        evaluate_baseline,
        run_variant,
    )
    from ..evaluation.scenarios import ScenarioKind, split_scenario
    from ..reports.csv_writer import (
        COMPONENT_METRICS_COLUMNS,
        component_metrics_rows,
        metrics_frame,
        metrics_row,
        points_frame,
    )
except ImportError:
    import sys
    from pathlib import Path
    # Add src directory to path for standalone execution
    src_path = Path(__file__).parent.parent
    if str(src_path) not in sys.path:
        sys.path.insert(0, str(src_path))

    from config.settings import Settings
    from data.config_table import Family
    from data.models import CalibrationConfig, TechCharacterization, TechProfile, TrainingSample
    from evaluation.ablation import (
        AblationVariant,
        BaselineMethod,
        EvaluationOutcome,
        evaluate_baseline,
        run_variant,
    )
    from evaluation.scenarios import ScenarioKind, split_scenario
    from reports.csv_writer import (
        COMPONENT_METRICS_COLUMNS,
        component_metrics_rows,
        metrics_frame,
        metrics_row,
        points_frame,
    )

logger = logging.getLogger(__name__)

BASELINE_VARIANT_LABEL = "-"


@dataclass(frozen=True)
class EvaluationJob:
    """One cell of the evaluation grid: a calibrated variant or a baseline."""
    family: Family
    scenario: ScenarioKind
    variant: Optional[AblationVariant] = None
    baseline: Optional[BaselineMethod] = None

    def __post_init__(self):
        if (self.variant is None) == (self.baseline is None):
            raise ValueError("EvaluationJob needs exactly one of variant and baseline")

    @property
    def variant_label(self) -> str:
        return self.variant.value if self.variant is not None else BASELINE_VARIANT_LABEL

    @property
    def label(self) -> str:
        what = self.variant.value if self.variant is not None else self.baseline.value
        return f"{self.family.value}/{self.scenario.value}/{what}"


@dataclass
class EvaluationResult:
    """Result of one grid job."""
    job: EvaluationJob
    success: bool
    processing_time: float
    outcome: Optional[EvaluationOutcome] = None
    error_message: Optional[str] = None
    error: Optional[BaseException] = None


@dataclass
class GridConfig:
    """Configuration of a grid run."""
    max_workers: int = 4
    continue_on_error: bool = False
    progress_callback: Optional[Callable[[int, int, str], None]] = None


@dataclass
class GridSummary:
    """Ordered results plus the frames the reports are written from."""
    results: List[EvaluationResult]
    metrics: pd.DataFrame
    component_metrics: pd.DataFrame
    points: pd.DataFrame
    total_processing_time: float
    failed: List[EvaluationResult] = field(default_factory=list)


def build_jobs(families: Sequence[Family], scenarios: Sequence[ScenarioKind],
               variants: Sequence[AblationVariant], include_baselines: bool = False) -> List[EvaluationJob]:
    """Grid jobs in family, scenario, variant order; baselines follow the variants of each scenario."""
    jobs = []
    for family in families:
        for scenario in scenarios:
            for variant in variants:
                jobs.append(EvaluationJob(family=family, scenario=scenario, variant=variant))
            if include_baselines:
                for method in BaselineMethod:
                    jobs.append(EvaluationJob(family=family, scenario=scenario, baseline=method))
    return jobs


class EvaluationGridProcessor:
    """
    Runs evaluation jobs on a thread pool.

    Results come back in job order whatever the completion order, so every
    report built from them is deterministic.
    """

    def __init__(self, settings: Settings, tech: Optional[TechProfile] = None,
                 calibration_config: Optional[CalibrationConfig] = None,
                 tech_char: Optional[TechCharacterization] = None,
                 arch_params: Optional[Mapping[str, Any]] = None):
        self.settings = settings
        self.logger = logging.getLogger(__name__)
        self.tech = tech or settings.tech_profile()
        self.mapping = settings.event_mapping()
        self.calibration_config = calibration_config or settings.calibration_config()
        self.tech_char = tech_char
        self.arch_params = arch_params

    def process(self, jobs: Sequence[EvaluationJob], samples: Sequence[TrainingSample],
                config: GridConfig) -> GridSummary:
        """
        Run all jobs against the samples.

        Args:
            jobs: Grid jobs
            samples: Samples covering every family named by the jobs
            config: Grid configuration

        Returns:
            GridSummary with results in job order
        """
        start_time = time.perf_counter()
        self.logger.info(f"Running {len(jobs)} evaluation jobs with {config.max_workers} workers")
        results: List[Optional[EvaluationResult]] = [None] * len(jobs)
        completed_count = 0

        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            future_to_index = {executor.submit(self._run_job, job, samples): index
                               for index, job in enumerate(jobs)}
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                result = future.result()
                results[index] = result
                completed_count += 1

                if result.success:
                    self.logger.info(f"[{completed_count}/{len(jobs)}] {result.job.label}: "
                                     f"MAPE {result.outcome.metrics.mape:.3f}% "
                                     f"({result.processing_time:.1f}s)")
                else:
                    self.logger.error(f"[{completed_count}/{len(jobs)}] {result.job.label} failed: "
                                      f"{result.error_message}")
                    if not config.continue_on_error:
                        for remaining in future_to_index:
                            remaining.cancel()
                        raise result.error

                if config.progress_callback:
                    config.progress_callback(completed_count, len(jobs), result.job.label)

        summary = self._summarize([result for result in results if result is not None],
                                  time.perf_counter() - start_time)
        self.logger.info(f"Evaluation grid finished in {summary.total_processing_time:.2f}s, "
                         f"{len(summary.failed)} failed")
        return summary

    def _run_job(self, job: EvaluationJob, samples: Sequence[TrainingSample]) -> EvaluationResult:
        start_time = time.perf_counter()
        try:
            scenario = split_scenario(job.family, job.scenario)
            if job.variant is not None:
                outcome = run_variant(job.variant, scenario, samples, self.calibration_config, self.tech,
                                      self.tech_char, self.arch_params, self.mapping)
            else:
                outcome = evaluate_baseline(job.baseline, scenario, samples, self.tech, self.mapping)
            return EvaluationResult(job=job, success=True, processing_time=time.perf_counter() - start_time,
                                    outcome=outcome)
        except (ValueError, KeyError, RuntimeError) as e:
            return EvaluationResult(job=job, success=False, processing_time=time.perf_counter() - start_time,
                                    error_message=str(e), error=e)

    def _summarize(self, results: List[EvaluationResult], processing_time: float) -> GridSummary:
        metric_rows, component_rows, point_frames = [], [], []
        for result in results:
            if not result.success:
                continue
            job, outcome = result.job, result.outcome
            labels = (job.family.value, job.scenario.value, job.variant_label, outcome.method)
            metric_rows.append(metrics_row(*labels, outcome.metrics))
            component_rows.extend(component_metrics_rows(*labels, outcome.component_metrics))
            point_frames.append(points_frame(outcome.points, extra=dict(zip(
                ("family", "scenario", "variant", "method"), labels))))

        points = pd.concat(point_frames, ignore_index=True) if point_frames else points_frame([], extra={
            "family": None, "scenario": None, "variant": None, "method": None})
        return GridSummary(
            results=results,
            metrics=metrics_frame(metric_rows),
            component_metrics=pd.DataFrame(component_rows, columns=COMPONENT_METRICS_COLUMNS),
            points=points,
            total_processing_time=processing_time,
            failed=[result for result in results if not result.success],
        )
