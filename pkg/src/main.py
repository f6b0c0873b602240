"""
Main application entry point for the analytical core power model.

Subcommands: estimate, tech-calibrate, calibrate, evaluate, transfer and
synthesize. Exit codes: 0 on success, 1 on a parse or validation error,
2 when calibration diverges.
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

try:
    from .batch.batch_processor import EvaluationGridProcessor, GridConfig, build_jobs
    from .calibration.calibrator import ParameterDecider
    from .calibration.gradient_descent import CalibrationDivergenceError
    from .calibration.tech_factors import decide_tech_factors
    from .config.parameter_registry import (
        ParameterLevel,
        ParameterSet,
        Provenance,
        clamp,
        default_parameter_set,
        parse_parameter_file,
        serialize_parameter_set,
    )
    from .config.settings import Settings
    from .data.config_table import Family, family_configs
    from .data.loader import (
        TECH_CHAR_FILE,
        DatasetLoader,
        load_design_config,
        load_event_trace,
        load_tech_characterization,
        parse_arch_value,
        read_text,
    )
    from .data.synthetic import (
        SyntheticDatasetSpec,
        characterization_for_factors,
        generate_synthetic_dataset,
        sample_hidden_parameters,
    )
    from .data.validator import DataValidator
    from .data.writer import DatasetWriter
    from .evaluation.ablation import AblationVariant
    from .evaluation.scenarios import ScenarioKind
    from .evaluation.transfer import transfer_tech
    from .model.estimator import components_without_leakage, estimate_core
    from .reports.csv_writer import write_frame_atomic, write_power_report_csv, write_text_atomic
    from .reports.excel_generator import ExcelGenerator
    from .reports.formatter import format_metrics_table, format_power_report
    from .utils.logging_config import setup_logging
except ImportError:
    from batch.batch_processor import EvaluationGridProcessor, GridConfig, build_jobs
    from calibration.calibrator import ParameterDecider
    from calibration.gradient_descent import CalibrationDivergenceError
    from calibration.tech_factors import decide_tech_factors
    from config.parameter_registry import (
        ParameterLevel,
        ParameterSet,
        Provenance,
        clamp,
        default_parameter_set,
        parse_parameter_file,
        serialize_parameter_set,
    )
    from config.settings import Settings
    from data.config_table import Family, family_configs
    from data.loader import (
        TECH_CHAR_FILE,
        DatasetLoader,
        load_design_config,
        load_event_trace,
        load_tech_characterization,
        parse_arch_value,
        read_text,
    )
    from data.synthetic import (
        SyntheticDatasetSpec,
        characterization_for_factors,
        generate_synthetic_dataset,
        sample_hidden_parameters,
    )
    from data.validator import DataValidator
    from data.writer import DatasetWriter
    from evaluation.ablation import AblationVariant
    from evaluation.scenarios import ScenarioKind
    from evaluation.transfer import transfer_tech
    from model.estimator import components_without_leakage, estimate_core
    from reports.csv_writer import write_frame_atomic, write_power_report_csv, write_text_atomic
    from reports.excel_generator import ExcelGenerator
    from reports.formatter import format_metrics_table, format_power_report
    from utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

ALL = "all"
HIDDEN_PARAMS_FILE = "hidden_parameters.txt"
FAMILY_CHOICES = [family.value.lower() for family in Family] + [ALL]
SCENARIO_CHOICES = [kind.value for kind in ScenarioKind] + [ALL]
VARIANT_CHOICES = [variant.value for variant in AblationVariant] + [ALL]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGED = 2


def _read_parameter_file(path: str) -> ParameterSet:
    return parse_parameter_file(read_text(Path(path)))


def _write_parameter_file(path: str, parameter_set: ParameterSet) -> None:
    write_text_atomic(path, serialize_parameter_set(parameter_set))
    logger.info(f"Parameters written to {path}")


def _parse_arch_overrides(overrides: Optional[Sequence[str]]) -> Dict[str, Any]:
    """'Name=Value' pairs from --arch."""
    values: Dict[str, Any] = {}
    for item in overrides or ():
        if "=" not in item:
            raise ValueError(f"--arch expects Name=Value, got '{item}'")
        name, _, text = item.partition("=")
        values[name.strip()] = parse_arch_value(name.strip(), text.strip(), "--arch")
    return values


def _families(label: str) -> List[Family]:
    return list(Family) if label == ALL else [Family.parse(label)]


def _warn_if_over_budget(what: str, elapsed: float, budget: float) -> None:
    if elapsed > budget:
        logger.warning(f"{what} took {elapsed:.1f}s, above the {budget:.0f}s budget")


def _dataset_tech_char(data_dir: str, explicit: Optional[str]):
    """Explicit --tech-char, else the dataset's own characterization when present."""
    if explicit:
        return load_tech_characterization(explicit)
    default_path = Path(data_dir) / TECH_CHAR_FILE
    if default_path.is_file():
        logger.info(f"Using technology characterization {default_path}")
        return load_tech_characterization(str(default_path))
    logger.warning("No technology characterization given; technology factors stay at defaults")
    return None


def cmd_estimate(args: argparse.Namespace, settings: Settings) -> int:
    """Estimate the power of one design under one workload."""
    hw, design_arch, _ = load_design_config(args.design, fill_defaults=False)
    events = load_event_trace(args.events)
    params = _read_parameter_file(args.params) if args.params else default_parameter_set()
    if design_arch:
        params = params.updated(design_arch, {ParameterLevel.ARCHITECTURE: Provenance.USER})
    tech = settings.tech_profile(args.tech)

    start = time.perf_counter()
    report = estimate_core(hw, events, clamp(params), tech, settings.event_mapping())
    _warn_if_over_budget("Estimation", time.perf_counter() - start, settings.estimation_budget_seconds)
    for component_id in components_without_leakage(report):
        logger.warning(f"{component_id.value} has no leakage under these parameters")

    sys.stdout.write(format_power_report(report, title=f"{Path(args.design).name} / {Path(args.events).name}"))
    if args.csv:
        write_power_report_csv(args.csv, report)
        logger.info(f"Power report written to {args.csv}")
    return EXIT_OK


def cmd_tech_calibrate(args: argparse.Namespace, settings: Settings) -> int:
    """Decide the technology factors from a characterization file."""
    char = load_tech_characterization(args.tech_char)
    base = _read_parameter_file(args.params) if args.params else default_parameter_set()
    factors = decide_tech_factors(char, settings.tech_profile(args.tech))
    result = base.updated(factors, {ParameterLevel.TECHNOLOGY: Provenance.CALIBRATED})
    _write_parameter_file(args.out, result)
    return EXIT_OK


def _loss_log_text(calibrations) -> str:
    lines = ["component,iteration,loss"]
    for component_id, calibration in calibrations.items():
        for iteration, loss in enumerate(calibration.loss_history):
            lines.append(f"{component_id.value},{iteration},{loss!r}")
    return "\n".join(lines) + "\n"


def cmd_calibrate(args: argparse.Namespace, settings: Settings) -> int:
    """Decide all parameters from a training dataset."""
    samples = DatasetLoader(DataValidator()).load(args.train)
    tech_char = _dataset_tech_char(args.train, args.tech_char)
    arch_params = _parse_arch_overrides(args.arch) or None
    config = settings.calibration_config(rng_seed=args.seed, learning_rate=args.lr, delta=args.delta,
                                         max_iterations=args.iters, max_workers=args.workers)

    decider = ParameterDecider(settings.tech_profile(args.tech), settings.event_mapping(),
                               time_budget_seconds=settings.calibration_budget_seconds)
    decision = decider.decide(samples, arch_params, tech_char, config)
    _write_parameter_file(args.out, decision.parameters)

    loss_log = args.loss_log or f"{args.out}.loss.csv"
    write_text_atomic(loss_log, _loss_log_text(decision.calibrations))
    logger.info(f"Loss log written to {loss_log}")
    for component_id, calibration in decision.calibrations.items():
        logger.info(f"{component_id.value}: loss {calibration.initial_loss:.6g} -> {calibration.final_loss:.6g} "
                    f"in {calibration.iterations} iterations")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    """Run the scenario x variant evaluation grid."""
    samples = DatasetLoader(DataValidator()).load(args.data)
    present = {sample.config_id for sample in samples}
    families = [family for family in _families(args.family)
                if any(config_id in present for config_id, _ in family_configs(family))]
    if not families:
        raise ValueError(f"No samples of family {args.family} in {args.data}")
    scenarios = list(ScenarioKind) if args.scenario == ALL else [ScenarioKind.parse(args.scenario)]
    variants = list(AblationVariant) if args.variant == ALL else [AblationVariant.parse(args.variant)]

    config = settings.calibration_config(rng_seed=args.seed, max_iterations=args.iters)
    processor = EvaluationGridProcessor(settings, tech=settings.tech_profile(args.tech), calibration_config=config,
                                        tech_char=_dataset_tech_char(args.data, args.tech_char),
                                        arch_params=_parse_arch_overrides(args.arch) or None)
    jobs = build_jobs(families, scenarios, variants, include_baselines=args.baselines or settings.include_baselines)
    summary = processor.process(jobs, samples, GridConfig(max_workers=args.workers or settings.evaluation_workers))

    write_frame_atomic(args.out, summary.metrics)
    logger.info(f"Metrics written to {args.out}")
    if args.points:
        write_frame_atomic(args.points, summary.points)
        logger.info(f"Per-point predictions written to {args.points}")
    if args.component_metrics:
        write_frame_atomic(args.component_metrics, summary.component_metrics)
        logger.info(f"Per-component metrics written to {args.component_metrics}")
    if args.xlsx:
        ExcelGenerator().generate_report(summary.metrics, summary.component_metrics,
                                                 summary.points, args.xlsx)
    sys.stdout.write(format_metrics_table(summary.metrics))
    return EXIT_OK


def cmd_transfer(args: argparse.Namespace, settings: Settings) -> int:
    """Re-decide the technology factors for a target library."""
    calibrated = _read_parameter_file(args.params)
    target = load_tech_characterization(args.tech_char)
    _write_parameter_file(args.out, transfer_tech(calibrated, target, settings.tech_profile(args.tech)))
    return EXIT_OK


def cmd_synthesize(args: argparse.Namespace, settings: Settings) -> int:
    """Write a synthetic dataset labelled by the model under hidden parameters."""
    tech = settings.tech_profile(args.tech)
    if args.hidden_params:
        hidden = clamp(_read_parameter_file(args.hidden_params))
    else:
        hidden = sample_hidden_parameters(args.hidden_seed if args.hidden_seed is not None else args.seed)

    samples = []
    start = time.perf_counter()
    for family in _families(args.family):
        spec = SyntheticDatasetSpec(family=family, hidden_params=hidden,
                                    workload_profiles=settings.workload_profiles(),
                                    noise_rel_stddev=args.noise, rng_seed=args.seed)
        samples.extend(generate_synthetic_dataset(spec, tech, mapping=settings.event_mapping()))
    _warn_if_over_budget("Synthetic labelling", time.perf_counter() - start, settings.estimation_budget_seconds)

    tech_char = characterization_for_factors(tech, hidden["Tech Array Factor"], hidden["Tech Logic Factor"],
                                             node_name=f"synthetic-{tech.node_name}")
    DatasetWriter().write(samples, args.out, tech_char)
    _write_parameter_file(str(Path(args.out) / HIDDEN_PARAMS_FILE), hidden)
    return EXIT_OK


class CommandParser(argparse.ArgumentParser):
    """Reports usage errors as a single "error:" line with exit code 1."""

    def error(self, message: str) -> None:
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_ERROR)


def _add_tech_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tech", help="Technology profile name from config/tech_profiles.yaml "
                                       "(default: CORE_POWER_TECH_PROFILE or the configured default)")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="core-power",
        description="Analytical out-of-order core power model with three-level parameter injection",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Estimate one design/workload pair
  core-power estimate --design B1/design.cfg --events B1/qsort.events --params params.txt

  # Decide all parameters from a training dataset
  core-power calibrate --train data/boom --out params.txt --seed 0

  # Balance scenario, full variant, with baselines
  core-power evaluate --family boom --scenario balance --variant full --data data/boom --out metrics.csv --baselines
        """
    )
    parser.add_argument("--log-level", help="Logging level (default: LOG_LEVEL or INFO)")
    parser.add_argument("--log-file", help="Also log to this file")
    parser.add_argument("--config-dir", help="Directory holding the YAML configuration "
                                             "(default: CORE_POWER_CONFIG_DIR or ./config)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    estimate = subparsers.add_parser("estimate", help="Estimate core power for one design and trace")
    estimate.add_argument("--design", required=True, help="Design config file")
    estimate.add_argument("--events", required=True, help="Event trace file")
    estimate.add_argument("--params", help="Parameter file (default: all parameters at defaults)")
    _add_tech_argument(estimate)
    estimate.add_argument("--csv", help="Also write the power report as CSV")
    estimate.set_defaults(handler=cmd_estimate)

    tech_calibrate = subparsers.add_parser("tech-calibrate", help="Decide the technology-level factors")
    tech_calibrate.add_argument("--tech-char", required=True, help="Technology characterization file")
    _add_tech_argument(tech_calibrate)
    tech_calibrate.add_argument("--params", help="Parameter file to update (default: all defaults)")
    tech_calibrate.add_argument("--out", required=True, help="Output parameter file")
    tech_calibrate.set_defaults(handler=cmd_tech_calibrate)

    calibrate = subparsers.add_parser("calibrate", help="Decide all parameters from training data")
    calibrate.add_argument("--train", required=True, help="Training dataset directory")
    calibrate.add_argument("--arch", action="append", metavar="NAME=VALUE",
                           help="Architecture-level value, repeatable (default: from the design configs)")
    calibrate.add_argument("--tech-char", help="Technology characterization file "
                                               "(default: the dataset's tech_characterization.txt)")
    _add_tech_argument(calibrate)
    calibrate.add_argument("--out", required=True, help="Output parameter file")
    calibrate.add_argument("--loss-log", help="Loss log CSV (default: <out>.loss.csv)")
    calibrate.add_argument("--seed", type=int, help="Random seed recorded with the run")
    calibrate.add_argument("--lr", type=float, help="Learning rate")
    calibrate.add_argument("--delta", type=float, help="Finite-difference step for every parameter")
    calibrate.add_argument("--iters", type=int, help="Maximum descent iterations per component")
    calibrate.add_argument("--workers", type=int, help="Components calibrated in parallel")
    calibrate.set_defaults(handler=cmd_calibrate)

    evaluate = subparsers.add_parser("evaluate", help="Run scenarios, ablations and baselines")
    evaluate.add_argument("--family", required=True, choices=FAMILY_CHOICES, help="Configuration family")
    evaluate.add_argument("--scenario", default=ScenarioKind.BALANCE.value, choices=SCENARIO_CHOICES,
                          help="Training scenario (default: balance)")
    evaluate.add_argument("--variant", default=AblationVariant.FULL.value, choices=VARIANT_CHOICES,
                          help="Ablation variant (default: full)")
    evaluate.add_argument("--data", required=True, help="Dataset directory")
    evaluate.add_argument("--out", required=True, help="Metrics CSV")
    evaluate.add_argument("--points", help="Per-point prediction CSV")
    evaluate.add_argument("--component-metrics", help="Per-component metrics CSV")
    evaluate.add_argument("--xlsx", help="Evaluation workbook")
    evaluate.add_argument("--baselines", action="store_true", help="Also evaluate the analytical baselines")
    evaluate.add_argument("--arch", action="append", metavar="NAME=VALUE",
                          help="Architecture-level value, repeatable (default: from the design configs)")
    evaluate.add_argument("--tech-char", help="Technology characterization file "
                                              "(default: the dataset's tech_characterization.txt)")
    _add_tech_argument(evaluate)
    evaluate.add_argument("--seed", type=int, help="Random seed recorded with the run")
    evaluate.add_argument("--iters", type=int, help="Maximum descent iterations per component")
    evaluate.add_argument("--workers", type=int, help="Parallel grid jobs (default: from config)")
    evaluate.set_defaults(handler=cmd_evaluate)

    transfer = subparsers.add_parser("transfer", help="Transfer calibrated parameters to another library")
    transfer.add_argument("--params", required=True, help="Calibrated parameter file")
    transfer.add_argument("--tech-char", required=True, help="Target technology characterization file")
    _add_tech_argument(transfer)
    transfer.add_argument("--out", required=True, help="Output parameter file")
    transfer.set_defaults(handler=cmd_transfer)

    synthesize = subparsers.add_parser("synthesize", help="Write a synthetic labelled dataset")
    synthesize.add_argument("--family", required=True, choices=FAMILY_CHOICES, help="Configuration family")
    synthesize.add_argument("--out", required=True, help="Output dataset directory")
    synthesize.add_argument("--seed", type=int, default=0, help="Noise seed (default: 0)")
    synthesize.add_argument("--noise", type=float, default=0.0, help="Relative label noise stddev (default: 0)")
    synthesize.add_argument("--hidden-params", help="Hidden parameter file (default: sampled)")
    synthesize.add_argument("--hidden-seed", type=int, help="Seed for sampling hidden parameters (default: --seed)")
    _add_tech_argument(synthesize)
    synthesize.set_defaults(handler=cmd_synthesize)

    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv and run the selected subcommand.

    Args:
        argv: Arguments without the program name

    Returns:
        Exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR
    setup_logging(args.log_level or os.getenv("LOG_LEVEL", "INFO"), args.log_file)
    try:
        settings = Settings(args.config_dir)
        return args.handler(args, settings)
    except CalibrationDivergenceError as e:
        sys.stderr.write(f"error: calibration diverged: {e}\n")
        return EXIT_DIVERGED
    except (ValueError, KeyError, OSError) as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(f"error: {message}\n")
        return EXIT_ERROR


def main() -> None:
    try:
        sys.exit(run_command(sys.argv[1:]))
    except KeyboardInterrupt:
        logging.getLogger(__name__).info("Interrupted by user")
        sys.exit(130)


if __name__ == "__main__":
    main()
