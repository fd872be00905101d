"""Main CLI entry point for the contact-geometry workbench.

This is the Presentation Layer - handles user interaction and system initialization.
Reports and summaries go to stdout as JSON; logs go to stderr.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Tuple

# Load environment variables
from dotenv import load_dotenv

# Import from Common Layer
from common.config.constants import AppConstants
from common.config.settings import DefaultSettings, SettingsManager
from common.utils.file_utils import FileUtils
from common.utils.logger_utils import LoggerUtils

# Import from Domain and Infrastructure Layers
from domain.errors import InputFileError
from infrastructure.repositories.flow_input_repository import FlowInputRepository
from infrastructure.repositories.manifold_repository import ManifoldRepository

# Import from Service Layer
from service.orchestrator import AnalysisOrchestrator


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per operation."""
    parser = argparse.ArgumentParser(
        prog="workbench",
        description="Symbolic checks and numerical flows for contact metric structures.",
    )
    parser.add_argument("--output-dir", default=None, help="Directory for saved reports and trajectories")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--ricci-convention", choices=DefaultSettings.RICCI_CONVENTIONS, default=None)
    parser.add_argument("--d-convention", choices=DefaultSettings.D_CONVENTIONS, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    example = sub.add_parser("example", help="Print the built-in example manifold")
    example.add_argument("--output", default=None, help="Also write the example to this file")

    for name, text in (
        ("check", "Verify the structure axioms"),
        ("report", "Full analysis report"),
        ("soliton", "Solve the soliton equation for a vector field"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("file", help="Manifold definition (JSON)")
        cmd.add_argument("--save", action="store_true", help="Also write the report under the output directory")
        if name == "soliton":
            cmd.add_argument("--field", default="xi", help='"xi" or comma-separated frame components')
            cmd.add_argument("--kind", choices=DefaultSettings.FLOW_KINDS, default=DefaultSettings.DEFAULT_FLOW_KIND)
            cmd.add_argument("--p", dest="pressure", default=None, help="Conformal pressure (rational)")

    flow = sub.add_parser("flow", help="Integrate the geometric flow on a homogeneous structure")
    flow.add_argument("file", help="Manifold definition or structure constants (JSON)")
    flow.add_argument("--kind", choices=DefaultSettings.FLOW_KINDS, default=DefaultSettings.DEFAULT_FLOW_KIND)
    flow.add_argument("--p", dest="pressure", default=None, help="Conformal pressure (rational)")
    flow.add_argument("--t-max", type=float, default=None)
    flow.add_argument("--dt", type=float, default=None)
    flow.add_argument("--k0-scale", default=DefaultSettings.DEFAULT_K0_SCALE, help="Comma-separated list")
    flow.add_argument("--out", choices=DefaultSettings.OUTPUT_FORMATS, default=DefaultSettings.DEFAULT_OUTPUT_FORMAT)
    flow.add_argument("--check-sigma", default=None, help="lambda,mu of the quadratic profile")
    return parser


def parse_sigma(text: Optional[str]) -> Optional[Tuple[float, float]]:
    """Parse ``"lambda,mu"``; raises ValueError on anything else."""
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"--check-sigma expects two numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def create_settings(args: argparse.Namespace) -> SettingsManager:
    """
    Merge command-line flags over environment values.

    Raises:
        ValueError: For invalid settings
    """
    is_flow = args.command == "flow"
    has_kind = args.command in ("flow", "soliton")
    return SettingsManager(
        output_dir=args.output_dir or os.getenv("ANALYSIS_OUTPUT_DIR", DefaultSettings.DEFAULT_OUTPUT_DIR),
        ricci_convention=args.ricci_convention
        or os.getenv("RICCI_CONVENTION", DefaultSettings.DEFAULT_RICCI_CONVENTION),
        d_convention=args.d_convention or os.getenv("D_CONVENTION", DefaultSettings.DEFAULT_D_CONVENTION),
        dt=(args.dt if is_flow and args.dt is not None else float(os.getenv("FLOW_DT", DefaultSettings.DEFAULT_DT))),
        t_max=(
            args.t_max
            if is_flow and args.t_max is not None
            else float(os.getenv("FLOW_T_MAX", DefaultSettings.DEFAULT_T_MAX))
        ),
        k0_scale=args.k0_scale if is_flow else DefaultSettings.DEFAULT_K0_SCALE,
        kind=args.kind if has_kind else DefaultSettings.DEFAULT_FLOW_KIND,
        pressure=args.pressure if has_kind else None,
        worker_count=int(os.getenv("FLOW_WORKERS", str(DefaultSettings.DEFAULT_WORKER_COUNT))),
        output_format=args.out if is_flow else DefaultSettings.DEFAULT_OUTPUT_FORMAT,
        log_level=args.log_level or os.getenv("LOG_LEVEL", DefaultSettings.DEFAULT_LOG_LEVEL),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for CLI application."""
    # Look for .env in the project root (two levels up from this file)
    project_root = Path(__file__).parent.parent.parent
    load_dotenv(dotenv_path=project_root / ".env")

    args = build_parser().parse_args(argv)

    try:
        settings = create_settings(args)
        check_sigma = parse_sigma(getattr(args, "check_sigma", None))
    except ValueError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return AppConstants.EXIT_INPUT_ERROR

    logger = LoggerUtils.setup_logger("workbench", settings.get_log_level())
    LoggerUtils.propagate_to(logger, "infrastructure", "service")

    manifold_repository = ManifoldRepository(logger)

    if args.command == "example":
        definition = manifold_repository.example()
        sys.stdout.write(manifold_repository.dumps(definition))
        if args.output:
            manifold_repository.save(args.output, definition)
        return AppConstants.EXIT_PASS

    # Create orchestrator (Service Layer)
    orchestrator = AnalysisOrchestrator(settings, logger)

    if args.command == "flow":
        try:
            source = FlowInputRepository(manifold_repository, logger).load(args.file)
        except InputFileError as e:
            logger.error(str(e))
            return AppConstants.EXIT_INPUT_ERROR
        summary, code = orchestrator.flow(source, check_sigma)
        sys.stdout.write(FileUtils.dumps_json(summary))
        return code

    try:
        definition = manifold_repository.load(args.file)
    except InputFileError as e:
        logger.error(str(e))
        return AppConstants.EXIT_INPUT_ERROR

    save_path = None
    if args.save:
        FileUtils.ensure_directory_exists(settings.output_dir)
        save_path = orchestrator.path_manager.get_report_path(Path(args.file).stem)

    if args.command == "check":
        request = orchestrator.check(definition, save_path)
    elif args.command == "report":
        request = orchestrator.report(definition, save_path)
    else:
        request = orchestrator.soliton(definition, args.field, settings.kind, settings.pressure, save_path)

    sys.stdout.write(orchestrator.report_repository.dumps(request.to_document()))
    return request.exit_code()


if __name__ == "__main__":
    logging.captureWarnings(True)
    sys.exit(main())
