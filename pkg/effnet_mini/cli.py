"""Command-line interface for effnet-mini"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from dotenv import load_dotenv

from effnet_mini.exceptions import (
    CheckpointError,
    ConfigurationError,
    DataError,
    EffNetMiniError,
    NumericalError,
    ShapeError,
    UsageError,
)
from effnet_mini.experiment_runner import ExperimentRunner
from effnet_mini.models import AugmentConfig, ModelConfig, SynthSpec, TrainConfig
from effnet_mini.services.ablation_service import STANDARD_GRID, load_grid
from effnet_mini.services.gradcheck_service import DEFAULT_INSTANCES, GradcheckService
from effnet_mini.utils.logging_config import configure_logging
from effnet_mini.utils.settings import Settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

EXIT_CODES = (
    (ConfigurationError, EXIT_USAGE),
    (ShapeError, EXIT_USAGE),
    (UsageError, EXIT_USAGE),
    (DataError, EXIT_FAILURE),
    (CheckpointError, EXIT_FAILURE),
    (NumericalError, EXIT_FAILURE),
)


def exit_code_for(error: EffNetMiniError) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_FAILURE


def parse_synthetic(value: str) -> SynthSpec:
    """Parse N or N:SIGNAL into a synthetic dataset spec (seed applied later)"""
    count, _, signal = value.partition(":")
    try:
        n = int(count)
        strength = float(signal) if signal else SynthSpec.signal_strength
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected N or N:SIGNAL, got '{value}'") from e
    try:
        return SynthSpec(n=n, signal_strength=strength)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _add_data_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", type=Path, help="directory holding labels.csv and the patch images")
    source.add_argument("--synthetic", type=parse_synthetic, metavar="N[:SIGNAL]", help="generate N synthetic patches")


def _add_training_options(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    parser.add_argument("--batch", type=int, default=TrainConfig.batch_size)
    parser.add_argument("--lr", type=float, default=TrainConfig.base_lr)
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--train-fraction", type=float, default=TrainConfig.train_fraction)
    parser.add_argument("--out", type=Path, default=settings.output_dir)
    parser.add_argument("--no-plots", action="store_true", help="skip matplotlib charts")


def build_parser(settings: Optional[Settings] = None) -> argparse.ArgumentParser:
    settings = settings or Settings.from_env()
    parser = argparse.ArgumentParser(
        prog="effnet-mini", description="Train and ablate a miniature boosted EfficientNet"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-data", help="write a synthetic dataset as PPM files plus labels.csv")
    gen.add_argument("--n", type=int, default=SynthSpec.n)
    gen.add_argument("--pos-fraction", type=float, default=SynthSpec.pos_fraction)
    gen.add_argument("--signal", type=float, default=SynthSpec.signal_strength)
    gen.add_argument("--noise", type=float, default=SynthSpec.noise_level)
    gen.add_argument("--seed", type=int, default=settings.seed)
    gen.add_argument("--out", type=Path, default=settings.data_dir)

    train = commands.add_parser("train", help="train one configuration")
    _add_data_source(train)
    for flag in ("rcc", "rds", "ff"):
        train.add_argument(f"--{flag}", action=argparse.BooleanOptionalAction, default=True)
    train.add_argument(
        "--attention", action=argparse.BooleanOptionalAction, default=None, help="defaults to the value of --ff"
    )
    _add_training_options(train, settings)
    train.add_argument("--resume", type=Path, help="checkpoint to continue from")

    evaluate = commands.add_parser("evaluate", help="score a dataset with a checkpoint")
    evaluate.add_argument("--checkpoint", type=Path, required=True)
    evaluate.add_argument("--data", type=Path, required=True)
    evaluate.add_argument("--threshold", type=float, default=0.5)
    evaluate.add_argument("--out", type=Path, default=settings.output_dir)

    ablate = commands.add_parser("ablate", help="train one model per flag combination")
    _add_data_source(ablate)
    ablate.add_argument("--grid", default="table2", help="'table2' or a CSV file with rcc,rds,ff,attention columns")
    _add_training_options(ablate, settings)
    ablate.add_argument("--workers", type=int, default=settings.workers)

    gradcheck = commands.add_parser("gradcheck", help="compare analytic and numerical gradients")
    which = gradcheck.add_mutually_exclusive_group()
    which.add_argument("--op", choices=GradcheckService.op_names())
    which.add_argument("--all", action="store_true", help="check every op (default)")
    gradcheck.add_argument("--instances", type=int, default=DEFAULT_INSTANCES)
    gradcheck.add_argument("--seed", type=int, default=settings.seed)
    return parser


def _train_config(args: argparse.Namespace, model: Optional[ModelConfig] = None) -> TrainConfig:
    return TrainConfig(
        model=model or ModelConfig(seed=args.seed),
        augment=AugmentConfig(seed=args.seed),
        epochs=args.epochs,
        batch_size=args.batch,
        base_lr=args.lr,
        train_fraction=args.train_fraction,
        seed=args.seed,
    )


def _datasets(runner: ExperimentRunner, args: argparse.Namespace):
    synthetic = args.synthetic
    if synthetic is not None:
        synthetic = SynthSpec(n=synthetic.n, signal_strength=synthetic.signal_strength, seed=args.seed)
    return runner.prepare_datasets(args.data, synthetic, args.train_fraction, args.seed)


def run_gen_data(args: argparse.Namespace, settings: Settings) -> int:
    spec = SynthSpec(
        n=args.n, pos_fraction=args.pos_fraction, signal_strength=args.signal, noise_level=args.noise, seed=args.seed
    )
    runner = ExperimentRunner(settings.output_dir, plots=False)
    dataset = runner.gen_data(spec, args.out)
    print(f"Wrote {dataset} to {args.out}")
    return EXIT_OK


def run_train(args: argparse.Namespace, settings: Settings) -> int:
    attention = args.ff if args.attention is None else args.attention
    model = ModelConfig(rcc=args.rcc, rds=args.rds, ff=args.ff, attention=attention, seed=args.seed)
    cfg = _train_config(args, model)
    runner = ExperimentRunner(args.out, plots=settings.plots and not args.no_plots)
    train_ds, val_ds = _datasets(runner, args)
    summary = runner.train(cfg, train_ds, val_ds, resume=args.resume)
    print((runner.reports_dir / "comparison.txt").read_text(encoding="utf-8"))
    print(summary)
    return EXIT_OK


def run_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    runner = ExperimentRunner(args.out, plots=False)
    runner.evaluate(args.checkpoint, args.data, args.threshold)
    print((runner.reports_dir / "evaluation.txt").read_text(encoding="utf-8"))
    return EXIT_OK


def run_ablate(args: argparse.Namespace, settings: Settings) -> int:
    grid = STANDARD_GRID if args.grid == "table2" else load_grid(Path(args.grid))
    cfg = _train_config(args)
    runner = ExperimentRunner(args.out, plots=settings.plots and not args.no_plots, workers=args.workers)
    train_ds, val_ds = _datasets(runner, args)
    runner.ablate(cfg, grid, train_ds, val_ds)
    print((runner.reports_dir / "ablation.txt").read_text(encoding="utf-8"))
    return EXIT_OK


def run_gradcheck(args: argparse.Namespace, settings: Settings) -> int:
    names: Optional[List[str]] = [args.op] if args.op else None
    runner = ExperimentRunner(settings.output_dir, plots=False)
    outcomes = runner.gradcheck(names, args.instances, seed=args.seed)
    width = max(len(outcome.name) for outcome in outcomes)
    for outcome in outcomes:
        status = "ok" if outcome.passed else "FAIL"
        print(f"{outcome.name:<{width}}  {outcome.max_relative_error:.3e}  {status}")
    return EXIT_OK if all(outcome.passed for outcome in outcomes) else EXIT_FAILURE


COMMANDS = {
    "gen-data": run_gen_data,
    "train": run_train,
    "evaluate": run_evaluate,
    "ablate": run_ablate,
    "gradcheck": run_gradcheck,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and map library errors to exit codes"""
    try:
        settings = Settings.from_env()
    except ConfigurationError as e:
        logger.error(f"Invalid environment: {e}")
        return EXIT_USAGE
    args = build_parser(settings).parse_args(argv)
    try:
        return COMMANDS[args.command](args, settings)
    except EffNetMiniError as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed ({type(e).__name__}): {e}")
        return code


def run() -> None:
    """Console-script entry point: load .env, configure logging and exit with the subcommand's code"""
    load_dotenv()
    configure_logging()
    sys.exit(main())
