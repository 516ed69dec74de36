"""Command-line entry point.

Subcommands: build, validate, train, eval, sweep, table1, gen-synthetic.
Exit codes follow a stable contract for scripting:

    0  success
    1  usage error (bad flags, bad configuration values)
    2  data error (missing files, malformed inputs, failed validation)
    3  numeric failure (non-finite loss, undefined metric)

An optional ``--config`` file (key=value lines, '#' comments) supplies
defaults; explicit flags override it.  All randomness is funneled through the
single --seed value.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .dataset import build_dataset_file, validate_dataset
from .errors import ConfigError, DataError, NumericError
from .reports import default_lexicon, load_lexicon
from .smoothing import SmoothingParams, score_rate_table
from .taxonomy import default_taxonomy, load_taxonomy
from .training import (
    TrainConfig,
    evaluate,
    load_model,
    read_examples,
    save_model,
    sweep,
    synthetic_noisy_generator,
    train,
    write_examples,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# Flags that may also come from the config file, with their parse type and
# built-in default.  A flag left unset falls back to config file, then here.
_SETTINGS = {
    "seed": (int, 42),
    "k": (str, "5/12"),
    "r0": (str, "1"),
    "epochs": (int, 30),
    "warmup_epochs": (int, 0),
    "lr": (float, 1e-2),
    "batch_size": (int, 32),
    "weight_decay": (float, 0.0),
    "lr_warmup_epochs": (int, 5),
    "arch": (str, "linear"),
    "hidden_width": (int, 16),
    "loss": (str, "gls"),
    "n": (int, 1000),
    "d": (int, 10),
}


def _read_config_file(path: str) -> dict[str, str]:
    source = Path(path)
    if not source.exists():
        raise DataError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, line in enumerate(source.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"config line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SETTINGS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _resolve_settings(args: argparse.Namespace) -> None:
    file_values = _read_config_file(args.config) if getattr(args, "config", None) else {}
    for key, (parse, default) in _SETTINGS.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is not None:
            continue
        if key in file_values:
            try:
                setattr(args, key, parse(file_values[key]))
            except ValueError:
                raise ConfigError(f"config key {key}: cannot parse {file_values[key]!r}")
        else:
            setattr(args, key, default)


def _fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{flag} must be a rational like 5/12 or 0.417, got {text!r}")


def _smoothing_params(args) -> SmoothingParams:
    return SmoothingParams(k=_fraction(args.k, "--k"), r0=_fraction(args.r0, "--r0"))


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise DataError(f"{what} file not found: {path}")
    return p


def _load_lexicon_arg(args):
    if args.lexicon is None:
        return default_lexicon()
    return load_lexicon(_require_file(args.lexicon, "lexicon"))


def _load_taxonomy_arg(args):
    if args.taxonomy is None:
        return default_taxonomy()
    return load_taxonomy(_require_file(args.taxonomy, "taxonomy"))


def _train_config(args, warmup_override=None, smoothing=None) -> TrainConfig:
    return TrainConfig(
        epochs=args.epochs,
        warmup_epochs=args.warmup_epochs if warmup_override is None else warmup_override,
        learning_rate=args.lr,
        weight_decay=args.weight_decay,
        batch_size=args.batch_size,
        seed=args.seed,
        smoothing_params=smoothing if smoothing is not None else _smoothing_params(args),
        lr_warmup_epochs=args.lr_warmup_epochs,
        architecture=args.arch,
        hidden_width=args.hidden_width,
        loss=args.loss,
    )


def cmd_build(args) -> int:
    stats = build_dataset_file(
        _require_file(args.input, "input"),
        args.out,
        _load_lexicon_arg(args),
        _load_taxonomy_arg(args),
        _smoothing_params(args),
    )
    print(
        f"wrote {stats.record_count} records to {args.out} "
        f"({len(stats.malformed_records)} malformed, "
        f"{stats.unmapped_phrase_count} unmapped phrases)"
    )
    return 0


def cmd_validate(args) -> int:
    stats = validate_dataset(_require_file(args.input, "input"), _smoothing_params(args))
    print(f"ok: {stats.record_count} records, all invariants hold")
    for u in sorted(stats.per_score_counts):
        print(f"  u={u:+d}: {stats.per_score_counts[u]}")
    return 0


def _metric_value(x: float):
    return None if math.isnan(x) else x


def cmd_train(args) -> int:
    examples = read_examples(_require_file(args.data, "data"))
    model, history = train(examples, _train_config(args))
    save_model(model, args.model_out)
    if args.metrics_out:
        with open(args.metrics_out, "w", encoding="utf-8", newline="\n") as fh:
            for m in history:
                fh.write(
                    json.dumps(
                        {
                            "epoch": m.epoch,
                            "mean_loss": m.mean_loss,
                            "auc": _metric_value(m.auc),
                            "samples_used": m.samples_used,
                        }
                    )
                    + "\n"
                )
            final = history[-1]
            fh.write(
                json.dumps(
                    {
                        "summary": True,
                        "epochs": len(history),
                        "final_auc": _metric_value(final.auc),
                        "final_mean_loss": final.mean_loss,
                    }
                )
                + "\n"
            )
    print(f"trained {len(history)} epochs, final auc {history[-1].auc:.6f}")
    return 0


def cmd_eval(args) -> int:
    examples = read_examples(_require_file(args.data, "data"))
    model = load_model(_require_file(args.model, "model"))
    print(f"auc {evaluate(model, examples):.6f}")
    return 0


def cmd_sweep(args) -> int:
    examples = read_examples(_require_file(args.data, "data"))
    eval_examples = (
        read_examples(_require_file(args.eval_data, "eval data"))
        if args.eval_data
        else None
    )
    k_tokens = [tok.strip() for tok in args.k_values.split(",") if tok.strip()]
    warmups = []
    for tok in args.warmup.split(","):
        tok = tok.strip()
        if tok:
            try:
                warmups.append(int(tok))
            except ValueError:
                raise ConfigError(f"--warmup entries must be integers, got {tok!r}")
    k_values = [_fraction(tok, "--k") for tok in k_tokens]
    base_params = SmoothingParams(r0=_fraction(args.r0, "--r0"))
    base = _train_config(args, warmup_override=0, smoothing=base_params)
    cells = sweep(examples, base, k_values, warmups, eval_dataset=eval_examples)
    lines = ["k\twarmup\tauc"]
    index = 0
    for token in k_tokens:
        for _ in warmups:
            cell = cells[index]
            lines.append(f"{token}\t{cell.warmup_epochs}\t{cell.auc:.6f}")
            index += 1
    output = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(output)
    print(output, end="")
    return 0


def cmd_table1(args) -> int:
    rows = score_rate_table(_smoothing_params(args))
    print(f"{'u':>3}  {'r':>7}  {'target':<19} interpretation")
    for row in rows:
        target = f"[{float(row.target[0]):.4f}, {float(row.target[1]):.4f}]"
        print(f"{row.u:>3}  {float(row.r):>7.3f}  {target:<19} {row.interpretation}")
    return 0


def _parse_profile(text: str) -> dict[int, float]:
    profile = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise ConfigError(f"--profile entries look like LEVEL:PROB, got {item!r}")
        level, _, prob = item.partition(":")
        try:
            profile[int(level)] = float(prob)
        except ValueError:
            raise ConfigError(f"cannot parse profile entry {item!r}")
    if not profile:
        raise ConfigError("--profile must contain at least one LEVEL:PROB entry")
    return profile


def cmd_gen_synthetic(args) -> int:
    data = synthetic_noisy_generator(args.n, args.d, _parse_profile(args.profile), args.seed)
    write_examples(args.out, data.examples)
    if args.truth_out:
        with open(args.truth_out, "w", encoding="utf-8", newline="\n") as fh:
            for i, label in enumerate(data.true_labels):
                fh.write(json.dumps({"index": i, "true_y": int(label)}) + "\n")
    print(f"wrote {args.n} examples to {args.out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="glsmooth", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value defaults file; flags override it")
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="echo resolved settings to stderr"
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_rate_flags(p):
        p.add_argument("--k", help="rate slope as a rational (default 5/12)")
        p.add_argument("--r0", help="rate intercept as a rational (default 1)")

    def add_train_flags(p):
        p.add_argument("--epochs", type=int)
        p.add_argument("--warmup-epochs", dest="warmup_epochs", type=int)
        p.add_argument("--lr", type=float)
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--weight-decay", dest="weight_decay", type=float)
        p.add_argument("--lr-warmup-epochs", dest="lr_warmup_epochs", type=int)
        p.add_argument("--arch", choices=["linear", "mlp_1hidden"])
        p.add_argument("--hidden-width", dest="hidden_width", type=int)
        p.add_argument("--loss", choices=["gls", "ce"])
        p.add_argument("--seed", type=int)

    p = sub.add_parser("build", help="parse reports into a labeled dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--lexicon", help="cue lexicon TSV (default: built-in)")
    p.add_argument("--taxonomy", help="phrase->category TSV (default: built-in)")
    p.add_argument("--out", required=True, help="dataset path; stats go to <out>.stats.json")
    add_rate_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="re-check every invariant of a dataset file")
    p.add_argument("--input", required=True)
    add_rate_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("train", help="train a classifier on (features, y, u) records")
    p.add_argument("--data", required=True)
    p.add_argument("--model-out", dest="model_out", required=True)
    p.add_argument("--metrics-out", dest="metrics_out")
    add_train_flags(p)
    add_rate_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="AUC of a saved model on a held-out file")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="grid over rate slopes and warm-up durations")
    p.add_argument("--data", required=True)
    p.add_argument("--eval-data", dest="eval_data")
    p.add_argument("--k", dest="k_values", required=True, help="comma-separated rationals")
    p.add_argument("--warmup", required=True, help="comma-separated epoch counts")
    p.add_argument("--out", required=True)
    add_train_flags(p)
    p.add_argument("--r0")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="print the seven-level score/rate/target mapping")
    add_rate_flags(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("gen-synthetic", help="generate a noisy synthetic training file")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--profile", required=True, help='e.g. "3:0.0,2:0.1,1:0.25,0:0.5"')
    p.add_argument("--out", required=True)
    p.add_argument("--truth-out", dest="truth_out", help="write hidden true labels here")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gen_synthetic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        _resolve_settings(args)
        if args.verbose:
            resolved = {
                key: getattr(args, key) for key in _SETTINGS if hasattr(args, key)
            }
            print(f"settings: {resolved}", file=sys.stderr)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
