"""Command-line interface: one executable, nine subcommands.

    specfake synth-generate  write a seeded synthetic corpus
    specfake extract         manifest -> feature cache CSV
    specfake train           cache -> model file (seeded 80/20 split)
    specfake predict         model + image -> label line
    specfake evaluate        model + cache -> accuracy + confusion CSV
    specfake sweep           accuracy vs training-set size
    specfake bands           frequency-band accuracy grid
    specfake stats           per-class profile mean/std CSV
    specfake video-eval      per-group majority vote over a cache

Exit codes: 0 success, 1 domain error (bad data, failed training),
2 usage error.  All randomness derives from --seed (default 42, or
the SFK_SEED environment variable when set).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import experiments, kmeans as _kmeans, logistic as _logistic, svm as _svm
from .dataset import (
    SplitSpec,
    band_select,
    load_cache,
    load_image,
    load_manifest,
    split_indices,
    write_cache,
)
from .errors import DimensionError, SpecfakeError
from .kmeans import KMeansModel
from .logistic import LogisticModel
from .model_io import load_model, save_model
from .spectrum import ExtractionConfig, extract_features
from .svm import SvmModel, SvmTrainConfig
from .synth import SynthConfig, generate_synthetic

__all__ = ["main"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _int_list(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def _name_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip() != ""]


def _band_arg(value: str) -> tuple[int, int]:
    a, sep, b = value.partition(":")
    try:
        if not sep:
            raise ValueError
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FROM:TO bin indices, got {value!r}")


def _gamma_arg(value: str):
    if value == "auto":
        return "auto"
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a number or "auto", got {value!r}')


def _resolve_seed(args, parser: argparse.ArgumentParser) -> int:
    if args.seed is not None:
        if args.seed < 0:
            parser.error("--seed must be non-negative")
        return args.seed
    env = os.environ.get("SFK_SEED")
    if env is None:
        return 42
    try:
        seed = int(env)
        if seed < 0:
            raise ValueError
    except ValueError:
        parser.error(f"SFK_SEED must be a non-negative integer, got {env!r}")
    return seed


def _extraction_config(args) -> ExtractionConfig:
    return ExtractionConfig(
        log_power=not args.no_log,
        normalize_dc=not args.no_norm,
        target_len=args.target_len,
        epsilon=args.epsilon,
    )


def _add_seed_flag(p) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (default: $SFK_SEED or 42)")


def _add_extraction_flags(p) -> None:
    p.add_argument("--target-len", type=int, default=300,
                   help="resample profiles to this many bins; 0 keeps native (default 300)")
    p.add_argument("--no-log", action="store_true",
                   help="skip log scaling of the power map")
    p.add_argument("--no-norm", action="store_true",
                   help="skip normalization by the zero-frequency bin")
    p.add_argument("--epsilon", type=float, default=1e-12,
                   help="guard value for log and normalization (default 1e-12)")


def _add_split_flags(p) -> None:
    p.add_argument("--test-frac", type=float, default=0.2,
                   help="test fraction of the seeded split (default 0.2)")


def _add_classifier_flags(p) -> None:
    p.add_argument("--classifier", choices=("lr", "svm", "kmeans"), default="svm",
                   help="classifier kind (default svm)")
    p.add_argument("--c", type=float, default=None,
                   help="SVM penalty C (default 1.0; svm only)")
    p.add_argument("--gamma", type=_gamma_arg, default=None,
                   help='SVM RBF width, a number or "auto" = 1/d (default auto; svm only)')
    p.add_argument("--lr-rate", type=float, default=None,
                   help="gradient ascent step size (default 0.1; lr only)")
    p.add_argument("--iters", type=int, default=None,
                   help="gradient ascent iteration cap (default 10000; lr only)")
    p.add_argument("--k", type=int, default=None,
                   help="number of clusters (default 2; kmeans only)")
    p.add_argument("--restarts", type=int, default=None,
                   help="k-means restarts (default 10; kmeans only)")


def _check_classifier_flags(args, parser) -> None:
    given = {
        "svm": [("--c", args.c), ("--gamma", args.gamma)],
        "lr": [("--lr-rate", args.lr_rate), ("--iters", args.iters)],
        "kmeans": [("--k", args.k), ("--restarts", args.restarts)],
    }
    for kind, flags in given.items():
        if args.classifier == kind:
            continue
        for name, value in flags:
            if value is not None:
                parser.error(f"{name} is only valid with --classifier {kind}")


def _train_model(args, Xtr: np.ndarray, ytr: np.ndarray, seed: int):
    if args.classifier == "lr":
        return _logistic.fit(
            Xtr, ytr,
            learning_rate=args.lr_rate if args.lr_rate is not None else 0.1,
            max_iters=args.iters if args.iters is not None else 10000,
        )
    if args.classifier == "svm":
        cfg = SvmTrainConfig(
            C=args.c if args.c is not None else 1.0,
            gamma=args.gamma if args.gamma is not None else "auto",
            seed=seed,
        )
        return _svm.fit(Xtr, ytr, cfg)
    centroids = _kmeans.fit(
        Xtr, K=args.k if args.k is not None else 2, seed=seed,
        restarts=args.restarts if args.restarts is not None else 10,
    )
    return _kmeans.assign_labels(centroids, Xtr, ytr)


def _banded_cache(args, cache):
    if getattr(args, "band", None) is not None:
        return band_select(cache, args.band[0], args.band[1])
    return cache


def _cmd_synth_generate(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    cfg = SynthConfig(image_size=args.size, count=args.count, seed=seed,
                      exponent=args.exponent, cutoff=args.cutoff,
                      frames_per_group=args.frames_per_group)
    manifest = generate_synthetic(cfg, args.out)
    print(f"wrote {len(manifest.entries)} images and manifest.csv to {args.out}")
    return 0


def _cmd_extract(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    manifest = load_manifest(args.manifest)
    failures: list[tuple[str, str]] = []
    cache = write_cache(manifest, _extraction_config(args), args.out,
                        seed=seed, jobs=args.jobs, failures=failures)
    for path, reason in failures:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    print(f"extracted {len(cache.paths)}/{len(manifest.entries)} profiles "
          f"(d={cache.d}) to {args.out}")
    return 1 if failures else 0


def _cmd_train(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    _check_classifier_flags(args, parser)
    cache = _banded_cache(args, load_cache(args.cache))
    tr, _ = split_indices(cache.labels, cache.groups,
                          SplitSpec(test_fraction=args.test_frac, seed=seed))
    model = _train_model(args, cache.features[tr], cache.labels[tr], seed)
    save_model(model, args.model)
    print(f"trained {args.classifier} on {len(tr)} samples, wrote {args.model}")
    return 0


def _decision_value(model, features: np.ndarray) -> tuple[int, float]:
    if isinstance(model, LogisticModel):
        prob = float(_logistic.sigmoid(model.decision(features)))
        return (1 if prob >= 0.5 else 0), prob
    if isinstance(model, SvmModel):
        value = float(model.decision(features)[0])
        return (1 if value >= 0.0 else 0), value
    if isinstance(model, KMeansModel):
        x = np.atleast_2d(features)
        d2 = np.sum((model.centroids - x) ** 2, axis=1)
        cluster = int(np.argmin(d2))
        label = int(model.labels[cluster])
        other = d2[model.labels != label]
        margin = float(np.min(other) - d2[cluster]) if other.size else 0.0
        return label, margin
    raise DimensionError(f"unsupported model type {type(model).__name__}")


def _cmd_predict(args, parser) -> int:
    if args.band is not None and args.target_len != 0:
        parser.error("--band requires --target-len 0 (native-resolution bins)")
    model = load_model(args.model)
    profile = extract_features(load_image(args.image), _extraction_config(args))
    if args.band is not None:
        a, b = args.band
        if not 0 <= a < b <= profile.shape[0]:
            parser.error(f"--band must lie within [0, {profile.shape[0]}]")
        profile = profile[a:b]
    label, value = _decision_value(model, profile)
    print(f"{args.image} {'real' if label == 1 else 'fake'} {_fmt(value)}")
    return 0


def _cmd_evaluate(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    cache = _banded_cache(args, load_cache(args.cache))
    model = load_model(args.model)
    _, te = split_indices(cache.labels, cache.groups,
                          SplitSpec(test_fraction=args.test_frac, seed=seed))
    preds = np.asarray(model.predict(cache.features[te]))
    truth = cache.labels[te]
    confusion = np.zeros((2, 2), dtype=np.int64)
    np.add.at(confusion, (truth, preds), 1)
    accuracy = float(np.trace(confusion) / len(truth))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# cache={args.cache}, model={args.model}, seed={seed}, "
                     f"test_frac={args.test_frac}\n")
            fh.write("true,predicted,count\n")
            for t in (0, 1):
                for p in (0, 1):
                    fh.write(f"{t},{p},{confusion[t, p]}\n")
    print(f"accuracy={_fmt(accuracy)}")
    return 0


def _cmd_sweep(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    for name in args.classifiers:
        if name not in experiments.CLASSIFIER_NAMES:
            parser.error(f"unknown classifier {name!r} in --classifiers")
    cache = load_cache(args.cache)
    spec = SplitSpec(test_fraction=args.test_frac, seed=seed)
    result = experiments.sample_size_sweep(cache, args.sizes, args.classifiers,
                                           spec, repeats=args.repeats)
    echo = {
        "cache": args.cache, "seed": seed, "test_frac": args.test_frac,
        "repeats": args.repeats, "sizes": ":".join(map(str, args.sizes)),
        "classifiers": ":".join(args.classifiers),
    }
    experiments.write_sweep_csv(result, args.out, echo)
    for row in result.rows:
        print(f"size={row.size} {row.classifier} accuracy={_fmt(row.accuracy)} "
              f"min={_fmt(row.min_accuracy)} max={_fmt(row.max_accuracy)}")
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def _cmd_bands(args, parser) -> int:
    seed = _resolve_seed(args, parser)
    cache = load_cache(args.cache)
    breakpoints = args.breakpoints
    if breakpoints is None:
        breakpoints = experiments.default_breakpoints(cache.d)
    spec = SplitSpec(test_fraction=args.test_frac, seed=seed)
    result = experiments.band_grid(cache, breakpoints, args.classifier, spec)
    echo = {
        "cache": args.cache, "seed": seed, "test_frac": args.test_frac,
        "classifier": args.classifier,
        "breakpoints": ":".join(map(str, result.breakpoints)),
    }
    experiments.write_bandgrid_csv(result, args.out, echo)
    print(f"wrote {len(result.accuracies)} band cells to {args.out}")
    return 0


def _cmd_stats(args, parser) -> int:
    cache = load_cache(args.cache)
    stats = experiments.class_stats(cache)
    experiments.write_stats_csv(stats, args.out, {"cache": args.cache, "d": cache.d})
    print(f"wrote per-class stats for {cache.d} bins to {args.out}")
    return 0


def _cmd_video_eval(args, parser) -> int:
    cache = _banded_cache(args, load_cache(args.cache))
    model = load_model(args.model)
    preds = np.asarray(model.predict(cache.features))
    frame_acc = float(np.mean(preds == cache.labels))
    votes = experiments.video_majority_vote(list(zip(cache.groups, preds.tolist())))
    truth = experiments.video_majority_vote(
        list(zip(cache.groups, cache.labels.tolist()))
    )
    true_by_group = dict(truth)
    video_acc = float(np.mean([1.0 if lab == true_by_group[g] else 0.0
                               for g, lab in votes]))
    experiments.write_videos_csv(votes, args.out,
                                 {"cache": args.cache, "model": args.model})
    print(f"frame_accuracy={_fmt(frame_acc)}")
    print(f"video_accuracy={_fmt(video_acc)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specfake",
        description="Detect GAN-generated images from 1D spectral profiles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-generate", help="write a seeded synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--count", type=int, default=500, help="image pairs per class (default 500)")
    p.add_argument("--size", type=int, default=128, help="square image size (default 128)")
    p.add_argument("--cutoff", type=float, default=0.35,
                   help="fake low-pass cutoff fraction (default 0.35)")
    p.add_argument("--exponent", type=float, default=1.8,
                   help="1/f^p spectral decay exponent (default 1.8)")
    p.add_argument("--frames-per-group", type=int, default=0,
                   help="group every N consecutive same-class images (default 0 = none)")
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_synth_generate)

    p = sub.add_parser("extract", help="extract profiles from a manifest")
    p.add_argument("--manifest", required=True, help="input manifest CSV")
    p.add_argument("--out", required=True, help="output cache CSV")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="parallel workers (default: available parallelism)")
    _add_extraction_flags(p)
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="train a classifier on a cache")
    p.add_argument("--cache", required=True, help="input feature cache CSV")
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--band", type=_band_arg, default=None,
                   help="restrict to native bins FROM:TO before training")
    _add_classifier_flags(p)
    _add_split_flags(p)
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="classify one image")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--image", required=True, help="image to classify")
    p.add_argument("--band", type=_band_arg, default=None,
                   help="restrict to native bins FROM:TO (needs --target-len 0)")
    _add_extraction_flags(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="score a model on a cache's test split")
    p.add_argument("--cache", required=True, help="input feature cache CSV")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--out", default=None, help="confusion matrix CSV (optional)")
    p.add_argument("--band", type=_band_arg, default=None,
                   help="restrict to native bins FROM:TO before scoring")
    _add_split_flags(p)
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="accuracy versus training-set size")
    p.add_argument("--cache", required=True, help="input feature cache CSV")
    p.add_argument("--out", required=True, help="output sweep CSV")
    p.add_argument("--sizes", type=_int_list, required=True,
                   help="comma-separated total sample counts, e.g. 20,100,1000")
    p.add_argument("--classifiers", type=_name_list, default=list(experiments.CLASSIFIER_NAMES),
                   help="comma-separated subset of lr,svm,kmeans (default all)")
    p.add_argument("--repeats", type=int, default=3,
                   help="reseeded repeats per size (default 3)")
    _add_split_flags(p)
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bands", help="frequency-band accuracy grid")
    p.add_argument("--cache", required=True, help="native-resolution cache CSV")
    p.add_argument("--out", required=True, help="output grid CSV")
    p.add_argument("--breakpoints", type=_int_list, default=None,
                   help="comma-separated bin breakpoints (default: scaled reference grid)")
    p.add_argument("--classifier", choices=("lr", "svm", "kmeans"), default="svm",
                   help="classifier for every cell (default svm)")
    _add_split_flags(p)
    _add_seed_flag(p)
    p.set_defaults(func=_cmd_bands)

    p = sub.add_parser("stats", help="per-class profile mean and std")
    p.add_argument("--cache", required=True, help="input feature cache CSV")
    p.add_argument("--out", required=True, help="output stats CSV")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("video-eval", help="majority vote per group")
    p.add_argument("--cache", required=True, help="cache CSV with groups")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--out", required=True, help="output votes CSV")
    p.add_argument("--band", type=_band_arg, default=None,
                   help="restrict to native bins FROM:TO before scoring")
    p.set_defaults(func=_cmd_video_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except SpecfakeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
