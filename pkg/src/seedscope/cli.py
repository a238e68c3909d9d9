"""Command line interface: ``seedscope <subcommand> ...``.

Exit status: 0 success, 1 usage error, 2 data error, 3 internal error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SeedScopeError
from .features import category_columns, feature_names, parse_categories
from .io import (FilterSettings, ingest_directory, load_image, load_model, read_arff,
                 read_csv, save_model, save_png, write_arff, write_csv)
from .io.images import IMAGE_SUFFIXES
from .io.ingest import CROP_PAD, extract_image, unlabeled_images
from .metrics import compute_metrics, confusion_from_predictions
from .raster import RgbRaster
from .ml import KINDS, canonical_kind, cross_validate, train
from .report import (compare_grid, render_cv_csv, render_cv_text, render_grid_csv,
                     render_grid_text, render_metrics_text)
from .segmentation import crop_region, segment

log = logging.getLogger("seedscope")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_filter_flags(p):
    g = p.add_argument_group("region filter")
    g.add_argument("--min-area", type=float, default=50, help="minimum seed area in px^2 (default 50)")
    g.add_argument("--max-area", type=float, default=None,
                   help="maximum seed area in px^2 (default: a quarter of the image)")
    g.add_argument("--circ-min", type=float, default=0.0, help="minimum circularity (default 0)")
    g.add_argument("--circ-max", type=float, default=1.0, help="maximum circularity (default 1)")


def _add_classifier_flags(p):
    g = p.add_argument_group("classifier")
    g.add_argument("--classifier", default="random_forest",
                   help="knn, naive_bayes (nb), random_forest (rf) or svm")
    g.add_argument("--k", type=int, default=None, help="kNN neighbours (default 1)")
    g.add_argument("--trees", type=int, default=None, help="random forest size (default 100)")
    g.add_argument("--c", type=float, default=None, help="SVM regularisation C (default 1)")
    g.add_argument("--seed", type=int, default=0)


def _kind(name):
    try:
        return canonical_kind(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _settings(args) -> FilterSettings:
    if args.min_area > (args.max_area if args.max_area is not None else float("inf")):
        raise UsageError("--min-area exceeds --max-area")
    if args.circ_min > args.circ_max:
        raise UsageError("--circ-min exceeds --circ-max")
    return FilterSettings(args.min_area, args.max_area, args.circ_min, args.circ_max)


def _hyperparameters(kind, args) -> dict:
    wanted = {"knn": {"k": args.k}, "random_forest": {"trees": args.trees},
              "svm": {"c": args.c}, "naive_bayes": {}}[kind]
    return {k: v for k, v in wanted.items() if v is not None}


def _categories(text):
    try:
        return parse_categories(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_dataset(path, categories="all", settings=None, jobs=1):
    """ARFF, CSV or an image directory (ingested on the fly)."""
    path = Path(path)
    if path.is_dir():
        result = ingest_directory(path, categories, settings, jobs)
        _report_errors(result.errors)
        return result.dataset
    if not path.exists():
        raise SeedScopeError(f"no such file: {path}")
    if path.suffix.lower() == ".arff":
        return read_arff(path)
    if path.suffix.lower() == ".csv":
        return read_csv(path)
    raise UsageError(f"{path}: expected .arff, .csv or a directory")


def _select(ds, categories):
    cats = _categories(categories)
    cols = [c for cat in cats for c in category_columns(ds.feature_names, cat)]
    if not cols:
        raise SeedScopeError(f"dataset has no columns for {', '.join(cats)}")
    if len(cols) == ds.n_features:
        return ds
    return ds.select_columns(cols)


def _report_errors(errors):
    for rel, msg in errors:
        print(f"warning: {rel}: {msg}", file=sys.stderr)


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


def cmd_segment(args):
    settings = _settings(args)
    src = Path(args.input)
    images = ([src] if src.is_file() else
              [src / rel for rel in unlabeled_images(src)])
    if not images:
        raise SeedScopeError(f"no images under {src}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = [["image", "seed", "area", "x_min", "y_min", "x_max", "y_max", "cx", "cy"]]
    failures = []
    for path in images:
        try:
            img = load_image(path)
        except (SeedScopeError, OSError) as exc:
            failures.append((str(path), str(exc)))
            continue
        mask, regions = segment(img, settings.for_image(img.width, img.height))
        stem = path.stem
        save_png(out / f"{stem}_mask.png", mask)
        overlay = img.pixels.copy()
        for r in regions:
            overlay[r.contour[:, 1], r.contour[:, 0]] = (255, 0, 0)
            crop, crop_mask = crop_region(img, mask, r, args.pad)
            save_png(out / f"{stem}_seed{r.label:03d}.png", crop)
            save_png(out / f"{stem}_seed{r.label:03d}_mask.png", crop_mask)
            summary.append([path.name, r.label, r.area, *r.bbox,
                            f"{r.centroid[0]:.3f}", f"{r.centroid[1]:.3f}"])
        save_png(out / f"{stem}_overlay.png", RgbRaster(overlay))
        print(f"{path.name}: {len(regions)} seeds")
    with open(out / "regions.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(summary)
    _report_errors(failures)
    return EXIT_DATA if len(failures) == len(images) else EXIT_OK


def cmd_extract(args):
    cats = _categories(args.features)
    result = ingest_directory(args.input, cats, _settings(args), args.jobs)
    _report_errors(result.errors)
    ds = result.dataset
    if ds.n_samples == 0:
        raise SeedScopeError("no seeds extracted")
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_arff(ds, prefix.with_suffix(".arff"), relation=args.relation)
    write_csv(ds, prefix.with_suffix(".csv"))
    print(f"{ds.n_samples} seeds, {ds.n_features} features, {ds.n_classes} classes "
          f"-> {prefix.with_suffix('.arff')}, {prefix.with_suffix('.csv')}")
    return EXIT_OK


def cmd_train(args):
    kind = _kind(args.classifier)
    ds = _select(load_dataset(args.data), args.features)
    hp = _hyperparameters(kind, args)
    if args.folds and args.folds >= 2:
        rep = cross_validate(kind, ds, hp, args.folds, args.seed, args.jobs)
        model = rep.selected_model
        text = render_cv_text(rep)
    else:
        model = train(kind, ds, hp, args.seed)
        cm = confusion_from_predictions(ds.y, model.predict(ds.X), ds.n_classes, ds.class_names)
        text = "\n".join([f"classifier: {kind}", f"training samples: {ds.n_samples}",
                          "resubstitution metrics (%):"] + render_metrics_text(compute_metrics(cm))) + "\n"
    save_model(model, args.out)
    sys.stdout.write(text)
    if args.report:
        _write(args.report, text)
    print(f"model -> {args.out}")
    return EXIT_OK


def cmd_evaluate(args):
    kind = _kind(args.classifier)
    ds = _select(load_dataset(args.data), args.features)
    rep = cross_validate(kind, ds, _hyperparameters(kind, args), args.folds, args.seed, args.jobs)
    text = render_cv_text(rep)
    sys.stdout.write(text)
    if args.out:
        prefix = Path(args.out)
        _write(prefix.with_suffix(".txt"), text)
        _write(prefix.with_suffix(".csv"), render_cv_csv(rep))
    return EXIT_OK


def cmd_predict(args):
    archive = load_model(args.model)
    model = archive.model
    src = Path(args.data)
    if src.is_dir() or src.suffix.lower() in IMAGE_SUFFIXES:
        cats = tuple(c for c in ("morph", "texture", "color")
                     if category_columns(model.feature_names, c))
        settings = _settings(args)
        paths = [src] if src.is_file() else [src / r for r in unlabeled_images(src)]
        rows, ids = [], []
        for p in paths:
            try:
                found, errs = extract_image(p, cats, settings)
            except (SeedScopeError, OSError) as exc:
                print(f"warning: {p}: {exc}", file=sys.stderr)
                continue
            for msg in errs:
                print(f"warning: {p}: {msg}", file=sys.stderr)
            for label, vals in found:
                rows.append(vals)
                ids.append(f"{p.name}#{label}")
        names = feature_names(cats)
        X = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    else:
        ds = load_dataset(src)
        names, X = ds.feature_names, ds.X
        ids = [str(i) for i in range(ds.n_samples)]
    archive.check_schema(names)
    scores = model.predict_scores(X) if len(X) else np.zeros((0, len(model.class_names)))
    labels = model.predict(X) if len(X) else []
    out = [["row", "predicted"] + [f"score_{c}" for c in model.class_names]]
    for rid, lab, sc in zip(ids, labels, scores):
        out.append([rid, model.class_names[lab]] + [f"{v:.6f}" for v in sc])
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(out)
    else:
        csv.writer(sys.stdout, lineterminator="\n").writerows(out)
    return EXIT_OK


def cmd_compare(args):
    ds = load_dataset(args.data, jobs=args.jobs)
    kinds = [_kind(k) for k in args.classifiers.split(",")] if args.classifiers else KINDS
    hp = {"knn": {"k": args.k} if args.k else {}, "random_forest": {"trees": args.trees} if args.trees else {},
          "svm": {"c": args.c} if args.c else {}}
    cells = compare_grid(ds, kinds, hp_by_kind=hp, k=args.folds, seed=args.seed, jobs=args.jobs)
    text = render_grid_text(cells)
    sys.stdout.write(text)
    if args.out:
        prefix = Path(args.out)
        _write(prefix.with_suffix(".txt"), text)
        _write(prefix.with_suffix(".csv"), render_grid_csv(cells))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seedscope", description="Seed segmentation, descriptors and classification.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("segment", help="write per-seed crops, masks and overlays")
    s.add_argument("input", help="image file or directory of images")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--pad", type=int, default=CROP_PAD, help="crop padding in px")
    _add_filter_flags(s)
    s.set_defaults(func=cmd_segment)

    s = sub.add_parser("extract", help="descriptors of every seed in a labelled image tree")
    s.add_argument("input", help="root with one sub-directory per class")
    s.add_argument("--out", required=True, help="output prefix for .arff and .csv")
    s.add_argument("--features", default="all", help="comma list of morph,texture,color or all")
    s.add_argument("--relation", default="seeds")
    s.add_argument("--jobs", type=int, default=1)
    _add_filter_flags(s)
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("train", help="fit a classifier and save the model archive")
    s.add_argument("data", help=".arff, .csv or labelled image directory")
    s.add_argument("--out", required=True, help="model archive path")
    s.add_argument("--features", default="all")
    s.add_argument("--folds", type=int, default=0,
                   help="if >= 2, keep the best-AUC fold model of a k-fold run")
    s.add_argument("--report", default=None, help="also write the training report here")
    s.add_argument("--jobs", type=int, default=1)
    _add_classifier_flags(s)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("evaluate", help="stratified k-fold cross-validation report")
    s.add_argument("data")
    s.add_argument("--features", default="all")
    s.add_argument("--folds", type=int, default=10)
    s.add_argument("--out", default=None, help="output prefix for .txt and .csv reports")
    s.add_argument("--jobs", type=int, default=1)
    _add_classifier_flags(s)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("predict", help="label rows or seeds with a saved model")
    s.add_argument("data", help=".arff/.csv dataset, an image or a directory of images")
    s.add_argument("--model", required=True)
    s.add_argument("--out", default=None, help="CSV output (default stdout)")
    _add_filter_flags(s)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("compare", help="every classifier on every feature-category subset")
    s.add_argument("data")
    s.add_argument("--folds", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--classifiers", default=None, help="comma list (default: all four)")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--trees", type=int, default=None)
    s.add_argument("--c", type=float, default=None)
    s.add_argument("--out", default=None, help="output prefix for .txt and .csv grids")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("seedscope: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except UsageError as exc:
        print(f"seedscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SeedScopeError, OSError, ValueError) as exc:
        print(f"seedscope: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        log.debug("internal error", exc_info=True)
        print(f"seedscope: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
