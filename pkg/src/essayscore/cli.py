"""Command-line front end: corpora -> features -> models -> reports.

Exit codes: 0 success, 1 data/validation failure, 2 configuration
failure. Every subcommand that involves randomness takes --seed and
records it in its run metadata, so identical inputs and seed give
bitwise-identical outputs.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import annotate, discfeat, errfeat, evaluate, learn, vector

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2


class _CliConfigError(Exception):
    pass


def _load_corpus(path):
    return annotate.load_corpus(path)


def _resolve_lexicon(args, profile):
    needs = any(name in discfeat.CONN_FEATURE_NAMES
                for name in profile.features)
    path = getattr(args, "connectives", None)
    if path is not None:
        try:
            return discfeat.load_connective_lexicon(path)
        except FileNotFoundError:
            raise _CliConfigError(
                f"connective lexicon not found at {path!r} "
                "(--connectives)") from None
    if needs:
        return vector.default_connective_lexicon()
    return None


def _resolve_dictionary(args):
    path = getattr(args, "dictionary", None)
    if path is None:
        return None
    try:
        return errfeat.load_dictionary(path)
    except FileNotFoundError:
        raise _CliConfigError(
            f"dictionary not found at {path!r} (--dictionary)") from None


def _matrix(args, docs=None):
    profile = vector.get_profile(args.profile)
    if docs is None:
        docs = _load_corpus(args.corpus)
    lexicon = _resolve_lexicon(args, profile)
    dictionary = _resolve_dictionary(args)
    return vector.build_matrix(docs, profile, lexicon, dictionary)


def _cmd_extract(args):
    matrix = _matrix(args)
    sidecar = args.out + ".json" if args.sidecar is None else args.sidecar
    vector.export_csv(matrix, args.out, sidecar)
    print(f"wrote {len(matrix.ids)} x {len(matrix.feature_names)} "
          f"matrix to {args.out}")
    return EXIT_OK


def _cmd_train(args):
    matrix = _matrix(args)
    if args.task == "classify":
        model = learn.train_classifier(matrix, C=args.C,
                                       tol=args.tolerance, seed=args.seed)
    else:
        model = learn.train_regressor(matrix, C=args.C,
                                      epsilon=args.epsilon,
                                      tol=args.tolerance, seed=args.seed)
    model.save(args.model)
    print(f"wrote {model.task} model to {args.model}")
    return EXIT_OK


def _cmd_predict(args):
    model = learn.LinearModel.load(args.model)
    profile = vector.get_profile(model.profile_name)
    docs = _load_corpus(args.corpus)
    args.profile = model.profile_name
    lexicon = _resolve_lexicon(args, profile)
    dictionary = _resolve_dictionary(args)
    matrix = vector.build_matrix(docs, profile, lexicon, dictionary)
    predictions = learn.predict(model, matrix)
    with open(args.out, "w", encoding="utf-8") as handle:
        key = "label" if model.task == "classification" else "score"
        for essay_id, value in zip(matrix.ids, predictions):
            handle.write(json.dumps({"id": essay_id, key: value}))
            handle.write("\n")
    print(f"wrote {len(predictions)} predictions to {args.out}")
    return EXIT_OK


def _cmd_crossval(args):
    matrix = _matrix(args)
    task = "classification" if args.task == "classify" else "regression"
    report = learn.cross_validate(
        matrix, k=args.folds, seed=args.seed, task=task, C=args.C,
        epsilon=args.epsilon, tol=args.tolerance)
    report.save(args.out, args.out + ".txt")
    print(report.to_text())
    return EXIT_OK


def _cmd_relieff(args):
    matrix = _matrix(args)
    task = "classification" if args.task == "classify" else "regression"
    ranking = learn.relieff(matrix, task=task,
                            k_neighbors=args.k_neighbors, seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump({"seed": args.seed, "k_neighbors": args.k_neighbors,
                   "ranking": [[n, w] for n, w in ranking.entries]},
                  handle, indent=2)
        handle.write("\n")
    print(f"top feature: {ranking.entries[0][0]}")
    return EXIT_OK


def _cmd_balance(args):
    docs = _load_corpus(args.corpus)
    labels = [doc.label for doc in docs]
    balanced = learn.subsample_balance(docs, labels, seed=args.seed)
    annotate.serialize(balanced, args.out)
    print(f"kept {len(balanced)} of {len(docs)} essays")
    return EXIT_OK


def _cmd_report(args):
    docs = _load_corpus(args.corpus)
    gold_label = {doc.id: doc.label for doc in docs}
    gold_score = {doc.id: doc.score for doc in docs}
    pred = []
    gold = []
    with open(args.predictions, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            if args.task == "classify":
                pred.append(obj["label"])
                gold.append(gold_label[obj["id"]])
            else:
                pred.append(obj["score"])
                gold.append(gold_score[obj["id"]])
    if args.task == "classify":
        report = evaluate.classification_report(pred, gold)
    else:
        report = evaluate.regression_report(pred, gold)
    report.save(args.out, args.out + ".txt")
    print(report.to_text())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="essayscore",
        description="Linguistic feature extraction and linear scoring "
                    "models for annotated learner essays.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True, profile=True):
        if corpus:
            p.add_argument("--corpus", required=True)
        if profile:
            p.add_argument("--profile", default="paper-114")
        p.add_argument("--connectives", default=None,
                       help="connective lexicon TSV (default: bundled)")
        p.add_argument("--dictionary", default=None,
                       help="word list for the fallback error checker")
        p.add_argument("--seed", type=int, default=0)

    def hyper(p):
        p.add_argument("--C", type=float, default=learn.DEFAULT_C)
        p.add_argument("--epsilon", type=float,
                       default=learn.DEFAULT_EPSILON)
        p.add_argument("--tolerance", type=float,
                       default=learn.DEFAULT_TOL)

    p = sub.add_parser("extract", help="write a feature-matrix CSV")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", default=None)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="train a model")
    common(p)
    p.add_argument("--task", choices=("classify", "regress"),
                   required=True)
    p.add_argument("--model", required=True)
    hyper(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="apply a trained model")
    common(p, profile=False)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("crossval", help="k-fold cross-validation")
    common(p)
    p.add_argument("--task", choices=("classify", "regress"),
                   required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--out", required=True)
    hyper(p)
    p.set_defaults(func=_cmd_crossval)

    p = sub.add_parser("relieff", help="rank features")
    common(p)
    p.add_argument("--task", choices=("classify", "regress"),
                   required=True)
    p.add_argument("--k-neighbors", type=int, default=10,
                   dest="k_neighbors")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_relieff)

    p = sub.add_parser("balance", help="downsample to the minority class")
    common(p, profile=False)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("report", help="score predictions against gold")
    common(p, profile=False)
    p.add_argument("--task", choices=("classify", "regress"),
                   required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (annotate.EssayCorpusError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (_CliConfigError, vector.ProfileError, vector.MissingLayerError,
            learn.ConfigurationError, learn.DegenerateModelError,
            discfeat.LexiconError, errfeat.ConfigurationError,
            evaluate.MetricError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
