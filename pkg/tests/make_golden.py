"""Regenerate the golden micro-corpus fixture and its frozen expected
values. Run from the tests directory:

    python3 make_golden.py

The frozen values must only ever change together with a deliberate,
reviewed change to the feature definitions."""
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from essayscore import annotate, vector  # noqa: E402
from golden_docs import build_golden_docs  # noqa: E402


def main():
    data_dir = pathlib.Path(__file__).parent / "data"
    data_dir.mkdir(exist_ok=True)
    docs = build_golden_docs()
    for doc in docs:
        violations = annotate.validate(doc)
        assert not violations, (doc.id, violations)
    annotate.serialize(docs, data_dir / "golden_micro.jsonl")

    profile = vector.get_profile("extended")
    lexicon = vector.default_connective_lexicon()
    matrix = vector.build_matrix(docs, profile, lexicon)
    expected = {
        "profile": "extended",
        "ids": matrix.ids,
        "values": {
            matrix.ids[r]: {
                name: repr(float(matrix.values[r, c]))
                for c, name in enumerate(profile.features)}
            for r in range(len(matrix.ids))},
        "imputed": {
            matrix.ids[r]: sorted(
                profile.features[c]
                for c in range(len(profile.features))
                if matrix.imputed[r, c])
            for r in range(len(matrix.ids))},
        "labels": matrix.labels,
        "scores": matrix.scores,
        "prompts": matrix.prompts,
        "l1s": matrix.l1s,
    }
    out = data_dir / "golden_micro_expected.json"
    with open(out, "w", encoding="utf-8") as handle:
        json.dump(expected, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {data_dir / 'golden_micro.jsonl'} and {out}")


if __name__ == "__main__":
    main()
