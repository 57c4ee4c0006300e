"""Error features and the minimal fallback checker.

The four features are computed from error annotations carried by the
corpus; when an essay has none and a dictionary is supplied, the fallback
checker runs instead. Annotations always win over the fallback.

The fallback knows one spelling rule (alphabetic token, not a proper
noun, case-folded form absent from the dictionary) and two demonstration
grammar rules (immediate duplicate word; "a" before a vowel-initial word
or "an" before a consonant-initial one).
"""
from __future__ import annotations

from .annotate import ErrorAnnotation

VOWELS = set("aeiou")


class ConfigurationError(ValueError):
    pass


def load_dictionary(path) -> frozenset:
    """UTF-8 word list, one case-folded word per line."""
    with open(path, encoding="utf-8") as handle:
        words = frozenset(
            line.strip().lower() for line in handle if line.strip())
    if not words:
        raise ConfigurationError(f"{path}: empty dictionary")
    return words


def fallback_check(doc, dictionary) -> list:
    """ErrorAnnotations produced by the built-in rules. Deterministic and
    independent of sentence order."""
    if not dictionary:
        raise ConfigurationError("fallback_check needs a dictionary")
    errors = []
    for si, sent in enumerate(doc.sentences):
        prev_form = None
        for tok in sent.tokens:
            form = tok.form.lower()
            if (tok.form.isalpha() and tok.pos not in ("NNP", "NNPS")
                    and form not in dictionary):
                errors.append(ErrorAnnotation(
                    sentence=si, kind="spelling",
                    start=tok.index, end=tok.index))
            if prev_form is not None and tok.form.isalpha() \
                    and form == prev_form:
                errors.append(ErrorAnnotation(
                    sentence=si, kind="non-spelling",
                    start=tok.index - 1, end=tok.index))
            if prev_form in ("a", "an") and tok.form.isalpha():
                starts_vowel = form[0] in VOWELS
                if (prev_form == "a") == starts_vowel:
                    errors.append(ErrorAnnotation(
                        sentence=si, kind="non-spelling",
                        start=tok.index - 1, end=tok.index))
            prev_form = form if tok.form.isalpha() else None
    return errors


def error_features(doc, dictionary=None) -> dict:
    """spelling / non-spelling / all errors per sentence plus the
    spelling share. Falls back to the built-in checker only when the
    essay carries no error annotations and a dictionary is given."""
    errors = doc.errors
    if not errors and dictionary:
        errors = fallback_check(doc, dictionary)
    nsen = len(doc.sentences)
    spelling = sum(1 for e in errors if e.kind == "spelling")
    non_spelling = sum(1 for e in errors if e.kind == "non-spelling")
    total = spelling + non_spelling
    return {
        "ERR_spellingPerSen": spelling / nsen if nsen else 0.0,
        "ERR_nonSpellingPerSen": non_spelling / nsen if nsen else 0.0,
        "ERR_allPerSen": total / nsen if nsen else 0.0,
        "ERR_spellingShare": spelling / total if total else 0.0,
    }
