"""Word-level lexical diversity: the type-token ratio family and MTLD.

"Word tokens" everywhere in this module means tokens whose POS tag is not
punctuation or a symbol; types are case-folded surface forms. Undefined
values (bilog TTR of a one-token text, MTLD of a fully distinct text) are
returned as None and left to the caller to impute.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

DEFAULT_MTLD_THRESHOLD = 0.72


class UndefinedInputError(ValueError):
    pass


def word_forms(doc) -> list:
    """Case-folded word-token forms of an essay, in order."""
    return [t.form.lower() for t in doc.tokens() if t.is_word]


def ttr_family(tokens: Sequence[str]):
    """(ttr, corrected_ttr, root_ttr, bilog_ttr) for an ordered token
    sequence. bilog is None for single-token input (ln 1 / ln 1)."""
    n = len(tokens)
    if n == 0:
        raise UndefinedInputError("ttr_family needs at least one token")
    types = len(set(tokens))
    ttr = types / n
    corrected = types / math.sqrt(2 * n)
    root = types / math.sqrt(n)
    bilog: Optional[float]
    if n == 1:
        bilog = None
    else:
        bilog = math.log(types) / math.log(n)
    return ttr, corrected, root, bilog


def _mtld_one_direction(tokens, threshold):
    """Factor count of one scan direction, partial factor included.
    Returns 0.0 when the running TTR never crosses the threshold."""
    factors = 0.0
    seen = set()
    count = 0
    ttr = 1.0
    for token in tokens:
        seen.add(token)
        count += 1
        ttr = len(seen) / count
        if ttr < threshold:
            factors += 1.0
            seen = set()
            count = 0
            ttr = 1.0
    if count > 0:
        factors += (1.0 - ttr) / (1.0 - threshold)
    return factors


def mtld(tokens: Sequence[str],
         threshold: float = DEFAULT_MTLD_THRESHOLD) -> Optional[float]:
    """Bidirectional MTLD: tokens per factor, averaged over the forward
    and reversed scans. None when neither direction completes a factor
    (the undefined sentinel; excluded from normalization statistics
    downstream)."""
    n = len(tokens)
    if n == 0:
        raise UndefinedInputError("mtld needs at least one token")
    values = []
    for seq in (tokens, list(reversed(tokens))):
        factors = _mtld_one_direction(seq, threshold)
        if factors > 0:
            values.append(n / factors)
    if not values:
        return None
    return sum(values) / len(values)


def lexical_profile(doc, threshold: float = DEFAULT_MTLD_THRESHOLD) -> dict:
    """The five word-level features of an essay, keyed by feature name."""
    tokens = word_forms(doc)
    ttr, corrected, root, bilog = ttr_family(tokens)
    return {
        "WORD_ttr": ttr,
        "WORD_correctedTTR": corrected,
        "WORD_rootTTR": root,
        "WORD_bilogTTR": bilog,
        "WORD_mtld": mtld(tokens, threshold),
    }
