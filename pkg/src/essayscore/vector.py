"""Feature profiles, vector assembly, normalization, and matrix export.

The canonical "paper-114" profile is 1 docLen + 5 word + 27 POS + 28
syntactic + 49 discourse + 4 error features, with prompt and L1 carried
as categorical slots. The discourse block counts the 16 entity-grid
transitions and 8 chain features (the reflexive-pronoun proportion is
moved to the "extended" profile, together with the 4 entity density
features, to keep the canonical subgroup totals at 8/10/7/16/8 = 49).

Undefined extractor outputs (e.g. MTLD on fully distinct text) are
imputed as 0 in the vector, flagged by name, and excluded from
normalization statistics.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from . import discfeat, errfeat, lexfeat, posfeat, synfeat

DOCLEN_FEATURES = ("docLen",)
WORD_FEATURES = ("WORD_ttr", "WORD_correctedTTR", "WORD_rootTTR",
                 "WORD_bilogTTR", "WORD_mtld")
POS_FEATURES = tuple(name for name, _ in posfeat._DENSITY_SETS) + (
    "POS_adjectiveVariation", "POS_adverbVariation",
    "POS_correctedVerbVariation1", "POS_modifierVariation",
    "POS_nounVar", "POS_squaredVerbVar1", "POS_verbVar1", "POS_verbVar2",
    "POS_numLexicalWords")
SYN_FEATURES = synfeat.SYN_FEATURE_NAMES
DISC_OVERLAP_FEATURES = discfeat.OVERLAP_FEATURE_NAMES
DISC_REFEX_FEATURES = discfeat.REFEX_FEATURE_NAMES
DISC_CONN_FEATURES = discfeat.CONN_FEATURE_NAMES
DISC_ENTITY_FEATURES = discfeat.ENTITY_TRANSITION_NAMES
DISC_ENTITY_DENSITY_FEATURES = discfeat.ENTITY_DENSITY_NAMES
DISC_CHAIN_FEATURES_ALL = discfeat.CHAIN_FEATURE_NAMES
DISC_CHAIN_FEATURES = tuple(
    n for n in DISC_CHAIN_FEATURES_ALL if n != "DISC_chainPropReflexives")
DISC_ALL_FEATURES = (DISC_OVERLAP_FEATURES + DISC_REFEX_FEATURES
                     + DISC_CONN_FEATURES + DISC_ENTITY_FEATURES
                     + DISC_CHAIN_FEATURES)
ERROR_FEATURES = ("ERR_spellingPerSen", "ERR_nonSpellingPerSen",
                  "ERR_allPerSen", "ERR_spellingShare")

CANONICAL_FEATURES = (DOCLEN_FEATURES + WORD_FEATURES + POS_FEATURES
                      + SYN_FEATURES + DISC_ALL_FEATURES + ERROR_FEATURES)
EXTENDED_FEATURES = (DOCLEN_FEATURES + WORD_FEATURES + POS_FEATURES
                     + SYN_FEATURES + DISC_OVERLAP_FEATURES
                     + DISC_REFEX_FEATURES + DISC_CONN_FEATURES
                     + DISC_ENTITY_FEATURES
                     + DISC_ENTITY_DENSITY_FEATURES
                     + DISC_CHAIN_FEATURES_ALL + ERROR_FEATURES)


class ProfileError(ValueError):
    pass


class MissingLayerError(ValueError):
    def __init__(self, layer, group):
        super().__init__(
            f"annotation layer {layer!r} required by feature group "
            f"{group!r} is missing")
        self.layer = layer
        self.group = group


@dataclass(frozen=True)
class FeatureProfile:
    name: str
    features: tuple
    include_prompt: bool = True
    include_l1: bool = True

    def __post_init__(self):
        if len(set(self.features)) != len(self.features):
            raise ProfileError(f"profile {self.name}: duplicate features")
        unknown = set(self.features) - set(EXTENDED_FEATURES)
        if unknown:
            raise ProfileError(
                f"profile {self.name}: unknown features {sorted(unknown)}")


def _build_profiles():
    groups = {
        "docLen": DOCLEN_FEATURES,
        "word": WORD_FEATURES,
        "pos": POS_FEATURES,
        "syn": SYN_FEATURES,
        "disc-all": DISC_ALL_FEATURES,
        "disc-overlap": DISC_OVERLAP_FEATURES,
        "disc-refex": DISC_REFEX_FEATURES,
        "disc-conn": DISC_CONN_FEATURES,
        "disc-entities": DISC_ENTITY_FEATURES,
        "disc-chains": DISC_CHAIN_FEATURES,
        "error": ERROR_FEATURES,
        "paper-114": CANONICAL_FEATURES,
        "extended": EXTENDED_FEATURES,
    }
    profiles = {}
    for name, features in groups.items():
        profiles[name] = FeatureProfile(name, features, True, True)
        profiles[f"{name}-noprompt"] = FeatureProfile(
            f"{name}-noprompt", features, False, True)
        profiles[f"{name}-nocat"] = FeatureProfile(
            f"{name}-nocat", features, False, False)
    return profiles


PROFILES = _build_profiles()


def get_profile(name: str) -> FeatureProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ProfileError(
            f"unknown profile {name!r}; available: "
            f"{', '.join(sorted(PROFILES))}") from None


def default_connective_lexicon() -> dict:
    path = resources.files("essayscore").joinpath("data/connectives.tsv")
    with resources.as_file(path) as real_path:
        return discfeat.load_connective_lexicon(real_path)


@dataclass(frozen=True)
class FeatureVector:
    essay_id: str
    values: tuple
    prompt: Optional[str]
    l1: Optional[str]
    label: Optional[str]
    score: Optional[float]
    imputed: tuple = ()


@dataclass
class FeatureMatrix:
    profile: FeatureProfile
    ids: list
    values: np.ndarray  # raw numeric features, rows aligned with ids
    imputed: np.ndarray  # boolean mask, same shape as values
    prompts: list
    l1s: list
    labels: list
    scores: list

    @property
    def feature_names(self):
        return self.profile.features

    def subset(self, indices) -> "FeatureMatrix":
        idx = list(indices)
        return FeatureMatrix(
            profile=self.profile,
            ids=[self.ids[i] for i in idx],
            values=self.values[idx],
            imputed=self.imputed[idx],
            prompts=[self.prompts[i] for i in idx],
            l1s=[self.l1s[i] for i in idx],
            labels=[self.labels[i] for i in idx],
            scores=[self.scores[i] for i in idx],
        )


_GROUP_OF = {}
for _name in DOCLEN_FEATURES:
    _GROUP_OF[_name] = "docLen"
for _name in WORD_FEATURES:
    _GROUP_OF[_name] = "word"
for _name in POS_FEATURES:
    _GROUP_OF[_name] = "pos"
for _name in SYN_FEATURES:
    _GROUP_OF[_name] = "syn"
for _name in DISC_OVERLAP_FEATURES:
    _GROUP_OF[_name] = "disc-overlap"
for _name in DISC_REFEX_FEATURES:
    _GROUP_OF[_name] = "disc-refex"
for _name in DISC_CONN_FEATURES:
    _GROUP_OF[_name] = "disc-conn"
for _name in DISC_ENTITY_FEATURES + DISC_ENTITY_DENSITY_FEATURES:
    _GROUP_OF[_name] = "disc-entities"
for _name in DISC_CHAIN_FEATURES_ALL:
    _GROUP_OF[_name] = "disc-chains"
for _name in ERROR_FEATURES:
    _GROUP_OF[_name] = "error"

_PARSE_GROUPS = {"syn", "disc-entities"}


def _check_layers(doc, groups, lexicon):
    if groups & _PARSE_GROUPS or "disc-conn" in groups:
        missing = [si for si, s in enumerate(doc.sentences)
                   if s.parse is None]
        if missing and groups & _PARSE_GROUPS:
            group = sorted(groups & _PARSE_GROUPS)[0]
            raise MissingLayerError("parse", group)
        if missing and "disc-conn" in groups:
            # the connective heuristic needs trees only where no
            # annotations exist
            if any(not doc.sentences[si].connectives for si in missing):
                raise MissingLayerError("parse", "disc-conn")
    if "disc-conn" in groups and lexicon is None:
        raise MissingLayerError("connective lexicon", "disc-conn")


def assemble(doc, profile: FeatureProfile, lexicon=None,
             dictionary=None) -> FeatureVector:
    """Named feature vector for one essay under a profile. Deterministic:
    identical inputs produce bitwise-identical values."""
    groups = {_GROUP_OF[name] for name in profile.features}
    _check_layers(doc, groups, lexicon)
    pool = {}
    if "docLen" in groups:
        pool["docLen"] = float(len(doc.word_tokens()))
    if "word" in groups:
        pool.update(lexfeat.lexical_profile(doc))
    if "pos" in groups:
        pool.update(posfeat.pos_profile(doc))
    if "syn" in groups:
        pool.update(synfeat.syntactic_complexity(doc))
    if "disc-overlap" in groups:
        pool.update(discfeat.overlap_features(doc))
    if "disc-refex" in groups:
        pool.update(discfeat.refex_features(doc))
    if "disc-conn" in groups:
        pool.update(discfeat.connective_features(doc, lexicon))
    if "disc-entities" in groups:
        pool.update(discfeat.entity_grid_features(doc))
    if "disc-chains" in groups:
        pool.update(discfeat.chain_features(doc))
    if "error" in groups:
        pool.update(errfeat.error_features(doc, dictionary))

    values = []
    imputed = []
    for name in profile.features:
        value = pool[name]
        if value is None:
            values.append(0.0)
            imputed.append(name)
        else:
            values.append(float(value))
    return FeatureVector(
        essay_id=doc.id,
        values=tuple(values),
        prompt=doc.prompt if profile.include_prompt else None,
        l1=doc.l1 if profile.include_l1 else None,
        label=doc.label,
        score=doc.score,
        imputed=tuple(imputed),
    )


def build_matrix(docs, profile: FeatureProfile, lexicon=None,
                 dictionary=None) -> FeatureMatrix:
    vectors = [assemble(doc, profile, lexicon, dictionary) for doc in docs]
    nfeat = len(profile.features)
    values = np.zeros((len(vectors), nfeat))
    imputed = np.zeros((len(vectors), nfeat), dtype=bool)
    name_index = {n: i for i, n in enumerate(profile.features)}
    for row, vec in enumerate(vectors):
        values[row] = vec.values
        for name in vec.imputed:
            imputed[row, name_index[name]] = True
    return FeatureMatrix(
        profile=profile,
        ids=[v.essay_id for v in vectors],
        values=values,
        imputed=imputed,
        prompts=[v.prompt for v in vectors],
        l1s=[v.l1 for v in vectors],
        labels=[v.label for v in vectors],
        scores=[v.score for v in vectors],
    )


# ---------------------------------------------------------------------------
# Normalization and categorical encoding

@dataclass(frozen=True)
class NormalizationStats:
    mins: tuple
    maxs: tuple

    def to_json(self):
        return {"mins": list(self.mins), "maxs": list(self.maxs)}

    @classmethod
    def from_json(cls, obj):
        return cls(mins=tuple(obj["mins"]), maxs=tuple(obj["maxs"]))


def normalize(values: np.ndarray,
              imputed: Optional[np.ndarray] = None):
    """Per-feature min-max scaling to [0, 1] over training rows. Imputed
    cells are excluded from the statistics; constant features map to 0.
    Returns (scaled matrix, NormalizationStats)."""
    if values.shape[0] < 2:
        raise ValueError("normalize needs at least 2 rows")
    masked = values.astype(float).copy()
    if imputed is not None and imputed.any():
        masked[imputed] = np.nan
    with np.errstate(all="ignore"):
        mins = np.nanmin(masked, axis=0)
        maxs = np.nanmax(masked, axis=0)
    mins = np.where(np.isnan(mins), 0.0, mins)
    maxs = np.where(np.isnan(maxs), 0.0, maxs)
    stats = NormalizationStats(tuple(mins), tuple(maxs))
    return apply_normalization(values, stats), stats


def apply_normalization(values: np.ndarray,
                        stats: NormalizationStats) -> np.ndarray:
    mins = np.asarray(stats.mins)
    maxs = np.asarray(stats.maxs)
    span = maxs - mins
    safe = np.where(span == 0, 1.0, span)
    scaled = (values - mins) / safe
    scaled = np.where(span == 0, 0.0, scaled)
    return np.clip(scaled, 0.0, 1.0)


def denormalize(scaled: np.ndarray,
                stats: NormalizationStats) -> np.ndarray:
    mins = np.asarray(stats.mins)
    maxs = np.asarray(stats.maxs)
    return scaled * (maxs - mins) + mins


def build_vocabulary(values) -> tuple:
    """Sorted unique non-None categorical values from training data."""
    return tuple(sorted({v for v in values if v is not None}))


def encode_categorical(value, vocabulary) -> np.ndarray:
    """One-hot block; unseen (or None) values encode as all zeros."""
    block = np.zeros(len(vocabulary))
    if value is not None and value in vocabulary:
        block[vocabulary.index(value)] = 1.0
    return block


def expand(matrix: FeatureMatrix, prompt_vocab: tuple,
           l1_vocab: tuple):
    """Numeric matrix with categorical one-hot blocks appended, plus the
    expanded column names."""
    names = list(matrix.feature_names)
    blocks = [matrix.values]
    if matrix.profile.include_prompt:
        names.extend(f"prompt={v}" for v in prompt_vocab)
        blocks.append(np.stack(
            [encode_categorical(p, prompt_vocab) for p in matrix.prompts])
            if prompt_vocab else np.zeros((len(matrix.ids), 0)))
    if matrix.profile.include_l1:
        names.extend(f"l1={v}" for v in l1_vocab)
        blocks.append(np.stack(
            [encode_categorical(v, l1_vocab) for v in matrix.l1s])
            if l1_vocab else np.zeros((len(matrix.ids), 0)))
    return np.hstack(blocks), tuple(names)


# ---------------------------------------------------------------------------
# Export

def export_csv(matrix: FeatureMatrix, csv_path, sidecar_path=None):
    """Feature matrix as CSV (categorical columns expanded, one essay per
    row, floats in shortest round-trip form) plus a sidecar JSON with the
    profile and vocabularies."""
    prompt_vocab = build_vocabulary(matrix.prompts) \
        if matrix.profile.include_prompt else ()
    l1_vocab = build_vocabulary(matrix.l1s) \
        if matrix.profile.include_l1 else ()
    expanded, names = expand(matrix, prompt_vocab, l1_vocab)
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("id",) + names)
        for row, essay_id in enumerate(matrix.ids):
            writer.writerow([essay_id]
                            + [repr(float(v)) for v in expanded[row]])
    if sidecar_path is not None:
        sidecar = {
            "profile": matrix.profile.name,
            "features": list(matrix.feature_names),
            "columns": list(names),
            "prompt_vocabulary": list(prompt_vocab),
            "l1_vocabulary": list(l1_vocab),
            "imputed": {
                matrix.ids[r]: [matrix.feature_names[c]
                                for c in np.flatnonzero(matrix.imputed[r])]
                for r in range(len(matrix.ids))
                if matrix.imputed[r].any()
            },
        }
        with open(sidecar_path, "w", encoding="utf-8") as handle:
            json.dump(sidecar, handle, indent=2, sort_keys=True)
            handle.write("\n")
