"""Shared builders for the test suite: documents from tagged strings or
bracket parses, random document generation, and corpora on disk."""
from __future__ import annotations

import numpy as np

from essayscore import annotate, treeops


def sentence_from_tagged(tagged, parse=None, connectives=()):
    """Sentence from "form/POS form/POS ..." text."""
    tokens = tuple(
        annotate.Token(form=item.rsplit("/", 1)[0],
                       pos=item.rsplit("/", 1)[1], index=i)
        for i, item in enumerate(tagged.split()))
    return annotate.Sentence(tokens=tokens, parse=parse,
                             connectives=tuple(connectives))


def sentence_from_parse(parse, connectives=()):
    """Sentence whose tokens are exactly the terminals of the parse."""
    tree = treeops.parse_ptb(parse)
    tokens = tuple(
        annotate.Token(form=t.text, pos=t.label, index=i)
        for i, t in enumerate(tree.terminals()))
    return annotate.Sentence(tokens=tokens, parse=parse,
                             connectives=tuple(connectives))


def make_doc(sentences, doc_id="e1", prompt="p1", l1="xx", label=None,
             score=None, chains=(), errors=()):
    return annotate.EssayDoc(
        id=doc_id, prompt=prompt, l1=l1, sentences=tuple(sentences),
        chains=tuple(chains), errors=tuple(errors), label=label,
        score=score)


def doc_from_parses(*parses, **kwargs):
    return make_doc([sentence_from_parse(p) for p in parses], **kwargs)


def write_corpus(path, docs):
    annotate.serialize(docs, path)
    return path


# ---------------------------------------------------------------------------
# Random documents for property suites

NOUNS = ("cat", "dog", "tree", "house", "car", "river", "book", "city",
         "garden", "road")
VERBS = ("saw", "liked", "found", "visited", "helped", "built")
ADJS = ("big", "old", "red", "quiet", "busy")


def _pick(rng, seq):
    return seq[int(rng.integers(0, len(seq)))]


def random_sentence_parse(rng):
    n1, n2 = _pick(rng, NOUNS), _pick(rng, NOUNS)
    v = _pick(rng, VERBS)
    shape = int(rng.integers(0, 3))
    if shape == 0:
        return (f"(ROOT (S (NP (DT the) (NN {n1})) "
                f"(VP (VBD {v}) (NP (DT the) (NN {n2}))) (. .)))")
    if shape == 1:
        adj = _pick(rng, ADJS)
        return (f"(ROOT (S (NP (DT the) (JJ {adj}) (NN {n1})) "
                f"(VP (VBD {v}) (PP (IN near) (NP (DT the) (NN {n2})))) "
                f"(. .)))")
    n3 = _pick(rng, NOUNS)
    v2 = _pick(rng, VERBS)
    return (f"(ROOT (S (NP (DT the) (NN {n1})) "
            f"(VP (VBD {v}) (NP (DT the) (NN {n2})) "
            f"(SBAR (IN because) (S (NP (DT the) (NN {n3})) "
            f"(VP (VBD {v2}))))) (. .)))")


def random_doc(rng, doc_id="r", max_sentences=5, with_chains=True):
    nsen = int(rng.integers(1, max_sentences + 1))
    sentences = [sentence_from_parse(random_sentence_parse(rng))
                 for _ in range(nsen)]
    chains = []
    if with_chains and nsen >= 1 and rng.random() < 0.7:
        mentions = []
        for si in range(nsen):
            if rng.random() < 0.6:
                ntok = len(sentences[si].tokens)
                start = int(rng.integers(0, ntok - 1))
                mentions.append(annotate.Mention(
                    sentence=si, start=start, end=start))
        if mentions:
            chains.append(annotate.CorefChain(mentions=tuple(mentions)))
    return make_doc(sentences, doc_id=doc_id, chains=chains,
                    label=_pick(rng, ("low", "medium", "high")),
                    score=float(rng.integers(1, 7)))


def random_matrix_doc(rng, doc_id, prompts=("P1", "P2"),
                      l1s=("AA", "BB", "CC")):
    doc = random_doc(rng, doc_id=doc_id)
    return annotate.EssayDoc(
        id=doc_id, prompt=_pick(rng, prompts), l1=_pick(rng, l1s),
        sentences=doc.sentences, chains=doc.chains, errors=doc.errors,
        label=doc.label, score=doc.score)


def tiny_feature_matrix(values, labels=None, scores=None, prompts=None,
                        l1s=None, profile_name="docLen-nocat",
                        feature_names=None):
    """FeatureMatrix straight from a numeric array, bypassing extraction.
    Used to test the learners on controlled inputs."""
    from essayscore import vector
    values = np.asarray(values, dtype=float)
    n, d = values.shape
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(d))
    include_prompt = prompts is not None
    include_l1 = l1s is not None
    profile = vector.FeatureProfile.__new__(vector.FeatureProfile)
    object.__setattr__(profile, "name", profile_name)
    object.__setattr__(profile, "features", tuple(feature_names))
    object.__setattr__(profile, "include_prompt", include_prompt)
    object.__setattr__(profile, "include_l1", include_l1)
    return vector.FeatureMatrix(
        profile=profile,
        ids=[f"d{i}" for i in range(n)],
        values=values,
        imputed=np.zeros((n, d), dtype=bool),
        prompts=list(prompts) if prompts is not None else [None] * n,
        l1s=list(l1s) if l1s is not None else [None] * n,
        labels=list(labels) if labels is not None else [None] * n,
        scores=list(scores) if scores is not None else [None] * n,
    )
