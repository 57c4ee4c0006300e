"""Annotated-essay data model, corpus IO, and fallback stem derivation.

The corpus format is UTF-8 JSON lines, one essay per line::

    {"id": ..., "prompt": ..., "l1": ..., "label": ..., "score": ...,
     "sentences": [{"tokens": [{"form","lemma","stem","pos"}],
                    "parse": "...",
                    "connectives": [{"index","usage","sense"}]}],
     "chains": [{"mentions": [{"sentence","start","end","kind"}]}],
     "errors": [{"sentence","kind","start","end"}]}

Absent optional fields are omitted, not null. All annotation layers
(tags, parses, coreference, errors) are consumed as input; nothing is
re-derived from raw text except stems, for which a small fixed
suffix-stripping rule set is provided.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

from . import treeops

PUNCT_TAGS = treeops.PUNCT_TAGS
SYMBOL_TAGS = treeops.SYMBOL_TAGS
NONWORD_TAGS = treeops.NONWORD_TAGS

LABELS = ("low", "medium", "high")
SENSES = ("Expansion", "Contingency", "Comparison", "Temporal")
USAGES = ("discourse", "non-discourse")
MENTION_KINDS = (
    "personal_pronoun",
    "demonstrative_pronoun",
    "reflexive_pronoun",
    "proper_noun",
    "possessive_determiner",
    "demonstrative_determiner",
    "indefinite_np",
    "definite_np",
    "other",
)
ERROR_KINDS = ("spelling", "non-spelling")

DEMONSTRATIVE_FORMS = {"this", "that", "these", "those"}


class EssayCorpusError(Exception):
    pass


class CorpusParseError(EssayCorpusError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CorpusValidationError(EssayCorpusError):
    def __init__(self, essay_id, violations):
        self.essay_id = essay_id
        self.violations = list(violations)
        detail = "; ".join(self.violations)
        super().__init__(f"essay {essay_id!r}: {detail}")


@dataclass(frozen=True)
class Token:
    form: str
    pos: str
    index: int
    lemma: Optional[str] = None
    stem: Optional[str] = None

    @property
    def is_word(self):
        return self.pos not in NONWORD_TAGS


@dataclass(frozen=True)
class ConnectiveAnnotation:
    index: int
    usage: str  # discourse | non-discourse
    sense: str  # Expansion | Contingency | Comparison | Temporal | none


@dataclass(frozen=True)
class Sentence:
    tokens: tuple
    parse: Optional[str] = None
    connectives: tuple = ()

    _tree_cache: dict = field(default_factory=dict, compare=False,
                              repr=False)

    def tree(self):
        """Parsed tree for this sentence, cached; None without a parse."""
        if self.parse is None:
            return None
        if "tree" not in self._tree_cache:
            self._tree_cache["tree"] = treeops.parse_ptb(self.parse)
        return self._tree_cache["tree"]


@dataclass(frozen=True)
class Mention:
    sentence: int
    start: int
    end: int
    kind: Optional[str] = None


@dataclass(frozen=True)
class CorefChain:
    mentions: tuple


@dataclass(frozen=True)
class ErrorAnnotation:
    sentence: int
    kind: str  # spelling | non-spelling
    start: int
    end: int


@dataclass(frozen=True)
class EssayDoc:
    id: str
    prompt: str
    l1: str
    sentences: tuple
    chains: tuple = ()
    errors: tuple = ()
    label: Optional[str] = None
    score: Optional[float] = None

    def tokens(self):
        for sent in self.sentences:
            yield from sent.tokens

    def word_tokens(self):
        return [t for t in self.tokens() if t.is_word]


# ---------------------------------------------------------------------------
# Validation

def validate(doc: EssayDoc) -> list:
    """All invariant violations for one essay, as human-readable strings.
    Empty list means the document is well formed. Pure: no side effects."""
    violations = []
    if not doc.id:
        violations.append("id is empty")
    if doc.label is not None and doc.label not in LABELS:
        violations.append(f"label {doc.label!r} not in {LABELS}")
    if sum(len(s.tokens) for s in doc.sentences) < 1:
        violations.append("essay has no tokens")
    for si, sent in enumerate(doc.sentences):
        for tok in sent.tokens:
            if not tok.form:
                violations.append(
                    f"sentence {si} token {tok.index}: empty form")
            if not tok.pos:
                violations.append(
                    f"sentence {si} token {tok.index}: empty pos")
        indices = [t.index for t in sent.tokens]
        if indices != list(range(len(indices))):
            violations.append(
                f"sentence {si}: token indices not contiguous from 0")
        if sent.parse is not None:
            try:
                tree = sent.tree()
            except treeops.TreeParseError as exc:
                violations.append(f"sentence {si}: unparseable parse: {exc}")
            else:
                if len(tree.terminals()) != len(sent.tokens):
                    violations.append(
                        f"sentence {si}: parse has {len(tree.terminals())} "
                        f"leaves but {len(sent.tokens)} tokens")
        for conn in sent.connectives:
            if not 0 <= conn.index < len(sent.tokens):
                violations.append(
                    f"sentence {si}: connective index {conn.index} "
                    "out of range")
            if conn.usage not in USAGES:
                violations.append(
                    f"sentence {si}: connective usage {conn.usage!r}")
            if conn.sense not in SENSES + ("none",):
                violations.append(
                    f"sentence {si}: connective sense {conn.sense!r}")
    for ci, chain in enumerate(doc.chains):
        if len(chain.mentions) < 1:
            violations.append(f"chain {ci}: no mentions")
        for mention in chain.mentions:
            if not 0 <= mention.sentence < len(doc.sentences):
                violations.append(
                    f"chain {ci}: sentence index {mention.sentence} "
                    "out of range")
                continue
            ntok = len(doc.sentences[mention.sentence].tokens)
            if mention.start > mention.end:
                violations.append(
                    f"chain {ci}: mention start {mention.start} > "
                    f"end {mention.end}")
            if not (0 <= mention.start < ntok and 0 <= mention.end < ntok):
                violations.append(
                    f"chain {ci}: mention span ({mention.start},"
                    f"{mention.end}) outside sentence {mention.sentence}")
            if mention.kind is not None and mention.kind not in MENTION_KINDS:
                violations.append(
                    f"chain {ci}: unknown mention kind {mention.kind!r}")
    for ei, err in enumerate(doc.errors):
        if not 0 <= err.sentence < len(doc.sentences):
            violations.append(
                f"error {ei}: sentence index {err.sentence} out of range")
        if err.kind not in ERROR_KINDS:
            violations.append(f"error {ei}: unknown kind {err.kind!r}")
    return violations


# ---------------------------------------------------------------------------
# JSON (de)serialization

def _doc_from_json(obj, line):
    def require(key):
        if key not in obj:
            raise CorpusParseError(f"missing field {key!r}", line)
        return obj[key]

    sentences = []
    for sraw in require("sentences"):
        tokens = tuple(
            Token(form=traw.get("form", ""), pos=traw.get("pos", ""),
                  index=i, lemma=traw.get("lemma"), stem=traw.get("stem"))
            for i, traw in enumerate(sraw.get("tokens", ())))
        connectives = tuple(
            ConnectiveAnnotation(index=c["index"], usage=c["usage"],
                                 sense=c.get("sense", "none"))
            for c in sraw.get("connectives", ()))
        sentences.append(Sentence(tokens=tokens, parse=sraw.get("parse"),
                                  connectives=connectives))
    chains = tuple(
        CorefChain(mentions=tuple(
            Mention(sentence=m["sentence"], start=m["start"],
                    end=m["end"], kind=m.get("kind"))
            for m in craw.get("mentions", ())))
        for craw in obj.get("chains", ()))
    errors = tuple(
        ErrorAnnotation(sentence=e["sentence"], kind=e["kind"],
                        start=e.get("start", 0), end=e.get("end", 0))
        for e in obj.get("errors", ()))
    return EssayDoc(
        id=str(require("id")),
        prompt=str(obj.get("prompt", "")),
        l1=str(obj.get("l1", "")),
        label=obj.get("label"),
        score=obj.get("score"),
        sentences=tuple(sentences),
        chains=chains,
        errors=errors,
    )


def _doc_to_json(doc: EssayDoc) -> dict:
    obj = {"id": doc.id, "prompt": doc.prompt, "l1": doc.l1}
    if doc.label is not None:
        obj["label"] = doc.label
    if doc.score is not None:
        obj["score"] = doc.score
    sentences = []
    for sent in doc.sentences:
        sraw = {"tokens": []}
        for tok in sent.tokens:
            traw = {"form": tok.form, "pos": tok.pos}
            if tok.lemma is not None:
                traw["lemma"] = tok.lemma
            if tok.stem is not None:
                traw["stem"] = tok.stem
            sraw["tokens"].append(traw)
        if sent.parse is not None:
            sraw["parse"] = sent.parse
        if sent.connectives:
            sraw["connectives"] = [
                {"index": c.index, "usage": c.usage, "sense": c.sense}
                for c in sent.connectives]
        sentences.append(sraw)
    obj["sentences"] = sentences
    if doc.chains:
        obj["chains"] = [
            {"mentions": [
                {"sentence": m.sentence, "start": m.start, "end": m.end,
                 **({"kind": m.kind} if m.kind is not None else {})}
                for m in chain.mentions]}
            for chain in doc.chains]
    if doc.errors:
        obj["errors"] = [
            {"sentence": e.sentence, "kind": e.kind,
             "start": e.start, "end": e.end}
            for e in doc.errors]
    return obj


def load_corpus(path) -> list:
    """Load and validate a JSON-lines corpus. Order of the file is
    preserved. Raises CorpusParseError (with line number) on malformed
    JSON and CorpusValidationError (naming the essay) on invariant
    violations."""
    docs = []
    seen_ids = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(f"malformed JSON: {exc.msg}",
                                       lineno) from exc
            doc = _doc_from_json(obj, lineno)
            violations = validate(doc)
            if violations:
                raise CorpusValidationError(doc.id, violations)
            if doc.id in seen_ids:
                raise CorpusValidationError(doc.id, ["duplicate essay id"])
            seen_ids.add(doc.id)
            docs.append(doc)
    return docs


def serialize(docs, path):
    """Write essays as JSON lines; inverse of load_corpus on validated
    corpora."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            handle.write(json.dumps(_doc_to_json(doc), ensure_ascii=False))
            handle.write("\n")


# ---------------------------------------------------------------------------
# Fallback stemmer

# Longest match first; a suffix is stripped only if >= 3 characters remain.
_SUFFIXES = ("ing", "es", "ed", "ly", "s")


def stem_word(form: str) -> str:
    lowered = form.lower()
    for suffix in _SUFFIXES:
        if lowered.endswith(suffix) and len(lowered) - len(suffix) >= 3:
            return lowered[:-len(suffix)]
    return lowered


def derive_stems(doc: EssayDoc) -> EssayDoc:
    """Fill missing token stems via the fixed suffix table. Idempotent:
    provided stems are never touched."""
    new_sentences = []
    changed = False
    for sent in doc.sentences:
        new_tokens = []
        for tok in sent.tokens:
            if tok.stem:
                new_tokens.append(tok)
            else:
                new_tokens.append(replace(tok, stem=stem_word(tok.form)))
                changed = True
        if changed:
            new_sentences.append(replace(sent, tokens=tuple(new_tokens)))
        else:
            new_sentences.append(sent)
    if not changed:
        return doc
    return replace(doc, sentences=tuple(new_sentences))


def mention_kind(doc: EssayDoc, mention: Mention) -> str:
    """Mention kind, preferring the annotation and falling back to a POS
    and form based derivation."""
    if mention.kind is not None:
        return mention.kind
    sent = doc.sentences[mention.sentence]
    span = sent.tokens[mention.start:mention.end + 1]
    if not span:
        return "other"
    first = span[0]
    form = first.form.lower()
    if len(span) == 1:
        if first.pos == "PRP":
            if form.endswith("self") or form.endswith("selves"):
                return "reflexive_pronoun"
            return "personal_pronoun"
        if first.pos == "PRP$":
            return "possessive_determiner"
        if first.pos in ("NNP", "NNPS"):
            return "proper_noun"
        if first.pos == "DT" and form in DEMONSTRATIVE_FORMS:
            return "demonstrative_pronoun"
    else:
        if first.pos == "DT" and form in DEMONSTRATIVE_FORMS:
            return "demonstrative_determiner"
        if first.pos == "PRP$":
            return "possessive_determiner"
    if any(t.pos in ("NNP", "NNPS") for t in span):
        return "proper_noun"
    if form in ("a", "an"):
        return "indefinite_np"
    if form == "the":
        return "definite_np"
    return "other"
