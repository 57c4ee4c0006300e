"""Discourse features: word overlap, referential expressions, discourse
connectives, entity-grid transitions, and coreference chain statistics.

Pinned operationalizations:

* overlap units: content word = case-folded form of a lexical-tag token;
  noun = noun-tag form; stem = stem of a content word; argument = noun
  stem or personal-pronoun form. Local overlap = fraction of adjacent
  sentence pairs sharing a unit, global = fraction of all unordered pairs.
* entity = case-folded head noun (rightmost noun-tag terminal) of an NP;
  role S when the NP is immediately dominated by S and immediately
  precedes a VP sister, O when immediately dominated by VP, X otherwise,
  "-" when the entity is absent from a sentence. One transition per
  entity per adjacent sentence pair.
* connective usage without annotations: a token is a discourse connective
  when its POS is CC and the CC's parent dominates two or more S nodes,
  or when its preterminal's parent is S, SBAR or PRN, or an ADVP directly
  under S or SBAR. The sense is the lexicon's majority sense. Annotated
  sentences are taken verbatim and the heuristic never runs on them.
"""
from __future__ import annotations

from . import annotate, posfeat

ROLE_ORDER = ("S", "O", "X", "N")  # N = absent ("-") in grid notation

OVERLAP_FEATURE_NAMES = (
    "DISC_contentOverlapLocal", "DISC_contentOverlapGlobal",
    "DISC_nounOverlapLocal", "DISC_nounOverlapGlobal",
    "DISC_stemOverlapLocal", "DISC_stemOverlapGlobal",
    "DISC_argOverlapLocal", "DISC_argOverlapGlobal",
)
REFEX_FEATURE_NAMES = (
    "DISC_defArtPerWord", "DISC_defArtPerSen",
    "DISC_pronounsPerWord", "DISC_pronounsPerSen",
    "DISC_perPronounsPerWord", "DISC_perPronounsPerSen",
    "DISC_possPronounsPerWord", "DISC_possPronounsPerSen",
    "DISC_pronounsPerNoun", "DISC_properNounsPerNoun",
)
CONN_FEATURE_NAMES = (
    "DISC_discConnPerSen", "DISC_nonDiscConnPerSen", "DISC_allConnPerSen",
    "DISC_expansionPerSen", "DISC_contingencyPerSen",
    "DISC_comparisonPerSen", "DISC_temporalPerSen",
)
ENTITY_TRANSITION_NAMES = tuple(
    f"DISC_egrid_{a}{b}" for a in ROLE_ORDER for b in ROLE_ORDER)
ENTITY_DENSITY_NAMES = (
    "DISC_entitiesPerSen", "DISC_entitiesPerText",
    "DISC_uniqueEntities", "DISC_wordsPerEntity",
)
CHAIN_FEATURE_NAMES = (
    "DISC_chainAvgLen",
    "DISC_chainPropPerPronouns",
    "DISC_chainPropDemPronouns",
    "DISC_chainPropReflexives",
    "DISC_chainPropProperNouns",
    "DISC_chainPropPossDet",
    "DISC_chainPropDemDet",
    "DISC_chainPropIndefNP",
    "DISC_chainPropDefNP",
)

_CHAIN_KIND_TO_FEATURE = {
    "personal_pronoun": "DISC_chainPropPerPronouns",
    "demonstrative_pronoun": "DISC_chainPropDemPronouns",
    "reflexive_pronoun": "DISC_chainPropReflexives",
    "proper_noun": "DISC_chainPropProperNouns",
    "possessive_determiner": "DISC_chainPropPossDet",
    "demonstrative_determiner": "DISC_chainPropDemDet",
    "indefinite_np": "DISC_chainPropIndefNP",
    "definite_np": "DISC_chainPropDefNP",
}


class LexiconError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Word overlap

def _sentence_units(sent):
    content = set()
    nouns = set()
    stems = set()
    args = set()
    for tok in sent.tokens:
        form = tok.form.lower()
        stem = (tok.stem or annotate.stem_word(tok.form)).lower()
        if tok.pos in posfeat.LEXICAL_TAGS:
            content.add(form)
            stems.add(stem)
        if tok.pos in posfeat.NOUN_TAGS:
            nouns.add(form)
            args.add(stem)
        if tok.pos == "PRP":
            args.add(form)
    return content, nouns, stems, args


def overlap_features(doc) -> dict:
    """Local and global overlap for the four unit types. Single-sentence
    documents have no pairs and emit all zeros."""
    units = [_sentence_units(s) for s in doc.sentences]
    n = len(units)
    local_pairs = [(i, i + 1) for i in range(n - 1)]
    global_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = {}
    names = (("content", 0), ("noun", 1), ("stem", 2), ("arg", 3))
    for name, idx in names:
        for scope, pairs in (("Local", local_pairs),
                             ("Global", global_pairs)):
            if not pairs:
                value = 0.0
            else:
                hits = sum(1 for i, j in pairs
                           if units[i][idx] & units[j][idx])
                value = hits / len(pairs)
            out[f"DISC_{name}Overlap{scope}"] = value
    return out


# ---------------------------------------------------------------------------
# Referential expressions

def refex_features(doc) -> dict:
    words = doc.word_tokens()
    if not words:
        raise posfeat.UndefinedInputError(
            "refex_features needs at least one word")
    nsen = len(doc.sentences)
    nwords = len(words)
    nnouns = sum(1 for t in words if t.pos in posfeat.NOUN_TAGS)
    def_art = sum(1 for t in words
                  if t.pos == "DT" and t.form.lower() == "the")
    pronouns = sum(1 for t in words if t.pos in posfeat.PRONOUN_TAGS)
    per_pron = sum(1 for t in words
                   if t.pos in posfeat.PERSONAL_PRONOUN_TAGS)
    poss_pron = sum(1 for t in words
                    if t.pos in posfeat.POSSESSIVE_PRONOUN_TAGS)
    proper = sum(1 for t in words if t.pos in posfeat.PROPER_NOUN_TAGS)

    def per_noun(count):
        return count / nnouns if nnouns else 0.0

    return {
        "DISC_defArtPerWord": def_art / nwords,
        "DISC_defArtPerSen": def_art / nsen,
        "DISC_pronounsPerWord": pronouns / nwords,
        "DISC_pronounsPerSen": pronouns / nsen,
        "DISC_perPronounsPerWord": per_pron / nwords,
        "DISC_perPronounsPerSen": per_pron / nsen,
        "DISC_possPronounsPerWord": poss_pron / nwords,
        "DISC_possPronounsPerSen": poss_pron / nsen,
        "DISC_pronounsPerNoun": per_noun(pronouns),
        "DISC_properNounsPerNoun": per_noun(proper),
    }


# ---------------------------------------------------------------------------
# Connectives

def load_connective_lexicon(path) -> dict:
    """TSV of ``form<TAB>sense``; multi-word forms space-joined. Keys are
    case-folded token tuples."""
    lexicon = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise LexiconError(
                    f"{path}:{lineno}: expected form<TAB>sense")
            form, sense = parts
            if sense not in annotate.SENSES:
                raise LexiconError(
                    f"{path}:{lineno}: unknown sense {sense!r}")
            lexicon[tuple(form.lower().split())] = sense
    if not lexicon:
        raise LexiconError(f"{path}: empty connective lexicon")
    return lexicon


def _heuristic_usage(sent, start, length):
    tree = sent.tree()
    if tree is None:
        return "non-discourse"
    terminals = tree.terminals()
    if start >= len(terminals):
        return "non-discourse"
    pre = terminals[start]
    parent = pre.parent
    if parent is None:
        return "non-discourse"
    if pre.label == "CC":
        s_count = sum(1 for n in parent.walk() if n.label == "S")
        return "discourse" if s_count >= 2 else "non-discourse"
    if parent.label in ("S", "SBAR", "PRN"):
        return "discourse"
    if parent.label == "ADVP" and parent.parent is not None \
            and parent.parent.label in ("S", "SBAR"):
        return "discourse"
    return "non-discourse"


def find_connectives(sent, lexicon):
    """Longest-match lexicon scan over one sentence. Returns a list of
    (start index, length, usage, sense). Annotated sentences are passed
    through verbatim."""
    if sent.connectives:
        return [(c.index, 1, c.usage, c.sense) for c in sent.connectives]
    forms = [t.form.lower() for t in sent.tokens]
    max_len = max((len(k) for k in lexicon), default=1)
    found = []
    i = 0
    while i < len(forms):
        match = None
        for length in range(min(max_len, len(forms) - i), 0, -1):
            key = tuple(forms[i:i + length])
            if key in lexicon:
                match = (length, lexicon[key])
                break
        if match is None:
            i += 1
            continue
        length, sense = match
        usage = _heuristic_usage(sent, i, length)
        found.append((i, length, usage,
                      sense if usage == "discourse" else "none"))
        i += length
    return found


def classify_connective(sent, index, lexicon):
    """(usage, sense) for the connective starting at a token index, or
    ("non-discourse", "none")-shaped None result when the token is not a
    connective at all."""
    for start, length, usage, sense in find_connectives(sent, lexicon):
        if start == index:
            return usage, sense
    return None


def connective_features(doc, lexicon) -> dict:
    nsen = len(doc.sentences)
    disc = nondisc = 0
    senses = {s: 0 for s in annotate.SENSES}
    for sent in doc.sentences:
        for _, _, usage, sense in find_connectives(sent, lexicon):
            if usage == "discourse":
                disc += 1
                if sense in senses:
                    senses[sense] += 1
            else:
                nondisc += 1
    return {
        "DISC_discConnPerSen": disc / nsen,
        "DISC_nonDiscConnPerSen": nondisc / nsen,
        "DISC_allConnPerSen": (disc + nondisc) / nsen,
        "DISC_expansionPerSen": senses["Expansion"] / nsen,
        "DISC_contingencyPerSen": senses["Contingency"] / nsen,
        "DISC_comparisonPerSen": senses["Comparison"] / nsen,
        "DISC_temporalPerSen": senses["Temporal"] / nsen,
    }


# ---------------------------------------------------------------------------
# Entity grid

def _np_head(np):
    head = None
    for term in np.terminals():
        if term.label in posfeat.NOUN_TAGS:
            head = term
    return head


def _np_role(np):
    parent = np.parent
    if parent is not None and parent.label == "S":
        sisters = parent.children
        idx = next(i for i, s in enumerate(sisters) if s is np)
        if any(s.label == "VP" for s in sisters[idx + 1:]):
            return "S"
    if parent is not None and parent.label == "VP":
        return "O"
    return "X"


_ROLE_PRIORITY = {"S": 0, "O": 1, "X": 2}


def _sentence_entities(sent):
    """Mentions of one sentence: {head: (role, words)} plus the mention
    list. Nested NPs sharing the head of an ancestor NP are folded into
    the outermost one."""
    tree = sent.tree()
    roles = {}
    mentions = []
    if tree is None:
        return roles, mentions
    for np in tree.walk():
        if np.label != "NP":
            continue
        head = _np_head(np)
        if head is None:
            continue
        entity = head.text.lower()
        role = _np_role(np)
        if entity not in roles or \
                _ROLE_PRIORITY[role] < _ROLE_PRIORITY[roles[entity]]:
            roles[entity] = role
        outermost = not any(
            a.label == "NP" and (h := _np_head(a)) is not None
            and h.text.lower() == entity
            for a in np.ancestors())
        if outermost:
            mentions.append((entity, np.word_count()))
    return roles, mentions


def entity_grid_features(doc) -> dict:
    """16 transition probabilities over {S,O,X,N} plus the 4 density
    features. Single-sentence documents emit all-zero transitions."""
    per_sentence = [_sentence_entities(s) for s in doc.sentences]
    entities = sorted({e for roles, _ in per_sentence for e in roles})
    nsen = len(doc.sentences)

    counts = {name: 0 for name in ENTITY_TRANSITION_NAMES}
    total = 0
    for entity in entities:
        column = [per_sentence[i][0].get(entity, "N") for i in range(nsen)]
        for a, b in zip(column, column[1:]):
            counts[f"DISC_egrid_{a}{b}"] += 1
            total += 1
    out = {name: (counts[name] / total if total else 0.0)
           for name in ENTITY_TRANSITION_NAMES}

    all_mentions = [m for _, mentions in per_sentence for m in mentions]
    nment = len(all_mentions)
    out["DISC_entitiesPerSen"] = nment / nsen if nsen else 0.0
    out["DISC_entitiesPerText"] = float(nment)
    out["DISC_uniqueEntities"] = float(len(entities))
    out["DISC_wordsPerEntity"] = (
        sum(w for _, w in all_mentions) / nment if nment else 0.0)
    return out


# ---------------------------------------------------------------------------
# Coreference chains

def chain_features(doc) -> dict:
    """Average chain length and the 8 mention-kind proportions. Zero
    chains emit all zeros."""
    out = {name: 0.0 for name in CHAIN_FEATURE_NAMES}
    if not doc.chains:
        return out
    lengths = [len(c.mentions) for c in doc.chains]
    out["DISC_chainAvgLen"] = sum(lengths) / len(lengths)
    total = sum(lengths)
    if total == 0:
        return out
    for chain in doc.chains:
        for mention in chain.mentions:
            kind = annotate.mention_kind(doc, mention)
            feature = _CHAIN_KIND_TO_FEATURE.get(kind)
            if feature is not None:
                out[feature] += 1
    for name in CHAIN_FEATURE_NAMES[1:]:
        out[name] /= total
    return out
