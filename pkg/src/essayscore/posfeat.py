"""POS tag densities and lexical variation measures (27 features).

Tag sets are the standard Penn Treebank groupings, pinned here because the
feature names alone do not determine them:

    nouns        NN NNS NNP NNPS      proper nouns  NNP NNPS
    pronouns     PRP PRP$ WP WP$      personal      PRP
    adjectives   JJ JJR JJS           adverbs       RB RBR RBS
    conjunctions CC                   interjections UH
    determiners  DT PDT WDT           prepositions  IN TO
    verbs        VB VBD VBG VBN VBP VBZ             wh-pronouns WP WP$
    modals       MD
    lexical words = nouns + verbs + adjectives + adverbs

Densities divide by the word-token count; variation features follow the
standard SLA formulas with verb types taken over case-folded lemmas when
available, else forms. Variation features with a zero denominator emit 0.
"""
from __future__ import annotations

import math

NOUN_TAGS = {"NN", "NNS", "NNP", "NNPS"}
PROPER_NOUN_TAGS = {"NNP", "NNPS"}
PRONOUN_TAGS = {"PRP", "PRP$", "WP", "WP$"}
PERSONAL_PRONOUN_TAGS = {"PRP"}
POSSESSIVE_PRONOUN_TAGS = {"PRP$"}
ADJECTIVE_TAGS = {"JJ", "JJR", "JJS"}
ADVERB_TAGS = {"RB", "RBR", "RBS"}
CONJUNCTION_TAGS = {"CC"}
INTERJECTION_TAGS = {"UH"}
DETERMINER_TAGS = {"DT", "PDT", "WDT"}
PREPOSITION_TAGS = {"IN", "TO"}
VERB_TAGS = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"}
WH_PRONOUN_TAGS = {"WP", "WP$"}
MODAL_TAGS = {"MD"}
LEXICAL_TAGS = NOUN_TAGS | VERB_TAGS | ADJECTIVE_TAGS | ADVERB_TAGS

_DENSITY_SETS = (
    ("POS_numNouns", NOUN_TAGS),
    ("POS_numProperNouns", PROPER_NOUN_TAGS),
    ("POS_numPronouns", PRONOUN_TAGS),
    ("POS_numPerPronouns", PERSONAL_PRONOUN_TAGS),
    ("POS_numAdjectives", ADJECTIVE_TAGS),
    ("POS_numAdverbs", ADVERB_TAGS),
    ("POS_numConjunctions", CONJUNCTION_TAGS),
    ("POS_numInterjections", INTERJECTION_TAGS),
    ("POS_numDeterminers", DETERMINER_TAGS),
    ("POS_numPrepositions", PREPOSITION_TAGS),
    ("POS_numVerbs", VERB_TAGS),
    ("POS_numWhPronouns", WH_PRONOUN_TAGS),
    ("POS_numVerbsVBD", {"VBD"}),
    ("POS_numVerbsVBG", {"VBG"}),
    ("POS_numVerbsVBN", {"VBN"}),
    ("POS_numVerbsVBP", {"VBP"}),
    ("POS_numVerbsVBZ", {"VBZ"}),
    ("POS_numModalVerbs", MODAL_TAGS),
)


class UndefinedInputError(ValueError):
    pass


def pos_density(doc) -> dict:
    """The 18 tag-set densities, each in [0, 1]."""
    words = doc.word_tokens()
    if not words:
        raise UndefinedInputError("pos_density needs at least one word")
    total = len(words)
    return {name: sum(1 for t in words if t.pos in tags) / total
            for name, tags in _DENSITY_SETS}


def _verb_type(token):
    if token.lemma:
        return token.lemma.lower()
    return token.form.lower()


def lexical_variation(doc) -> dict:
    """The 9 variation features. Verb-variation features fall back to 0
    when the essay has no verbs."""
    words = doc.word_tokens()
    if not words:
        raise UndefinedInputError(
            "lexical_variation needs at least one word")
    lexical = [t for t in words if t.pos in LEXICAL_TAGS]
    nouns = sum(1 for t in words if t.pos in NOUN_TAGS)
    adjectives = sum(1 for t in words if t.pos in ADJECTIVE_TAGS)
    adverbs = sum(1 for t in words if t.pos in ADVERB_TAGS)
    verbs = [t for t in words if t.pos in VERB_TAGS]
    verb_types = len({_verb_type(t) for t in verbs})
    nlex = len(lexical)
    nverb = len(verbs)

    def ratio(num, den):
        return num / den if den else 0.0

    return {
        "POS_nounVar": ratio(nouns, nlex),
        "POS_adjectiveVariation": ratio(adjectives, nlex),
        "POS_adverbVariation": ratio(adverbs, nlex),
        "POS_modifierVariation": ratio(adjectives + adverbs, nlex),
        "POS_verbVar1": ratio(verb_types, nverb),
        "POS_verbVar2": ratio(verb_types, nlex),
        "POS_squaredVerbVar1": ratio(verb_types ** 2, nverb),
        "POS_correctedVerbVariation1": (
            verb_types / math.sqrt(2 * nverb) if nverb else 0.0),
        "POS_numLexicalWords": ratio(nlex, len(words)),
    }


def pos_profile(doc) -> dict:
    """All 27 POS features keyed by name."""
    out = pos_density(doc)
    out.update(lexical_variation(doc))
    return out
