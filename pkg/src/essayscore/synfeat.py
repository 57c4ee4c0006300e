"""Document-level syntactic complexity (28 features).

Per-sentence counts come from treeops.syntactic_counts; document values
are ratios of document totals (not means of per-sentence ratios). Ratios
with a zero denominator emit 0.
"""
from __future__ import annotations

from . import treeops

SYN_FEATURE_NAMES = (
    "SYN_avgSentenceLength",
    "SYN_MeanLengthofClauses",
    "SYN_MeanLengthofTunits",
    "SYN_ComplexNominalsPerClause",
    "SYN_CNPerTunit",
    "SYN_ComplexTunitRatio",
    "SYN_CoordinatePhrasesPerClause",
    "SYN_CoordPerTunit",
    "SYN_DependentClauseRatio",
    "SYN_DependentClausesPerTunit",
    "SYN_TunitComplexityRatio",
    "SYN_VPPerTunit",
    "SYN_numTunitsPerSen",
    "SYN_numClausesPerSen",
    "SYN_avgParseTreeHeightPerSen",
    "SYN_numSentences",
    "SYN_numConstitutentsPerSen",
    "SYN_numConjPPerSen",
    "SYN_avgNPSize",
    "SYN_numNPsPerSen",
    "SYN_numPPSize",
    "SYN_numPPsPerSen",
    "SYN_numRRCsPerSen",
    "SYN_numSBARsPerSen",
    "SYN_numSubtreesPerSen",
    "SYN_numVPSize",
    "SYN_numVPsPerSen",
    "SYN_WhPhrasesPerSen",
)


class MissingParseError(ValueError):
    def __init__(self, sentence_index):
        super().__init__(f"sentence {sentence_index} has no parse")
        self.sentence_index = sentence_index


def syntactic_complexity(doc) -> dict:
    """The 28 syntactic features for one essay. Every sentence must carry
    a parse."""
    totals = None
    heights = 0
    nsen = len(doc.sentences)
    for si, sent in enumerate(doc.sentences):
        if sent.parse is None:
            raise MissingParseError(si)
        counts = treeops.syntactic_counts(sent.tree())
        heights += counts.height
        if totals is None:
            totals = counts
        else:
            totals = treeops.SyntacticCounts(*[
                a + b for a, b in zip(
                    _astuple(totals), _astuple(counts))])
    if totals is None:
        raise MissingParseError(0)

    def ratio(num, den):
        return num / den if den else 0.0

    return {
        "SYN_avgSentenceLength": ratio(totals.words, nsen),
        "SYN_MeanLengthofClauses": ratio(totals.words, totals.clauses),
        "SYN_MeanLengthofTunits": ratio(totals.words, totals.t_units),
        "SYN_ComplexNominalsPerClause": ratio(
            totals.complex_nominals, totals.clauses),
        "SYN_CNPerTunit": ratio(totals.complex_nominals, totals.t_units),
        "SYN_ComplexTunitRatio": ratio(
            totals.complex_t_units, totals.t_units),
        "SYN_CoordinatePhrasesPerClause": ratio(
            totals.coordinate_phrases, totals.clauses),
        "SYN_CoordPerTunit": ratio(
            totals.coordinate_phrases, totals.t_units),
        "SYN_DependentClauseRatio": ratio(
            totals.dependent_clauses, totals.clauses),
        "SYN_DependentClausesPerTunit": ratio(
            totals.dependent_clauses, totals.t_units),
        "SYN_TunitComplexityRatio": ratio(totals.clauses, totals.t_units),
        "SYN_VPPerTunit": ratio(totals.verb_phrases, totals.t_units),
        "SYN_numTunitsPerSen": ratio(totals.t_units, nsen),
        "SYN_numClausesPerSen": ratio(totals.clauses, nsen),
        "SYN_avgParseTreeHeightPerSen": ratio(heights, nsen),
        "SYN_numSentences": float(nsen),
        "SYN_numConstitutentsPerSen": ratio(totals.constituents, nsen),
        "SYN_numConjPPerSen": ratio(totals.conjps, nsen),
        "SYN_avgNPSize": ratio(totals.np_words, totals.noun_phrases),
        "SYN_numNPsPerSen": ratio(totals.noun_phrases, nsen),
        "SYN_numPPSize": ratio(totals.pp_words, totals.prep_phrases),
        "SYN_numPPsPerSen": ratio(totals.prep_phrases, nsen),
        "SYN_numRRCsPerSen": ratio(totals.rrcs, nsen),
        "SYN_numSBARsPerSen": ratio(totals.sbars, nsen),
        "SYN_numSubtreesPerSen": ratio(totals.subtrees, nsen),
        "SYN_numVPSize": ratio(totals.vp_words, totals.verb_phrases),
        "SYN_numVPsPerSen": ratio(totals.verb_phrases, nsen),
        "SYN_WhPhrasesPerSen": ratio(totals.wh_phrases, nsen),
    }


def _astuple(counts: treeops.SyntacticCounts):
    return (counts.words, counts.clauses, counts.t_units,
            counts.complex_t_units, counts.dependent_clauses,
            counts.coordinate_phrases, counts.complex_nominals,
            counts.verb_phrases, counts.noun_phrases, counts.prep_phrases,
            counts.sbars, counts.rrcs, counts.conjps, counts.wh_phrases,
            counts.constituents, counts.subtrees, counts.height,
            counts.np_words, counts.vp_words, counts.pp_words)
