"""Document-level syntactic complexity features."""
import pytest

from essayscore.synfeat import (SYN_FEATURE_NAMES, MissingParseError,
                                syntactic_complexity)
from essayscore import annotate
from helpers import doc_from_parses, make_doc, random_doc, sentence_from_parse

import numpy as np

SIMPLE = "(ROOT (S (NP (PRP I)) (VP (VBP run))))"


class TestSyntacticComplexity:
    def test_single_clause_hand_values(self):
        profile = syntactic_complexity(doc_from_parses(SIMPLE))
        assert profile["SYN_avgSentenceLength"] == 2.0
        assert profile["SYN_numClausesPerSen"] == 1.0
        assert profile["SYN_VPPerTunit"] == 1.0
        assert profile["SYN_TunitComplexityRatio"] == 1.0
        assert profile["SYN_numSentences"] == 1.0

    def test_feature_names_complete(self):
        profile = syntactic_complexity(doc_from_parses(SIMPLE))
        assert tuple(sorted(profile)) == tuple(sorted(SYN_FEATURE_NAMES))
        assert len(SYN_FEATURE_NAMES) == 28

    def test_duplication_invariance(self):
        single = syntactic_complexity(doc_from_parses(SIMPLE))
        double = syntactic_complexity(doc_from_parses(SIMPLE, SIMPLE))
        for name in SYN_FEATURE_NAMES:
            if name == "SYN_numSentences":
                assert double[name] == 2 * single[name]
            else:
                assert double[name] == pytest.approx(single[name],
                                                     abs=1e-12)

    def test_duplication_invariance_on_random_docs(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            doc = random_doc(rng, with_chains=False)
            doubled = make_doc(list(doc.sentences) * 2)
            one = syntactic_complexity(doc)
            two = syntactic_complexity(doubled)
            for name in SYN_FEATURE_NAMES:
                if name == "SYN_numSentences":
                    assert two[name] == 2 * one[name]
                else:
                    assert two[name] == pytest.approx(one[name],
                                                      abs=1e-9)

    def test_no_sbar_means_zero_dependent_ratio(self):
        profile = syntactic_complexity(doc_from_parses(SIMPLE))
        assert profile["SYN_DependentClauseRatio"] == 0.0
        assert profile["SYN_numSBARsPerSen"] == 0.0

    def test_consistency_identity_cn_per_unit(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            doc = random_doc(rng, with_chains=False)
            profile = syntactic_complexity(doc)
            t_units = profile["SYN_numTunitsPerSen"] * profile[
                "SYN_numSentences"]
            clauses = profile["SYN_numClausesPerSen"] * profile[
                "SYN_numSentences"]
            cn_a = profile["SYN_CNPerTunit"] * t_units
            cn_b = profile["SYN_ComplexNominalsPerClause"] * clauses
            assert cn_a == pytest.approx(cn_b, abs=1e-9)

    def test_avg_np_size_at_least_one(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            profile = syntactic_complexity(random_doc(rng,
                                                      with_chains=False))
            if profile["SYN_numNPsPerSen"] > 0:
                assert profile["SYN_avgNPSize"] >= 1.0

    def test_fragment_document_zero_denominators(self):
        profile = syntactic_complexity(
            doc_from_parses("(ROOT (NP (NN yes)))"))
        assert profile["SYN_numClausesPerSen"] == 0.0
        assert profile["SYN_MeanLengthofClauses"] == 0.0
        assert profile["SYN_TunitComplexityRatio"] == 0.0

    def test_missing_parse_names_sentence(self):
        sent = sentence_from_parse(SIMPLE)
        bare = annotate.Sentence(tokens=sent.tokens, parse=None)
        with pytest.raises(MissingParseError) as err:
            syntactic_complexity(make_doc([sent, bare]))
        assert err.value.sentence_index == 1
