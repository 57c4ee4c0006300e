"""Corpus data model, IO round-trips, validation, and the fallback
stemmer / mention-kind derivation."""
import json

import pytest

from essayscore import annotate
from essayscore.annotate import (CorefChain, CorpusParseError,
                                 CorpusValidationError, ErrorAnnotation,
                                 Mention, derive_stems, load_corpus,
                                 mention_kind, serialize, stem_word,
                                 validate)
from helpers import (doc_from_parses, make_doc, sentence_from_parse,
                     sentence_from_tagged, write_corpus)


def _valid_doc(doc_id="e1", **kwargs):
    return doc_from_parses(
        "(ROOT (S (NP (DT The) (NN cat)) (VP (VBD sat)) (. .)))",
        "(ROOT (S (NP (PRP It)) (VP (VBD slept)) (. .)))",
        doc_id=doc_id, label="low", score=2.0, **kwargs)


class TestValidate:
    def test_valid_document_has_no_violations(self):
        assert validate(_valid_doc()) == []

    def test_validate_is_pure(self):
        doc = _valid_doc()
        assert validate(doc) == validate(doc)

    def test_bad_label(self):
        doc = doc_from_parses("(ROOT (NP (NN yes)))", label="great")
        assert len([v for v in validate(doc) if "label" in v]) == 1

    def test_chain_sentence_index_off_by_one(self):
        doc = make_doc(
            [sentence_from_tagged("yes/NN")],
            chains=[CorefChain(mentions=(
                Mention(sentence=1, start=0, end=0),))])
        violations = validate(doc)
        assert len(violations) == 1
        assert "out of range" in violations[0]

    def test_empty_pos(self):
        doc = make_doc([annotate.Sentence(tokens=(
            annotate.Token(form="cat", pos="", index=0),))])
        violations = validate(doc)
        assert len(violations) == 1
        assert "empty pos" in violations[0]

    def test_parse_leaf_count_mismatch(self):
        sent = sentence_from_tagged(
            "the/DT cat/NN", parse="(ROOT (NP (NN cat)))")
        violations = validate(make_doc([sent]))
        assert any("leaves" in v for v in violations)

    def test_mention_span_and_error_kind_checks(self):
        doc = make_doc(
            [sentence_from_tagged("the/DT cat/NN sat/VBD")],
            chains=[CorefChain(mentions=(
                Mention(sentence=0, start=2, end=1),))],
            errors=[ErrorAnnotation(sentence=0, kind="typo",
                                    start=0, end=0)])
        violations = validate(doc)
        assert any("start" in v for v in violations)
        assert any("unknown kind" in v for v in violations)


class TestCorpusIO:
    def test_roundtrip_identity(self, tmp_path):
        docs = [
            _valid_doc("a", chains=(CorefChain(mentions=(
                Mention(sentence=0, start=0, end=1, kind="definite_np"),
                Mention(sentence=1, start=0, end=0),)),),
                errors=(ErrorAnnotation(sentence=0, kind="spelling",
                                        start=1, end=1),)),
            _valid_doc("b"),
        ]
        path = write_corpus(tmp_path / "c.jsonl", docs)
        loaded = load_corpus(path)
        assert loaded == docs
        # serialize again: byte-identical file
        path2 = tmp_path / "c2.jsonl"
        serialize(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps({"id": "a", "sentences": [
            {"tokens": [{"form": "yes", "pos": "NN"}]}]})
        path.write_text(good + "\n{not json\n", encoding="utf-8")
        with pytest.raises(CorpusParseError) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_validation_error_names_essay(self, tmp_path):
        path = write_corpus(
            tmp_path / "v.jsonl",
            [doc_from_parses("(ROOT (NP (NN yes)))", doc_id="bad-one",
                             label="great")])
        with pytest.raises(CorpusValidationError) as err:
            load_corpus(path)
        assert err.value.essay_id == "bad-one"

    def test_duplicate_ids_rejected(self, tmp_path):
        path = write_corpus(tmp_path / "d.jsonl",
                            [_valid_doc("x"), _valid_doc("x")])
        with pytest.raises(CorpusValidationError):
            load_corpus(path)

    def test_missing_required_field(self, tmp_path):
        path = tmp_path / "m.jsonl"
        path.write_text(json.dumps({"id": "a"}) + "\n", encoding="utf-8")
        with pytest.raises(CorpusParseError):
            load_corpus(path)

    def test_blank_lines_are_skipped(self, tmp_path):
        path = tmp_path / "b.jsonl"
        serialize([_valid_doc("a")], path)
        path.write_text("\n" + path.read_text(encoding="utf-8") + "\n",
                        encoding="utf-8")
        assert [d.id for d in load_corpus(path)] == ["a"]


class TestStemmer:
    @pytest.mark.parametrize("form,stem", [
        ("cats", "cat"),        # plural -s
        ("running", "runn"),    # -ing, longest match first
        ("boxes", "box"),       # -es beats -s
        ("walked", "walk"),
        ("quickly", "quick"),
        ("the", "the"),         # too short to strip
        ("Dogs", "dog"),        # case-folded
        ("as", "as"),           # would leave < 3 chars
    ])
    def test_suffix_table(self, form, stem):
        assert stem_word(form) == stem

    def test_derive_stems_fills_and_is_idempotent(self):
        doc = _valid_doc()
        once = derive_stems(doc)
        assert all(t.stem for t in once.tokens())
        assert derive_stems(once) == once

    def test_provided_stems_untouched(self):
        tok = annotate.Token(form="running", pos="VBG", index=0,
                             stem="run")
        doc = make_doc([annotate.Sentence(tokens=(tok,))])
        assert next(derive_stems(doc).tokens()).stem == "run"


class TestMentionKind:
    def _kind(self, tagged, start, end):
        doc = make_doc([sentence_from_tagged(tagged)])
        return mention_kind(doc, Mention(sentence=0, start=start, end=end))

    def test_annotated_kind_wins(self):
        doc = make_doc([sentence_from_tagged("he/PRP")])
        m = Mention(sentence=0, start=0, end=0, kind="definite_np")
        assert mention_kind(doc, m) == "definite_np"

    @pytest.mark.parametrize("tagged,start,end,expected", [
        ("he/PRP ran/VBD", 0, 0, "personal_pronoun"),
        ("himself/PRP ran/VBD", 0, 0, "reflexive_pronoun"),
        ("themselves/PRP ran/VBD", 0, 0, "reflexive_pronoun"),
        ("his/PRP$ dog/NN", 0, 0, "possessive_determiner"),
        ("his/PRP$ dog/NN", 0, 1, "possessive_determiner"),
        ("Paris/NNP is/VBZ", 0, 0, "proper_noun"),
        ("this/DT is/VBZ", 0, 0, "demonstrative_pronoun"),
        ("this/DT dog/NN ran/VBD", 0, 1, "demonstrative_determiner"),
        ("a/DT dog/NN ran/VBD", 0, 1, "indefinite_np"),
        ("an/DT apple/NN fell/VBD", 0, 1, "indefinite_np"),
        ("the/DT dog/NN ran/VBD", 0, 1, "definite_np"),
        ("old/JJ Paris/NNP shone/VBD", 0, 1, "proper_noun"),
        ("dogs/NNS ran/VBD", 0, 0, "other"),
    ])
    def test_fallback_derivation(self, tagged, start, end, expected):
        assert self._kind(tagged, start, end) == expected
