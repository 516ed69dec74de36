"""Tests for sentence splitting, lexicon handling, and mention scoring."""

import io

import pytest

from glsmooth.errors import DataError
from glsmooth.reports import (
    Lexicon,
    LexiconEntry,
    default_lexicon,
    extract_findings,
    load_lexicon,
    score_mention,
    split_sentences,
)
from glsmooth.taxonomy import default_taxonomy


@pytest.fixture(scope="module")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="module")
def vocabulary():
    return default_taxonomy().vocabulary()


class TestSplitSentences:
    def test_period_split(self):
        assert split_sentences("No pneumothorax. Likely pneumonia.") == [
            "no pneumothorax",
            "likely pneumonia",
        ]

    def test_empty(self):
        assert split_sentences("") == []
        assert split_sentences("  \n\n  ") == []

    def test_newline_runs(self):
        assert split_sentences("Effusion\n\nis stable") == ["effusion", "is stable"]

    def test_question_and_bang(self):
        assert split_sentences("Edema? Possibly! None seen") == [
            "edema",
            "possibly",
            "none seen",
        ]

    def test_whitespace_collapse(self):
        assert split_sentences("large   pleural\teffusion") == ["large pleural effusion"]

    def test_crlf(self):
        assert split_sentences("one\r\ntwo") == ["one", "two"]


class TestLoadLexicon:
    def test_basic_line(self):
        lex = load_lexicon("likely\t2\tuncertainty_cue\n")
        assert lex.entries == [LexiconEntry("likely", 2, "uncertainty_cue")]

    def test_multiword_zero_score(self):
        lex = load_lexicon("cannot be excluded\t0\tuncertainty_cue\n")
        assert lex.entries[0].score == 0

    def test_duplicate_pattern_rejected(self):
        text = "likely\t2\tuncertainty_cue\nlikely\t1\tuncertainty_cue\n"
        with pytest.raises(DataError, match="likely"):
            load_lexicon(text)

    def test_score_out_of_range_names_line(self):
        text = "# header\nfine\t1\tuncertainty_cue\nbroken\t7\tuncertainty_cue\n"
        with pytest.raises(DataError, match="line 3"):
            load_lexicon(text)

    def test_bad_kind(self):
        with pytest.raises(DataError, match="kind"):
            load_lexicon("likely\t2\thunch\n")

    def test_byte_stream(self):
        lex = load_lexicon(io.BytesIO(b"no\t-3\tnegation_cue\n"))
        assert len(lex) == 1

    def test_longest_first_ordering(self):
        lex = load_lexicon(
            "no\t-3\tnegation_cue\nno definite\t-2\tnegation_cue\n"
        )
        assert [e.pattern for e in lex.entries] == ["no definite", "no"]

    def test_default_lexicon_covers_every_level(self, lexicon):
        assert {e.score for e in lexicon.entries} == {-3, -2, -1, 0, 1, 2, 3}


class TestScoreMention:
    def test_simple_cue(self, lexicon):
        assert score_mention("likely pneumonia", 7, lexicon) == (2, "likely")

    def test_affirmative_default(self, lexicon):
        assert score_mention("pneumonia", 0, lexicon) == (3, None)

    def test_longer_pattern_wins_nested(self, lexicon):
        sentence = "no definite evidence of effusion"
        assert score_mention(sentence, sentence.index("effusion"), lexicon) == (
            -2,
            "no definite",
        )

    def test_nearest_cue_wins(self, lexicon):
        sentence = "no effusion but likely pneumonia"
        assert score_mention(sentence, sentence.index("pneumonia"), lexicon) == (
            2,
            "likely",
        )
        assert score_mention(sentence, sentence.index("effusion"), lexicon) == (-3, "no")

    def test_contained_cue_suppressed(self, lexicon):
        # "likely" fires inside "less likely" only as part of the longer cue
        sentence = "less likely pneumonia"
        assert score_mention(sentence, sentence.index("pneumonia"), lexicon) == (
            -1,
            "less likely",
        )

    def test_equidistant_tie_breaks_by_precedence(self):
        lex = Lexicon(
            [
                LexiconEntry("aaa", 2, "uncertainty_cue"),
                LexiconEntry("bbb", -1, "uncertainty_cue"),
            ]
        )
        # cue starts at 0 and 8, mention at 4: both are 4 away
        assert score_mention("aaa tgt bbb", 4, lex) == (2, "aaa")

    def test_no_match_inside_words(self, lexicon):
        # "not" must not fire inside "noted", "no" not inside "nodular"
        assert score_mention("nodular density noted", 0, lexicon) == (3, None)


class TestExtractFindings:
    def test_single_finding(self, lexicon, vocabulary):
        found = extract_findings("Findings likely represent pneumonia.", lexicon, vocabulary)
        assert [(f.raw_phrase, f.u, f.cue) for f in found] == [("pneumonia", 2, "likely")]

    def test_negated(self, lexicon, vocabulary):
        found = extract_findings("No pneumothorax.", lexicon, vocabulary)
        assert [(f.raw_phrase, f.u, f.cue) for f in found] == [("pneumothorax", -3, "no")]

    def test_sentence_indices(self, lexicon, vocabulary):
        found = extract_findings("No pneumothorax. Likely pneumonia.", lexicon, vocabulary)
        assert [(f.raw_phrase, f.sentence_index) for f in found] == [
            ("pneumothorax", 0),
            ("pneumonia", 1),
        ]

    def test_case_and_whitespace_invariance(self, lexicon, vocabulary):
        a = extract_findings("LIKELY   pneumonia.", lexicon, vocabulary)
        b = extract_findings("likely pneumonia.", lexicon, vocabulary)
        assert a == b

    def test_determinism(self, lexicon, vocabulary):
        text = "No effusion. Probable pneumonia versus atelectasis.\nEdema resolved."
        runs = [extract_findings(text, lexicon, vocabulary) for _ in range(3)]
        assert runs[0] == runs[1] == runs[2]

    def test_scores_in_range(self, lexicon, vocabulary):
        text = (
            "Likely pneumonia. No definite fracture. Edema cannot be excluded. "
            "Hernia is doubtful! Scoliosis."
        )
        for finding in extract_findings(text, lexicon, vocabulary):
            assert -3 <= finding.u <= 3

    def test_repeated_mentions_one_per_occurrence(self, lexicon, vocabulary):
        found = extract_findings("Pneumonia and more pneumonia.", lexicon, vocabulary)
        assert [f.raw_phrase for f in found] == ["pneumonia", "pneumonia"]

    def test_longer_vocab_phrase_claims_span(self, lexicon):
        # custom vocabulary where one phrase embeds another
        vocab = ["effusion", "pleural effusion"]
        found = extract_findings("Small pleural effusion.", lexicon, vocab)
        assert [f.raw_phrase for f in found] == ["pleural effusion"]

    def test_empty_report(self, lexicon, vocabulary):
        assert extract_findings("", lexicon, vocabulary) == []

    def test_unmatched_sentences_contribute_nothing(self, lexicon, vocabulary):
        found = extract_findings("The patient is comfortable.", lexicon, vocabulary)
        assert found == []
