import itertools
import unicodedata

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nepemb import synthetic
from nepemb.corpus import Corpus, Document, SourceCategory, Stage
from nepemb.preprocess import (
    HindiLexicon,
    NormalizationMap,
    PreprocessError,
    SuffixTable,
    filter_non_nepali,
    lex_text,
    lexical_split,
    run_pipeline,
    standardize,
    words,
)

from oracles import DEVANAGARI, brute_force_split, fuzz_devanagari, planted_fixture

devanagari_text = st.text(alphabet=st.sampled_from(DEVANAGARI + [" ", "a", "."]), max_size=30)


def _raw(doc_id, text):
    return Document(id=doc_id, text=text, source_category=SourceCategory.REGULATED, origin="t")


class TestHindiLexicon:
    def test_shipped_list_has_exactly_100_unique_entries(self, lexicon):
        assert len(lexicon) == 100
        assert len(set(lexicon.entries)) == 100

    def test_entries_are_nfc_without_whitespace(self, lexicon):
        for entry in lexicon.entries:
            assert entry == unicodedata.normalize("NFC", entry)
            assert not any(ch.isspace() for ch in entry)

    def test_invalid_entries_rejected(self):
        with pytest.raises(PreprocessError):
            HindiLexicon(("है", "है"))
        with pytest.raises(PreprocessError):
            HindiLexicon(("दो शब्द",))

    def test_custom_file(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# comment\nअलग\n", encoding="utf-8")
        assert HindiLexicon.load(path).entries == ("अलग",)

    def test_synthetic_vocabulary_is_clean(self, lexicon):
        for word in {w for texts in synthetic.two_domain_corpus(50).values() for t in texts for w in t.split()}:
            assert word not in lexicon.entries


class TestFilter:
    def test_standalone_entry_drops_and_is_reported(self, lexicon):
        entry = lexicon.entries[0]
        decision = filter_non_nepali(f"म घर जान्छु {entry} भने", lexicon)
        assert not decision.keep
        assert decision.matched == (entry,)

    def test_no_match_keeps(self, lexicon):
        assert filter_non_nepali("म घर जान्छु", lexicon).keep

    def test_substring_inside_longer_word_keeps(self, lexicon):
        entry = next(e for e in lexicon.entries if len(e) >= 2)
        longer = "अ" + entry + "हरू"
        assert longer not in lexicon.entries
        assert filter_non_nepali(f"यो {longer} हो", lexicon).keep

    def test_punctuation_bounded_match(self, lexicon):
        entry = lexicon.entries[1]
        decision = filter_non_nepali(f"उनले भने,{entry}।", lexicon)
        assert decision.matched == (entry,)

    def test_words_split_on_danda_and_punctuation(self):
        assert words("राम, सीता। हरि!") == ["राम", "सीता", "हरि"]

    def test_planted_fixture(self, lexicon):
        texts, flags = planted_fixture(lexicon.entries, n_docs=60, seed=3)
        assert [not filter_non_nepali(t, lexicon).keep for t in texts] == flags


class TestStandardize:
    def test_ascii_unchanged(self, nmap):
        assert standardize("plain ASCII, 123!", nmap) == "plain ASCII, 123!"

    def test_doubled_vowel_sign_collapses(self, nmap):
        word = "नीीलो"  # न + ी + ी + ल + ो
        assert standardize(word, nmap) == "नीलो"

    def test_tripled_vowel_sign_collapses(self, nmap):
        assert standardize("कििि", nmap) == "कि"

    def test_split_vowel_pair_maps_to_single_sign(self, nmap):
        assert standardize("काे", nmap) == "को"
        assert standardize("अा", nmap) == "आ"

    def test_nfc_applied_first(self, nmap):
        decomposed = "क़"  # क + nukta, the NFD form of क़
        assert standardize("क़", nmap) == standardize(decomposed, nmap) == "क"

    def test_map_rules_cannot_expand(self):
        with pytest.raises(PreprocessError, match="expands"):
            NormalizationMap((("क", "कख"),))

    def test_custom_map_file(self, tmp_path):
        path = tmp_path / "map.tsv"
        path.write_text("ख\tक\n", encoding="utf-8")
        assert standardize("खख", NormalizationMap.load(path)) == "कक"

    @settings(max_examples=500, deadline=None)
    @given(devanagari_text)
    def test_idempotent_and_non_expanding(self, nmap, text):
        once = standardize(text, nmap)
        assert standardize(once, nmap) == once
        assert len(once) <= len(text)

    def test_fuzzed_batch(self, nmap):
        for text in fuzz_devanagari(np.random.default_rng(1), 500):
            once = standardize(text, nmap)
            assert standardize(once, nmap) == once


class TestLexicalSplit:
    def test_no_suffix(self, table):
        assert lexical_split("किताब", table) == ["किताब"]

    def test_single_suffix(self, table):
        assert lexical_split("घरमा", table) == ["घर", "मा"]

    def test_stacked_suffixes(self, table):
        assert lexical_split("केटाहरूको", table) == ["केटा", "हरू", "को"]

    def test_min_stem_len_stops_stripping(self, table):
        assert lexical_split("कमा", table) == ["कमा"]
        assert lexical_split("घरमा", SuffixTable(table.suffixes, min_stem_len=3)) == ["घरमा"]

    def test_at_most_two_strips(self, table):
        assert lexical_split("घरहरूमाको", table) == ["घरहरू", "मा", "को"]

    def test_longest_suffix_preferred(self):
        t = SuffixTable(("मा", "ामा"), min_stem_len=1)
        assert lexical_split("रामामा", t) == ["राम", "ामा"]

    def test_table_rejects_duplicates_and_empty(self):
        with pytest.raises(PreprocessError):
            SuffixTable(("को", "को"))
        with pytest.raises(PreprocessError):
            SuffixTable(("",))

    def test_lex_text_joins_with_single_spaces(self, table):
        assert lex_text("  घरमा   केटाहरूको ", table) == "घर मा केटा हरू को"

    @settings(max_examples=300, deadline=None)
    @given(devanagari_text)
    def test_concatenation_identity(self, table, text):
        for word in text.split():
            assert "".join(lexical_split(word, table)) == word

    def test_agrees_with_brute_force_on_constructed_words(self, table):
        stems = ["घर", "क", "केटा", "नेपाल", "मामा", "कोको", "लेले", "बारेमा"]
        checked = 0
        for stem in stems:
            for k in range(4):
                for combo in itertools.product(table.suffixes, repeat=k):
                    word = stem + "".join(combo)
                    if len(word) > 12:
                        continue
                    assert lexical_split(word, table) == brute_force_split(word, table.suffixes)
                    checked += 1
        assert checked > 1000


class TestPipeline:
    def test_empty_corpus(self):
        out, report = run_pipeline(Corpus())
        assert len(out) == 0
        assert report.to_dict() == {
            "filter": {"input": 0, "kept": 0, "dropped": 0},
            "standardize": {"input": 0, "kept": 0, "dropped": 0},
            "lex": {"input": 0, "kept": 0, "dropped": 0},
            "dropped": {},
        }

    def test_one_of_two_dropped(self, lexicon):
        corpus = Corpus([_raw("a", "राम घरमा छ"), _raw("b", f"राम {lexicon.entries[0]} छ")])
        out, report = run_pipeline(corpus, lexicon)
        assert out.ids == ["a"]
        assert report.filter.dropped == 1
        assert report.filter.kept + report.filter.dropped == 2
        assert report.dropped == {"b": [lexicon.entries[0]]}

    def test_survivors_are_lexed_standardized_text(self, lexicon, nmap, table):
        corpus = Corpus([_raw("a", "केटाहरूको  घरमा नीील")])
        out, _ = run_pipeline(corpus, lexicon, nmap, table)
        doc = out["a"]
        assert doc.stage is Stage.LEXED
        assert doc.text == lex_text(standardize("केटाहरूको  घरमा नीील", nmap), table) == "केटा हरू को घर मा नील"

    def test_non_raw_input_rejected(self):
        doc = _raw("a", "क").advance(Stage.FILTERED)
        with pytest.raises(Exception, match="expected raw"):
            run_pipeline(Corpus([doc]))

    def test_deterministic(self):
        corpus = Corpus(_raw(str(i), t) for i, t in enumerate(synthetic.sentences("unregulated", 30)))
        a, ra = run_pipeline(corpus)
        b, rb = run_pipeline(corpus)
        assert list(a) == list(b)
        assert ra.to_dict() == rb.to_dict()
