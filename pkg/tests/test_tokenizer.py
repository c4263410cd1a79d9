import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nepemb.tokenizer import (
    CLS,
    MASK,
    PAD,
    SEP,
    SPECIAL_TOKENS,
    UNK,
    Vocab,
    VocabError,
    decode,
    encode,
    encode_batch,
    min_vocab_size,
    train_vocab,
)

from oracles import brute_force_segment, naive_train_vocab

small_words = st.text(alphabet=st.sampled_from("कखगमा"), min_size=1, max_size=6)
small_corpora = st.lists(st.lists(small_words, min_size=1, max_size=5).map(" ".join), min_size=1, max_size=8)


class TestTrainVocab:
    def test_hand_simulated_merge(self):
        vocab = train_vocab(["अअ अअ अअ"], vocab_size=8)
        assert vocab.tokens == (*SPECIAL_TOKENS, "##अ", "अ", "अअ")

    def test_specials_fixed(self):
        vocab = train_vocab(["क ख"], vocab_size=50)
        assert vocab.tokens[:5] == SPECIAL_TOKENS
        assert (PAD, UNK, CLS, SEP, MASK) == (0, 1, 2, 3, 4)

    def test_too_small_names_minimum(self):
        minimum = min_vocab_size(["कख गघ"])
        with pytest.raises(VocabError, match=f"minimum {minimum}"):
            train_vocab(["कख गघ"], vocab_size=minimum - 1)

    def test_empty_corpus_rejected(self):
        with pytest.raises(VocabError):
            train_vocab(["   "], vocab_size=10)

    def test_every_corpus_codepoint_is_a_token(self, mlm_texts, mlm_vocab):
        for ch in {c for t in mlm_texts for c in t if not c.isspace()}:
            assert ch in mlm_vocab

    def test_stops_when_no_merges_remain(self):
        vocab = train_vocab(["कख"], vocab_size=100)
        assert vocab.tokens[5:] == ("##ख", "क", "ख", "कख")

    def test_byte_identical_files(self, tmp_path, mlm_texts):
        train_vocab(mlm_texts, 200).save(tmp_path / "a.txt")
        train_vocab(mlm_texts, 200).save(tmp_path / "b.txt")
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    @settings(max_examples=150, deadline=None)
    @given(small_corpora, st.integers(0, 25))
    def test_matches_naive_merger(self, texts, extra):
        size = min_vocab_size(texts) + extra
        assert list(train_vocab(texts, size).tokens) == naive_train_vocab(texts, size)


class TestVocabFile:
    def test_round_trip(self, tmp_path, mlm_vocab):
        mlm_vocab.save(tmp_path / "v.txt")
        assert Vocab.load(tmp_path / "v.txt") == mlm_vocab
        lines = (tmp_path / "v.txt").read_text(encoding="utf-8").splitlines()
        assert lines[:5] == list(SPECIAL_TOKENS)

    def test_bad_files(self, tmp_path):
        (tmp_path / "v.txt").write_text("a\nb\n", encoding="utf-8")
        with pytest.raises(VocabError):
            Vocab.load(tmp_path / "v.txt")
        with pytest.raises(VocabError, match="duplicate"):
            Vocab([*SPECIAL_TOKENS, "क", "क"])


class TestEncode:
    def test_empty_text_frame(self, mlm_vocab):
        enc = encode("", mlm_vocab, max_len=8)
        assert enc.ids.tolist() == [CLS, SEP] + [PAD] * 6
        assert enc.mask.tolist() == [1, 1, 0, 0, 0, 0, 0, 0]

    def test_unknown_codepoint_maps_to_unk(self, mlm_vocab):
        enc = encode("Z", mlm_vocab, max_len=4)
        assert enc.ids.tolist() == [CLS, UNK, SEP, PAD]

    def test_truncation_keeps_sep_last(self, mlm_texts, mlm_vocab):
        text = " ".join(mlm_texts[:5])
        enc = encode(text, mlm_vocab, max_len=6)
        assert enc.ids[0] == CLS and enc.ids[-1] == SEP
        assert enc.mask.all()

    def test_in_vocab_round_trip(self, mlm_texts, mlm_vocab):
        for text in mlm_texts:
            assert decode(encode(text, mlm_vocab, 64).ids, mlm_vocab) == text

    def test_batch_shapes(self, mlm_texts, mlm_vocab):
        ids, mask = encode_batch(mlm_texts[:3], mlm_vocab, 16)
        assert ids.shape == mask.shape == (3, 16)
        assert encode_batch([], mlm_vocab, 16)[0].shape == (0, 16)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.text(alphabet=st.sampled_from("कखगमाहरू"), min_size=1, max_size=8), max_size=6),
           st.integers(2, 20))
    def test_frame_has_one_cls_and_one_sep(self, mlm_vocab, word_list, max_len):
        enc = encode(" ".join(word_list), mlm_vocab, max_len)
        assert enc.ids[0] == CLS
        assert (enc.ids == CLS).sum() == 1 and (enc.ids == SEP).sum() == 1
        n_real = int(enc.mask.sum())
        assert enc.ids[n_real - 1] == SEP
        assert (enc.ids[n_real:] == PAD).all()

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet=st.sampled_from("कखगमाहरूलेकोZ"), min_size=1, max_size=8))
    def test_greedy_longest_match_agrees_with_brute_force(self, mlm_vocab, word):
        assert mlm_vocab.segment_word(word) == brute_force_segment(word, mlm_vocab.tokens)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.sampled_from(["घर", "मा", "को", "राम", "हरू"]), min_size=1, max_size=6))
    def test_round_trip_whitespace_normalized(self, mlm_vocab, parts):
        text = "  ".join(parts) + " "
        assert decode(encode(text, mlm_vocab, 64).ids, mlm_vocab) == " ".join(text.split())


class TestDecode:
    def test_empty_frame(self, mlm_vocab):
        assert decode([CLS, SEP], mlm_vocab) == ""

    def test_out_of_range(self, mlm_vocab):
        with pytest.raises(VocabError, match="out of range"):
            decode([CLS, len(mlm_vocab), SEP], mlm_vocab)

    def test_continuation_merged(self):
        vocab = Vocab([*SPECIAL_TOKENS, "क", "##ख", "ग"])
        assert decode(np.array([CLS, 5, 6, 7, SEP]), vocab) == "कख ग"
