import numpy as np
import pytest

from nepemb.embeddings import (
    EmbeddingError,
    EmbeddingMatrix,
    contexts_for,
    embed_sentence,
    embed_sentences,
    embed_tokens,
    embed_word,
    embed_words,
    export_vectors,
    import_vectors,
)
from nepemb.encoder.config import preset
from nepemb.encoder.training import init


@pytest.fixture(scope="module")
def sentence(mlm_texts):
    return mlm_texts[0]


@pytest.fixture(scope="module")
def repeated_word(mlm_texts):
    """A word together with two different sentences that contain it."""
    from collections import defaultdict

    seen = defaultdict(list)
    for s in mlm_texts:
        for w in set(s.split()):
            seen[w].append(s)
    word = next(w for w, ss in seen.items() if len(set(ss)) >= 2)
    return word, sorted(set(seen[word]))[:2]


class TestTokenVectors:
    def test_small_width(self, mlm_vocab, sentence):
        ckpt = init(preset("small", len(mlm_vocab), max_len=32), 0)
        vecs = embed_tokens(ckpt, mlm_vocab, sentence)
        assert vecs.shape == (sum(len(p) for p in mlm_vocab.segment(sentence)), 300)

    def test_deterministic(self, trained_tiny, mlm_vocab, sentence):
        np.testing.assert_array_equal(
            embed_tokens(trained_tiny, mlm_vocab, sentence), embed_tokens(trained_tiny, mlm_vocab, sentence)
        )

    def test_empty_text_gives_empty_matrix(self, trained_tiny, mlm_vocab):
        vecs = embed_tokens(trained_tiny, mlm_vocab, "")
        assert vecs.shape == (0, trained_tiny.config.hidden_dim)

    def test_context_dependent(self, trained_tiny, mlm_vocab, repeated_word):
        word, (a, b) = repeated_word
        assert not np.allclose(
            embed_word(trained_tiny, mlm_vocab, word, [a]), embed_word(trained_tiny, mlm_vocab, word, [b])
        )


class TestWordVectors:
    @staticmethod
    def _word_rows(ckpt, vocab, word, sentence):
        tokens = embed_tokens(ckpt, vocab, sentence)
        rows, pos = [], 0
        for w, pieces in zip(sentence.split(), vocab.segment(sentence)):
            if w == word:
                rows.append(tokens[pos : pos + len(pieces)])
            pos += len(pieces)
        return np.concatenate(rows)

    def test_single_context_equals_token_rows(self, trained_tiny, mlm_vocab, repeated_word):
        word, (a, _) = repeated_word
        expected = self._word_rows(trained_tiny, mlm_vocab, word, a).mean(0)
        np.testing.assert_allclose(embed_word(trained_tiny, mlm_vocab, word, [a]), expected, atol=1e-6)

    def test_two_contexts_average(self, trained_tiny, mlm_vocab, repeated_word):
        word, (a, b) = repeated_word
        ra = self._word_rows(trained_tiny, mlm_vocab, word, a)
        rb = self._word_rows(trained_tiny, mlm_vocab, word, b)
        expected = np.concatenate([ra, rb]).mean(0)
        np.testing.assert_allclose(embed_word(trained_tiny, mlm_vocab, word, [a, b]), expected, atol=1e-6)
        if len(ra) == len(rb):
            np.testing.assert_allclose(expected, (ra.mean(0) + rb.mean(0)) / 2, atol=1e-6)

    def test_no_context_embeds_word_alone(self, trained_tiny, mlm_vocab, repeated_word):
        word, _ = repeated_word
        np.testing.assert_allclose(
            embed_word(trained_tiny, mlm_vocab, word), embed_sentence(trained_tiny, mlm_vocab, word), atol=1e-6
        )

    def test_word_missing_from_context_rejected(self, trained_tiny, mlm_vocab, sentence):
        with pytest.raises(EmbeddingError, match="does not occur"):
            embed_word(trained_tiny, mlm_vocab, "अनुपस्थित", [sentence])

    def test_batch_matches_single(self, trained_tiny, mlm_vocab, mlm_texts):
        ctx = contexts_for(mlm_texts[0].split()[:3], mlm_texts, limit=3)
        words = list(ctx)
        batch = embed_words(trained_tiny, mlm_vocab, words, ctx)
        for w, row in zip(words, batch):
            np.testing.assert_allclose(row, embed_word(trained_tiny, mlm_vocab, w, ctx[w]), atol=1e-6)

    def test_contexts_for_limit(self, mlm_texts):
        word = mlm_texts[0].split()[0]
        found = contexts_for([word, "अनुपस्थित"], mlm_texts, limit=2)
        assert list(found) == [word] and len(found[word]) <= 2
        assert all(word in s.split() for s in found[word])


class TestSentenceVectors:
    def test_mean_of_token_vectors(self, trained_tiny, mlm_vocab, sentence):
        np.testing.assert_allclose(
            embed_sentence(trained_tiny, mlm_vocab, sentence),
            embed_tokens(trained_tiny, mlm_vocab, sentence).mean(0),
            atol=1e-6,
        )

    def test_batching_does_not_change_vectors(self, trained_tiny, mlm_vocab, mlm_texts):
        texts = mlm_texts[:10]
        together = embed_sentences(trained_tiny, mlm_vocab, texts, batch_size=4)
        for t, row in zip(texts, together):
            np.testing.assert_allclose(row, embed_sentence(trained_tiny, mlm_vocab, t), atol=1e-5)

    def test_cls_pooling(self, trained_tiny, mlm_vocab, sentence):
        v = embed_sentence(trained_tiny, mlm_vocab, sentence, pooling="cls")
        assert v.shape == (trained_tiny.config.hidden_dim,)
        assert not np.allclose(v, embed_sentence(trained_tiny, mlm_vocab, sentence))

    def test_empty_text_rejected(self, trained_tiny, mlm_vocab):
        with pytest.raises(EmbeddingError, match="no real tokens"):
            embed_sentence(trained_tiny, mlm_vocab, "   ")

    def test_unknown_pooling(self, trained_tiny, mlm_vocab, sentence):
        with pytest.raises(EmbeddingError, match="pooling"):
            embed_sentence(trained_tiny, mlm_vocab, sentence, pooling="max")


class TestVectorFiles:
    def test_round_trip_exact(self, tmp_path, rng):
        matrix = EmbeddingMatrix(rng.normal(size=(20, 7)).astype(np.float32), [f"शब्द{i}" for i in range(20)])
        export_vectors(matrix, tmp_path / "v.txt")
        back = import_vectors(tmp_path / "v.txt")
        assert back.keys == matrix.keys
        np.testing.assert_array_equal(back.vectors, matrix.vectors)

    def test_trained_round_trip(self, tmp_path, trained_tiny, mlm_vocab, mlm_texts):
        vecs = embed_sentences(trained_tiny, mlm_vocab, mlm_texts[:5])
        matrix = EmbeddingMatrix(vecs, [f"s{i}" for i in range(5)])
        export_vectors(matrix, tmp_path / "v.txt")
        np.testing.assert_array_equal(import_vectors(tmp_path / "v.txt").vectors, vecs)

    def test_duplicate_key_on_export(self, tmp_path):
        with pytest.raises(EmbeddingError, match="duplicate"):
            export_vectors(EmbeddingMatrix(np.zeros((2, 3)), ["a", "a"]), tmp_path / "v.txt")

    def test_duplicate_key_on_import(self, tmp_path):
        (tmp_path / "v.txt").write_text("2 1\na 0\na 1\n", encoding="utf-8")
        with pytest.raises(EmbeddingError, match="duplicate"):
            import_vectors(tmp_path / "v.txt")

    def test_mismatched_dimension(self, tmp_path):
        (tmp_path / "v.txt").write_text("2 3\na 0 0 0\nb 1 1\n", encoding="utf-8")
        with pytest.raises(EmbeddingError, match=r"v.txt:3: expected 3 values"):
            import_vectors(tmp_path / "v.txt")

    def test_row_count_mismatch(self, tmp_path):
        (tmp_path / "v.txt").write_text("3 1\na 0\n", encoding="utf-8")
        with pytest.raises(EmbeddingError, match="declares 3"):
            import_vectors(tmp_path / "v.txt")

    def test_whitespace_key_rejected(self, tmp_path):
        with pytest.raises(EmbeddingError, match="whitespace"):
            export_vectors(EmbeddingMatrix(np.zeros((1, 2)), ["a b"]), tmp_path / "v.txt")

    def test_non_finite_rejected(self):
        with pytest.raises(EmbeddingError, match="non-finite"):
            EmbeddingMatrix(np.array([[np.nan]]), ["a"])
