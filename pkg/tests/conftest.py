from importlib.resources import files

import numpy as np
import pytest

from nepemb.encoder.config import ModelConfig, TrainSpec
from nepemb.encoder.training import finetune, init
from nepemb.preprocess import HindiLexicon, NormalizationMap, SuffixTable, lex_text
from nepemb.tokenizer import encode_batch, train_vocab

FIXTURES = files("nepemb.data").joinpath("fixtures")


def shipped_mlm_sentences() -> list[str]:
    return files("nepemb.data").joinpath("synthetic_mlm.txt").read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def lexicon():
    return HindiLexicon.load()


@pytest.fixture(scope="session")
def nmap():
    return NormalizationMap.load()


@pytest.fixture(scope="session")
def table():
    return SuffixTable.load()


@pytest.fixture(scope="session")
def mlm_texts(table):
    return [lex_text(s, table) for s in shipped_mlm_sentences()]


@pytest.fixture(scope="session")
def mlm_vocab(mlm_texts):
    return train_vocab(mlm_texts)


def tiny_config(vocab_size: int, **overrides) -> ModelConfig:
    base = dict(num_layers=2, num_heads=2, hidden_dim=16, ff_dim=32, vocab_size=vocab_size, max_len=24, dropout=0.1)
    base.update(overrides)
    return ModelConfig(**base)


@pytest.fixture(scope="session")
def trained_tiny(mlm_texts, mlm_vocab):
    """A small model briefly trained on the shipped corpus, shared by embedding tests."""
    cfg = tiny_config(len(mlm_vocab))
    ids, mask = encode_batch(mlm_texts, mlm_vocab, cfg.max_len)
    ckpt = finetune(init(cfg, 0), ids, mask, TrainSpec(epochs=5, learning_rate=1e-2, seed=0))
    return ckpt


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def write_tiny_run_config(directory, **extra) -> str:
    """A fast end-to-end config over the shipped fixtures, written to ``directory/run.yaml``."""
    import yaml

    data = {
        "seed": 0,
        "preset": "small",
        "model": {"num_layers": 1, "num_heads": 2, "hidden_dim": 16, "ff_dim": 32},
        "max_len": 16,
        "vocab_size": 300,
        "train": {"epochs": 1, "learning_rate": 1e-3},
        "probe": {"epochs": 5},
        "corpora": {"regulated": [str(FIXTURES / "regulated.txt")], "unregulated": [str(FIXTURES / "unregulated.txt")]},
        "eval_sets": [str(FIXTURES / f"{n}.tsv") for n in ("sentiment", "relatedness", "namedentity")],
        "classification": {"train": str(FIXTURES / "news_train.tsv"), "test": str(FIXTURES / "news_test.tsv")},
        "output_dir": str(directory / "out"),
    }
    data.update(extra)
    path = directory / "run.yaml"
    path.write_text(yaml.safe_dump(data, allow_unicode=True), encoding="utf-8")
    return str(path)


# one (number, title, passed, detail) entry per acceptance criterion that ran
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title}{suffix}")
