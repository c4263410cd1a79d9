"""Command-line driver: ``nepemb <subcommand>``.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 numeric failure.
Structured logs go to stdout as one JSON object per line; a short human summary
goes to stderr. Every artifact lands under the output dir, which also receives
the echoed config and a ``manifest.json`` of file hashes.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import config as cfgmod
from .corpus import Corpus, CorpusError, SourceCategory, corpus_stats, ingest, load_corpus
from .embeddings import EmbeddingError, EmbeddingMatrix, contexts_for, embed_sentences, embed_words, export_vectors
from .encoder.checkpoint import Checkpoint, CheckpointError, load_checkpoint, save_checkpoint
from .encoder.config import ConfigError
from .encoder.model import ShapeError
from .encoder.training import NumericError, finetune, init
from .evaluation import (
    ComparisonReport,
    EvaluationError,
    compare_models,
    extrinsic_eval,
    intrinsic_eval,
    load_labeled_set,
    render_extrinsic,
    render_intrinsic,
    write_projection,
)
from .evaluation.report import IntrinsicReport, LabeledSet
from .preprocess import (
    HindiLexicon,
    NormalizationMap,
    PreprocessError,
    SuffixTable,
    lex_text,
    run_pipeline,
    standardize,
)
from .tokenizer import Vocab, VocabError, encode_batch, train_vocab

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
MANIFEST = "manifest.json"

RAW_DIR = "corpus/raw"
LEXED_DIR = "corpus/lexed"
VOCAB_FILE = "vocab.txt"
BASELINE_CKPT = "checkpoints/baseline.ckpt"
CANDIDATE_CKPT = "checkpoints/candidate.ckpt"
DATA_ERRORS = (CorpusError, PreprocessError, VocabError, CheckpointError, EvaluationError, EmbeddingError, ShapeError, OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Run:
    """Output dir, structured log and summary for one invocation."""

    def __init__(self, config: cfgmod.RunConfig, stdout: TextIO, stderr: TextIO):
        self.config = config
        self.root = Path(config.output_dir)
        self.stdout = stdout
        self.stderr = stderr

    def log(self, event: str, **fields) -> None:
        print(json.dumps({"event": event, **fields}, ensure_ascii=False, sort_keys=True), file=self.stdout, flush=True)

    def say(self, text: str) -> None:
        print(text, file=self.stderr, flush=True)

    def path(self, rel: str) -> Path:
        target = self.root / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def write_json(self, rel: str, data) -> Path:
        target = self.path(rel)
        target.write_text(json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return target

    def write_text(self, rel: str, text: str) -> Path:
        target = self.path(rel)
        target.write_text(text, encoding="utf-8")
        return target

    def finish(self) -> None:
        cfgmod.echo_config(self.config, self.root)
        write_manifest(self.root)


def write_manifest(root: Path) -> Path:
    files = {}
    for path in sorted(p for p in root.rglob("*") if p.is_file() and p.name != MANIFEST):
        files[path.relative_to(root).as_posix()] = hashlib.sha256(path.read_bytes()).hexdigest()
    target = root / MANIFEST
    target.write_text(json.dumps({"files": files}, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


# -- shared resolution helpers ---------------------------------------------------

def _existing(given: str | None, fallback: str | None, what: str, flag: str) -> Path:
    """First of: the flag value, the config value, an artifact already in the output dir."""
    for candidate in (given, fallback):
        if candidate:
            path = Path(candidate)
            if not path.exists():
                raise UsageError(f"{what} not found: {path}")
            return path
    raise UsageError(f"no {what}: pass {flag} or set it in the config")


def _output_or(run: Run, given: str | None, configured: str | None, rel: str, what: str, flag: str) -> Path:
    default = run.root / rel if rel else None
    found = str(default) if default is not None and default.exists() else None
    return _existing(given, configured or found, what, flag)


def _resources(args, config: cfgmod.RunConfig):
    lexicon = HindiLexicon.load(getattr(args, "lexicon", None) or config.lexicon)
    nmap = NormalizationMap.load(getattr(args, "normalization_map", None) or config.normalization_map)
    table = SuffixTable.load(getattr(args, "suffixes", None) or config.suffixes)
    return lexicon, nmap, table


def _prepare(nmap: NormalizationMap, table: SuffixTable):
    """Evaluation items go through the same standardization and splitting as the corpus."""
    return lambda text: lex_text(standardize(text, nmap), table)


def _load_corpus_or_files(paths: Sequence[Path], category: str) -> Corpus:
    corpus = Corpus()
    for path in paths:
        if path.is_dir() and (path / "metadata.json").is_file():
            for doc in load_corpus(path):
                corpus.add(doc)
        else:
            corpus, _ = ingest(path, category, corpus)
    return corpus


def _stats_payload(corpus: Corpus) -> dict:
    return {
        "total": corpus_stats(corpus).to_dict(),
        **{cat.value: corpus.filter(cat).stats().to_dict() for cat in SourceCategory},
    }


# -- stages ----------------------------------------------------------------------

def stage_ingest(run: Run, regulated: Sequence[str], unregulated: Sequence[str]) -> Corpus:
    if not regulated and not unregulated:
        raise UsageError("nothing to ingest: pass --regulated/--unregulated or set corpora in the config")
    corpus = Corpus(name="corpus")
    rejects = 0
    for category, paths in (("regulated", regulated), ("unregulated", unregulated)):
        for path in paths:
            corpus, result = ingest(path, category, corpus)
            rejects += result.rejects
            run.log("ingest", category=category, source=Path(path).name, documents=len(result.ids), rejects=result.rejects)
    corpus.save(run.path(RAW_DIR))
    run.say(f"ingested {len(corpus)} documents ({rejects} undecodable lines skipped) -> {run.root / RAW_DIR}")
    return corpus


def stage_preprocess(run: Run, corpus: Corpus, lexicon, nmap, table) -> Corpus:
    lexed, report = run_pipeline(corpus, lexicon, nmap, table)
    lexed.save(run.path(LEXED_DIR))
    run.write_json("reports/preprocess.json", report.to_dict())
    run.log("preprocess", **{k: v for k, v in report.to_dict().items() if k != "dropped"})
    run.say(f"preprocessed: kept {report.filter.kept}, dropped {report.filter.dropped} as non-Nepali")
    return lexed


def stage_stats(run: Run, corpus: Corpus) -> dict:
    payload = _stats_payload(corpus)
    run.write_json("reports/stats.json", payload)
    run.log("stats", **payload)
    total = payload["total"]
    run.say(
        f"{total['document_count']} documents, {total['word_token_count']} tokens, {total['word_type_count']} types"
    )
    return payload


def stage_train_vocab(run: Run, corpus: Corpus, vocab_size: int) -> Vocab:
    vocab = train_vocab(corpus.texts(), vocab_size)
    vocab.save(run.path(VOCAB_FILE))
    run.log("train-vocab", requested=vocab_size, size=len(vocab))
    run.say(f"vocabulary of {len(vocab)} tokens -> {run.root / VOCAB_FILE}")
    return vocab


def stage_baseline(run: Run, config: cfgmod.RunConfig, vocab: Vocab) -> Checkpoint:
    ckpt = init(config.model_config(len(vocab)), config.seed)
    save_checkpoint(ckpt, run.path(BASELINE_CKPT))
    run.log("init", preset=config.preset, seed=config.seed, config=ckpt.config.to_dict())
    return ckpt


def stage_finetune(run: Run, config: cfgmod.RunConfig, ckpt: Checkpoint, vocab: Vocab, corpus: Corpus) -> Checkpoint:
    if ckpt.config.vocab_size != len(vocab):
        raise VocabError(f"checkpoint expects {ckpt.config.vocab_size} tokens but the vocabulary has {len(vocab)}")
    texts = corpus.texts()
    if not texts:
        raise CorpusError("fine-tuning corpus is empty")
    ids, mask = encode_batch(texts, vocab, ckpt.config.max_len)
    width = int(mask.sum(1).max())
    ids, mask = ids[:, :width], mask[:, :width]
    spec = config.train_spec()
    records = []

    def on_epoch(record):
        records.append(record)
        run.log("epoch", **record)

    tuned = finetune(ckpt, ids, mask, spec, on_epoch=on_epoch)
    save_checkpoint(tuned, run.path(CANDIDATE_CKPT))
    run.write_json("reports/training.json", {"spec": spec.to_dict(), "epochs": records})
    last = f", final loss {records[-1]['loss']:.4f}" if records else ""
    run.say(f"fine-tuned {spec.epochs} epochs ({tuned.step} steps){last} -> {run.root / CANDIDATE_CKPT}")
    return tuned


def _write_projections(run: Run, prefix: str, report: IntrinsicReport) -> None:
    for set_name, clustering in report.clusterings.items():
        if clustering.coords is None:
            continue
        write_projection(
            run.path(f"reports/projections/{prefix}{set_name}.txt"),
            [f"{i}:{item}" for i, item in enumerate(clustering.items)],
            clustering.coords,
            clustering.assignments,
            clustering.gold,
        )


def stage_compare(run: Run, config: cfgmod.RunConfig, models, sets, classification, prepare) -> ComparisonReport:
    report = compare_models(
        models, sets, classification, config.seed, spec=config.probe_spec(), prepare=prepare, pooling=config.pooling
    )
    run.write_json("reports/comparison.json", report.to_dict())
    run.write_text("reports/comparison.txt", report.to_text())
    for role, intrinsic in report.intrinsic.items():
        _write_projections(run, f"{role}-", intrinsic)
    run.log("compare", **report.to_dict())
    run.say(report.to_text().rstrip())
    return report


# -- subcommands -----------------------------------------------------------------

def cmd_ingest(run: Run, args) -> None:
    corpus = stage_ingest(
        run, args.regulated or run.config.corpora["regulated"], args.unregulated or run.config.corpora["unregulated"]
    )
    stage_stats(run, corpus)


def cmd_preprocess(run: Run, args) -> None:
    source = _output_or(run, args.corpus, None, RAW_DIR, "raw corpus", "--corpus")
    stage_preprocess(run, load_corpus(source), *_resources(args, run.config))


def cmd_stats(run: Run, args) -> None:
    if args.paths:
        paths = [Path(p) for p in args.paths]
        missing = [str(p) for p in paths if not p.exists()]
        if missing:
            raise UsageError(f"not found: {', '.join(missing)}")
    else:
        lexed, raw = run.root / LEXED_DIR, run.root / RAW_DIR
        paths = [lexed if lexed.exists() else raw]
        if not paths[0].exists():
            raise UsageError("no corpus: pass corpus directories or text files")
    stage_stats(run, _load_corpus_or_files(paths, args.category))


def cmd_train_vocab(run: Run, args) -> None:
    source = _output_or(run, args.corpus, None, LEXED_DIR, "preprocessed corpus", "--corpus")
    stage_train_vocab(run, _load_corpus_or_files([source], "regulated"), args.vocab_size or run.config.vocab_size)


def _role_paths(run: Run, role: str) -> cfgmod.RolePaths | None:
    return run.config.checkpoints.get(role)


def cmd_finetune(run: Run, args) -> None:
    source = _output_or(run, args.corpus, None, LEXED_DIR, "preprocessed corpus", "--corpus")
    corpus = _load_corpus_or_files([source], "regulated")
    configured = _role_paths(run, "baseline")
    vocab_path = _output_or(
        run, args.vocab, run.config.vocab or (configured.vocab if configured else None), VOCAB_FILE, "vocabulary", "--vocab"
    )
    vocab = Vocab.load(vocab_path)
    start = args.checkpoint or (configured.checkpoint if configured else None)
    ckpt = load_checkpoint(_existing(start, None, "checkpoint", "--checkpoint")) if start else stage_baseline(run, run.config, vocab)
    stage_finetune(run, run.config, ckpt, vocab, corpus)


def _model(run: Run, checkpoint: str | None, vocab: str | None, role: str, default_ckpt: str) -> tuple[Checkpoint, Vocab]:
    configured = _role_paths(run, role)
    ckpt_path = _output_or(
        run, checkpoint, configured.checkpoint if configured else None, default_ckpt, f"{role} checkpoint", f"--{role}"
    )
    vocab_path = _output_or(
        run, vocab, (configured.vocab if configured else None) or run.config.vocab, VOCAB_FILE, f"{role} vocabulary", "--vocab"
    )
    return load_checkpoint(ckpt_path), Vocab.load(vocab_path)


def _lines(path: str) -> list[str]:
    return [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_embed(run: Run, args) -> None:
    ckpt, vocab = _model(run, args.checkpoint, args.vocab, "candidate", CANDIDATE_CKPT)
    _, nmap, table = _resources(args, run.config)
    prepare = _prepare(nmap, table)
    if args.words:
        words = list(dict.fromkeys(standardize(w, nmap) for w in _lines(args.words)))
        contexts = None
        if args.contexts:
            contexts = contexts_for(words, _load_corpus_or_files([Path(args.contexts)], "regulated").texts())
        vectors, keys, name = embed_words(ckpt, vocab, words, contexts), words, "words"
    else:
        sentences = _lines(args.sentences)
        vectors = embed_sentences(ckpt, vocab, [prepare(s) for s in sentences], pooling=args.pooling)
        keys, name = [str(i) for i in range(len(sentences))], "sentences"
    target = run.path(args.out or f"vectors/{name}.txt")
    export_vectors(EmbeddingMatrix(vectors, keys, source=args.pooling), target)
    run.log("embed", kind=name, items=len(keys), dim=int(vectors.shape[1]))
    run.say(f"{len(keys)} vectors of width {vectors.shape[1]} -> {target}")


def _sets(run: Run, given: Sequence[str] | None) -> list[LabeledSet]:
    paths = list(given or run.config.eval_sets)
    if not paths:
        raise UsageError("no labelled sets: pass --sets or set eval_sets in the config")
    return [load_labeled_set(p) for p in paths]


def _classification(run: Run, train: str | None, test: str | None, required: bool):
    configured = run.config.classification or {}
    train, test = train or configured.get("train"), test or configured.get("test")
    if not (train and test):
        if required:
            raise UsageError("no classification data: pass --train and --test or set classification in the config")
        return None
    return load_labeled_set(train, "train"), load_labeled_set(test, "test")


def cmd_eval_intrinsic(run: Run, args) -> None:
    ckpt, vocab = _model(run, args.checkpoint, args.vocab, "candidate", CANDIDATE_CKPT)
    _, nmap, table = _resources(args, run.config)
    report = intrinsic_eval(
        ckpt, vocab, _sets(run, args.sets), run.config.seed, prepare=_prepare(nmap, table), pooling=run.config.pooling
    )
    run.write_json("reports/intrinsic.json", report.to_dict())
    run.write_text("reports/intrinsic.txt", render_intrinsic({report.model_id: report}))
    _write_projections(run, "", report)
    run.log("eval-intrinsic", **report.to_dict())
    run.say(render_intrinsic({report.model_id: report}).rstrip())


def cmd_eval_extrinsic(run: Run, args) -> None:
    ckpt, vocab = _model(run, args.checkpoint, args.vocab, "candidate", CANDIDATE_CKPT)
    _, nmap, table = _resources(args, run.config)
    train, test = _classification(run, args.train, args.test, required=True)
    report = extrinsic_eval(
        ckpt, vocab, train, test, run.config.probe_spec(), prepare=_prepare(nmap, table), pooling=run.config.pooling
    )
    run.write_json("reports/extrinsic.json", report.to_dict())
    run.write_text("reports/extrinsic.txt", render_extrinsic({report.model_id: report}))
    run.log("eval-extrinsic", **report.to_dict())
    run.say(render_extrinsic({report.model_id: report}).rstrip())


def cmd_compare(run: Run, args) -> None:
    models = {
        "baseline": _model(run, args.baseline, args.baseline_vocab or args.vocab, "baseline", BASELINE_CKPT),
        "candidate": _model(run, args.candidate, args.candidate_vocab or args.vocab, "candidate", CANDIDATE_CKPT),
    }
    if args.oracle or _role_paths(run, "oracle"):
        models["oracle"] = _model(run, args.oracle, args.oracle_vocab or args.vocab, "oracle", "")
    _, nmap, table = _resources(args, run.config)
    sets = _sets(run, args.sets) if (args.sets or run.config.eval_sets) else []
    classification = _classification(run, args.train, args.test, required=not sets)
    stage_compare(run, run.config, models, sets, classification, _prepare(nmap, table))


def cmd_all(run: Run, args) -> None:
    config = run.config
    lexicon, nmap, table = _resources(args, config)
    raw = stage_ingest(run, config.corpora["regulated"], config.corpora["unregulated"])
    lexed = stage_preprocess(run, raw, lexicon, nmap, table)
    stage_stats(run, lexed)

    baseline_paths = config.checkpoints.get("baseline")
    if baseline_paths:
        vocab = Vocab.load(baseline_paths.vocab)
        baseline = load_checkpoint(baseline_paths.checkpoint)
    else:
        vocab = Vocab.load(config.vocab) if config.vocab else stage_train_vocab(run, lexed, config.vocab_size)
        baseline = stage_baseline(run, config, vocab)
    candidate = stage_finetune(run, config, baseline, vocab, lexed)

    models = {"baseline": (baseline, vocab), "candidate": (candidate, vocab)}
    oracle = config.checkpoints.get("oracle")
    if oracle:
        models["oracle"] = (load_checkpoint(oracle.checkpoint), Vocab.load(oracle.vocab))
    sets = _sets(run, None) if config.eval_sets else []
    classification = _classification(run, None, None, required=not sets)
    stage_compare(run, config, models, sets, classification, _prepare(nmap, table))


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run config; flags override its fields")
    common.add_argument("--output-dir", help=f"artifact directory (default: ${cfgmod.OUTPUT_DIR_ENV} or ./{cfgmod.DEFAULT_OUTPUT_DIR})")
    common.add_argument("--seed", type=int, help="seed for every seeded operation")
    common.add_argument("--preset", choices=("small", "oracle"), help="model size preset")
    common.add_argument("--epochs", type=int, help="fine-tuning epochs (probe epochs for eval-extrinsic)")

    resources = argparse.ArgumentParser(add_help=False)
    resources.add_argument("--lexicon", help="Hindi lexicon file (one word per line)")
    resources.add_argument("--normalization-map", help="pattern<TAB>replacement rules")
    resources.add_argument("--suffixes", help="suffix table (one suffix per line)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--checkpoint", help="checkpoint file (default: the fine-tuned checkpoint in the output dir)")
    model.add_argument("--vocab", help="vocabulary file (default: vocab.txt in the output dir)")

    parser = _Parser(prog="nepemb", description="Nepali contextual embeddings: corpus to evaluation tables.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="read newline-delimited text into a corpus")
    p.add_argument("--regulated", nargs="+", default=[], metavar="PATH")
    p.add_argument("--unregulated", nargs="+", default=[], metavar="PATH")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("preprocess", parents=[common, resources], help="filter, standardize and split a raw corpus")
    p.add_argument("--corpus", help="raw corpus directory (default: corpus/raw in the output dir)")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("stats", parents=[common], help="token, type and document counts")
    p.add_argument("paths", nargs="*", help="corpus directories or text files")
    p.add_argument("--category", choices=[c.value for c in SourceCategory], default="regulated",
                   help="source category for plain text files")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train-vocab", parents=[common], help="learn a subword vocabulary")
    p.add_argument("--corpus", help="preprocessed corpus (default: corpus/lexed in the output dir)")
    p.add_argument("--vocab-size", type=int)
    p.set_defaults(func=cmd_train_vocab)

    p = sub.add_parser("finetune", parents=[common], help="masked-LM fine-tuning")
    p.add_argument("--corpus", help="preprocessed corpus (default: corpus/lexed in the output dir)")
    p.add_argument("--checkpoint", help="starting checkpoint (default: a fresh seeded initialization)")
    p.add_argument("--vocab", help="vocabulary file (default: vocab.txt in the output dir)")
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("embed", parents=[common, resources, model], help="export word or sentence vectors")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--words", help="file with one word per line")
    group.add_argument("--sentences", help="file with one sentence per line")
    p.add_argument("--contexts", help="corpus whose sentences provide word contexts")
    p.add_argument("--pooling", choices=("mean", "cls"), default="mean")
    p.add_argument("--out", help="vector file, relative to the output dir")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("eval-intrinsic", parents=[common, resources, model], help="k-means purity over labelled word sets")
    p.add_argument("--sets", nargs="+", metavar="TSV")
    p.set_defaults(func=cmd_eval_intrinsic)

    p = sub.add_parser("eval-extrinsic", parents=[common, resources, model], help="linear-probe macro metrics")
    p.add_argument("--train", metavar="TSV")
    p.add_argument("--test", metavar="TSV")
    p.set_defaults(func=cmd_eval_extrinsic)

    p = sub.add_parser("compare", parents=[common, resources], help="baseline / candidate / oracle tables")
    for role in ("baseline", "candidate", "oracle"):
        p.add_argument(f"--{role}", metavar="CKPT")
        p.add_argument(f"--{role}-vocab", metavar="VOCAB")
    p.add_argument("--vocab", help="vocabulary shared by roles without their own")
    p.add_argument("--sets", nargs="+", metavar="TSV")
    p.add_argument("--train", metavar="TSV")
    p.add_argument("--test", metavar="TSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("all", parents=[common, resources], help="ingest through comparison tables in one run")
    p.set_defaults(func=cmd_all)
    return parser


def resolve_config(args) -> cfgmod.RunConfig:
    config = cfgmod.validate_config(args.config) if args.config else cfgmod.validate_data({}, base=Path.cwd())
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.preset is not None:
        changes["preset"] = args.preset
    if args.output_dir is not None:
        changes["output_dir"] = str(Path(args.output_dir).resolve())
    if args.epochs is not None:
        section = "probe" if args.command == "eval-extrinsic" else "train"
        changes[section] = {**getattr(config, section), "epochs": args.epochs}
    config = dataclasses.replace(config, **changes)
    # flag values go through the same checks as file values
    config.train_spec()
    config.probe_spec()
    return config


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if not args.command:
        parser.print_usage(stderr)
        print("nepemb: error: a command is required", file=stderr)
        return EXIT_USAGE
    try:
        run = Run(resolve_config(args), stdout, stderr)
        args.func(run, args)
        run.finish()
    except (UsageError, ConfigError) as exc:
        print(f"nepemb {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"nepemb {args.command}: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    except DATA_ERRORS as exc:
        print(f"nepemb {args.command}: {exc}", file=stderr)
        return EXIT_DATA
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
