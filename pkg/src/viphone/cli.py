"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error. Data goes to stdout (or
``--output``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path
from typing import IO, Iterator, Sequence

from viphone import __version__
from viphone.cs_pipeline import (
    Reject,
    VariantPolicy,
    build_corpus_lexicon,
    build_p2t_corpus,
    lm_sentences,
    localize_sentence,
    read_records,
    write_jsonl,
)
from viphone.en_adapt import default_adapter, load_pronunciations
from viphone.errors import OOVEnglishWord, ViphoneError
from viphone.g2p import DIALECTS, Lexicon, default_g2p, text_to_phones
from viphone.metrics import CorpusReport
from viphone.ngram import NGramModel, train_ngram
from viphone.p2t_decoder import DecodeConfig, decode_corpus
from viphone.phoneme_core import parse_phone_sequence
from viphone.pipeline import corrupt_records, run_pipeline
from viphone.s2p_sim import ConfusionModel, default_confusion_model, load_confusion_model

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


# -- shared option groups ---------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="key = value file supplying option defaults")
    p.add_argument("--output", "-o", type=Path, help="write data here instead of stdout")
    return p


def _policy_opts() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=("rank0", "exhaustive", "sampled"), default="rank0")
    p.add_argument("--max-variants", type=int, default=8, help="variant records per sentence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    return p


def _lexicon_opts() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--lexicon", type=Path, help="lexicon TSV (default: built from the input)")
    p.add_argument("--dict", type=Path, dest="pron_dict", help="English pronouncing dictionary TSV")
    return p


def _noise_opts() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--noise-profile", type=Path, help="confusion model config (default: shipped profile)")
    p.add_argument("--sub-rate", type=float)
    p.add_argument("--ins-rate", type=float)
    p.add_argument("--del-rate", type=float)
    return p


def _decode_opts() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = DecodeConfig()
    p.add_argument("--beam-width", type=int, default=d.beam_width)
    p.add_argument("--fuzzy-k", type=int, default=d.fuzzy_k)
    p.add_argument("--lm-weight", type=float, default=d.lm_weight)
    p.add_argument("--fuzzy-penalty", type=float, default=d.fuzzy_penalty)
    return p


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="viphone", description="Vietnamese-English code-switching phone toolkit")
    parser.add_argument("--version", action="version", version=f"viphone {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common, policy, lexo, noise, deco = _common(), _policy_opts(), _lexicon_opts(), _noise_opts(), _decode_opts()
    subs: dict[str, _Parser] = {}

    def add(name: str, help: str, *parents: argparse.ArgumentParser) -> _Parser:
        p = sub.add_parser(name, help=help, parents=[common, *parents])
        subs[name] = p
        return p

    p = add("parse", "validate and canonicalize phone strings")
    p.add_argument("text", nargs="*")
    p.add_argument("--input", "-i", type=Path)

    p = add("g2p", "Vietnamese (and lexicon English) text to phones", lexo)
    p.add_argument("text", nargs="*")
    p.add_argument("--input", "-i", type=Path)
    p.add_argument("--dialect", choices=DIALECTS, default="north")

    p = add("adapt", "Vietnamese pronunciation variants of English words")
    p.add_argument("words", nargs="+")
    p.add_argument("--ipa", help="IPA for a single word not in the dictionary")
    p.add_argument("--dict", type=Path, dest="pron_dict")
    p.add_argument("--top", type=int, default=0, help="show at most this many variants (0 = all)")

    p = add("localize", "replace English words by syllable variants", policy, lexo)
    p.add_argument("text", nargs="*")
    p.add_argument("--input", "-i", type=Path)

    p = add("build-dataset", "corpus lines to phone-to-text records", policy, lexo)
    p.add_argument("--input", "-i", type=Path, required=True)
    p.add_argument("--rejects", type=Path, help="rejected lines (default: stderr summary only)")
    p.add_argument("--lexicon-out", type=Path, help="also save the lexicon used")

    p = add("build-lexicon", "pronunciation lexicon for a corpus", lexo)
    p.add_argument("--input", "-i", type=Path, required=True)

    p = add("train-lm", "word n-gram model from corpus lines")
    p.add_argument("--input", "-i", type=Path, required=True)
    p.add_argument("--order", type=int, default=3)

    p = add("corrupt", "pass record phones through the noisy channel", noise)
    p.add_argument("--input", "-i", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("decode", "phones of records to text", deco)
    p.add_argument("--input", "-i", type=Path, required=True)
    p.add_argument("--lexicon", type=Path, required=True)
    p.add_argument("--lm", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = add("eval", "WER between reference and hypothesis files")
    p.add_argument("--ref", type=Path, required=True)
    p.add_argument("--hyp", type=Path, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--keep-tone-placement", action="store_true", help="do not canonicalize tone mark position")

    p = add("pipeline", "text -> phones -> corrupt -> decode -> WER", policy, lexo, noise, deco)
    p.add_argument("--input", "-i", type=Path, required=True)
    p.add_argument("--lm", type=Path)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--hyp-out", type=Path, help="write id<TAB>hypothesis lines here")
    return parser, subs


# -- helpers ----------------------------------------------------------------


def read_config(path: Path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _config_path(argv: Sequence[str]) -> Path | None:
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a file")
            return Path(argv[i + 1])
        if tok.startswith("--config="):
            return Path(tok.split("=", 1)[1])
    return None


def _apply_config(sp: _Parser, path: Path) -> None:
    """Install config values as parser defaults, so explicit flags still win."""
    if not path.is_file():
        raise UsageError(f"config: no such file: {path}")
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, raw in read_config(path).items():
        if key not in known or key in ("help", "config"):
            raise UsageError(f"{path}: unknown option {key!r} for {sp.prog}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            continue
        try:
            defaults[key] = (action.type or str)(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}: bad value for {key!r}: {raw!r}") from exc
        if action.choices and defaults[key] not in action.choices:
            raise UsageError(f"{path}: {key!r} must be one of {list(action.choices)}")
    sp.set_defaults(**defaults)
    for action in sp._actions:
        if action.dest in defaults:
            action.required = False


def _check_paths(args: argparse.Namespace) -> None:
    for name in ("input", "config", "lexicon", "lm", "pron_dict", "noise_profile", "ref", "hyp"):
        path = getattr(args, name, None)
        if path is not None and not path.is_file():
            raise UsageError(f"{name.replace('_', '-')}: no such file: {path}")
    for name in ("output", "rejects", "lexicon_out", "hyp_out"):
        path = getattr(args, name, None)
        if path is not None and not path.parent.exists():
            raise UsageError(f"{name.replace('_', '-')}: directory does not exist: {path.parent}")


@contextlib.contextmanager
def _out(args: argparse.Namespace, stdout: IO[str]) -> Iterator[IO[str]]:
    if getattr(args, "output", None) is None:
        yield stdout
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _lines(args: argparse.Namespace, stdin: IO[str]) -> list[str]:
    if getattr(args, "text", None):
        return list(args.text)
    if args.input is not None:
        return args.input.read_text(encoding="utf-8").splitlines()
    return stdin.read().splitlines()


def _lexicon(args: argparse.Namespace, lines: Sequence[str]) -> Lexicon:
    if getattr(args, "lexicon", None) is not None:
        return Lexicon.load(args.lexicon)
    pron = load_pronunciations(args.pron_dict) if getattr(args, "pron_dict", None) else None
    return build_corpus_lexicon(lines, pron)


def _policy(args: argparse.Namespace) -> VariantPolicy:
    return VariantPolicy(args.mode, args.max_variants, args.seed)


def _model(args: argparse.Namespace) -> ConfusionModel:
    model = load_confusion_model(args.noise_profile) if args.noise_profile else default_confusion_model()
    return model.with_rates(args.sub_rate, args.ins_rate, args.del_rate)


def _decode_cfg(args: argparse.Namespace) -> DecodeConfig:
    return DecodeConfig(args.beam_width, args.fuzzy_k, args.lm_weight, args.fuzzy_penalty)


def _read_pairs(ref: Path, hyp: Path) -> list[tuple[str, str]]:
    """Pair references with hypotheses.

    References may be record JSONL or ``id<TAB>text`` lines; hypotheses are
    ``id<TAB>text`` lines joined by id. Two plain-text files pair by line.
    """
    ref_lines = [l for l in ref.read_text(encoding="utf-8").splitlines() if l.strip()]
    hyp_lines = hyp.read_text(encoding="utf-8").splitlines()
    if ref_lines and ref_lines[0].lstrip().startswith("{"):
        refs = {r.id: r.reference for r in read_records(ref)}
    elif all("\t" in l for l in ref_lines):
        refs = dict(l.split("\t", 1) for l in ref_lines)
    else:
        hyp_lines = hyp_lines[: len(ref_lines)] + [""] * (len(ref_lines) - len(hyp_lines))
        return list(zip(ref_lines, hyp_lines))
    hyps = {}
    for l in hyp_lines:
        if l.strip():
            rid, _, text = l.partition("\t")
            hyps[rid] = text
    return [(text, hyps.get(rid, "")) for rid, text in refs.items()]


# -- subcommands ------------------------------------------------------------


def cmd_parse(args, stdin, out, err) -> int:
    for line in _lines(args, stdin):
        if line.strip():
            out.write(str(parse_phone_sequence(line)) + "\n")
    return EXIT_OK


def cmd_g2p(args, stdin, out, err) -> int:
    lines = _lines(args, stdin)
    lex = _lexicon(args, lines)
    table = default_g2p(args.dialect)
    for line in lines:
        out.write(str(text_to_phones(line, lex, table)) + "\n")
    return EXIT_OK


def cmd_adapt(args, stdin, out, err) -> int:
    adapter = default_adapter()
    if args.ipa is not None:
        if len(args.words) != 1:
            raise UsageError("--ipa takes exactly one word")
        entries = {args.words[0].lower(): adapter.parse_ipa(args.words[0].lower(), args.ipa)}
    else:
        entries = load_pronunciations(args.pron_dict)
    for word in args.words:
        w = entries.get(word.lower())
        if w is None:
            raise OOVEnglishWord(word)
        variants = adapter.adapt_word(w)
        if args.top:
            variants = variants[: args.top]
        for v in variants:
            out.write(f"{word}\t{v.rank}\t{v.text}\t{v.phones}\n")
    return EXIT_OK


def cmd_localize(args, stdin, out, err) -> int:
    lines = [l for l in _lines(args, stdin) if l.strip()]
    lex = _lexicon(args, lines)
    policy = _policy(args)
    for n, line in enumerate(lines, 1):
        write_jsonl(localize_sentence(line, policy, lex, seed=policy.seed ^ n, record_id=str(n)), out)
    return EXIT_OK


def cmd_build_dataset(args, stdin, out, err) -> int:
    lines = _lines(args, stdin)
    lex = _lexicon(args, lines)
    if args.lexicon_out:
        lex.save(args.lexicon_out)
    rejects: list[Reject] = []
    n = 0
    for item in build_p2t_corpus(lines, _policy(args), lex, args.jobs):
        if isinstance(item, Reject):
            rejects.append(item)
        else:
            out.write(item.to_json() + "\n")
            n += 1
    if args.rejects:
        with open(args.rejects, "w", encoding="utf-8", newline="\n") as fh:
            write_jsonl(rejects, fh)
    err.write(f"records: {n}\nrejects: {len(rejects)}\n")
    return EXIT_OK


def cmd_build_lexicon(args, stdin, out, err) -> int:
    _lexicon(args, _lines(args, stdin)).save(out)
    return EXIT_OK


def cmd_train_lm(args, stdin, out, err) -> int:
    train_ngram(lm_sentences(_lines(args, stdin)), args.order).save(out)
    return EXIT_OK


def cmd_corrupt(args, stdin, out, err) -> int:
    records = read_records(args.input)
    write_jsonl(corrupt_records(records, _model(args), args.seed), out)
    return EXIT_OK


def cmd_decode(args, stdin, out, err) -> int:
    records = read_records(args.input)
    lex, lm = Lexicon.load(args.lexicon), NGramModel.load(args.lm)
    for rid, text in decode_corpus(records, lex, lm, _decode_cfg(args), args.jobs):
        out.write(f"{rid}\t{text}\n")
    return EXIT_OK


def _write_report(report: CorpusReport, fmt: str, out: IO[str]) -> None:
    if fmt == "json":
        out.write(json.dumps(report.summary(), ensure_ascii=False) + "\n")
    else:
        out.write(report.format())


def cmd_eval(args, stdin, out, err) -> int:
    report = CorpusReport()
    for ref, hyp in _read_pairs(args.ref, args.hyp):
        report.add(ref, hyp, canonical_tones=not args.keep_tone_placement)
    _write_report(report, args.format, out)
    return EXIT_OK


def cmd_pipeline(args, stdin, out, err) -> int:
    lines = _lines(args, stdin)
    lex = _lexicon(args, lines)
    lm = NGramModel.load(args.lm) if args.lm else None
    result = run_pipeline(
        lines, lex, lm, _model(args), _decode_cfg(args), _policy(args), seed=args.seed, lm_order=args.order
    )
    _write_report(result.report, args.format, out)
    if args.hyp_out:
        with open(args.hyp_out, "w", encoding="utf-8", newline="\n") as fh:
            for rid, _, hyp in result.outputs:
                fh.write(f"{rid}\t{hyp}\n")
    if result.rejects:
        err.write(f"rejects: {len(result.rejects)}\n")
    return EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "g2p": cmd_g2p,
    "adapt": cmd_adapt,
    "localize": cmd_localize,
    "build-dataset": cmd_build_dataset,
    "build-lexicon": cmd_build_lexicon,
    "train-lm": cmd_train_lm,
    "corrupt": cmd_corrupt,
    "decode": cmd_decode,
    "eval": cmd_eval,
    "pipeline": cmd_pipeline,
}


def run(argv: Sequence[str] | None = None, stdin: IO[str] | None = None, stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    parser, subs = build_parser()
    try:
        command = next((t for t in argv if not t.startswith("-")), None)
        config = _config_path(argv)
        if config is not None and command in subs:
            _apply_config(subs[command], config)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return EXIT_OK if not exc.code else EXIT_USAGE
        if args.command is None:
            parser.print_usage(stderr)
            return EXIT_USAGE
        _check_paths(args)
        with _out(args, stdout) as out:
            return COMMANDS[args.command](args, stdin, out, stderr)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (ViphoneError, ValueError, OSError, json.JSONDecodeError) as exc:
        stderr.write(f"viphone {argv[0] if argv else ''}: error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    for stream in (sys.stdin, sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(run())
