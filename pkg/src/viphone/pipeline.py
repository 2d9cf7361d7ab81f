"""End-to-end run: gold text -> phones -> noisy channel -> decoder -> WER/PER."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from viphone.cs_pipeline import CsRecord, Reject, VariantPolicy, build_corpus_lexicon, build_p2t_corpus, lm_sentences
from viphone.g2p import Lexicon
from viphone.metrics import CorpusReport
from viphone.ngram import NGramModel, train_ngram
from viphone.p2t_decoder import DecodeConfig, Decoder
from viphone.s2p_sim import ConfusionModel, corrupt, default_confusion_model, derive_seed


@dataclass
class PipelineResult:
    report: CorpusReport
    # (id, reference, hypothesis) per decoded record
    outputs: list[tuple[str, str, str]] = field(default_factory=list)
    rejects: list[Reject] = field(default_factory=list)


def run_pipeline(
    lines: Sequence[str],
    lex: Lexicon | None = None,
    lm: NGramModel | None = None,
    model: ConfusionModel | None = None,
    cfg: DecodeConfig | None = None,
    policy: VariantPolicy | None = None,
    seed: int = 0,
    lm_order: int = 3,
) -> PipelineResult:
    """Score the decoder on corrupted phones of ``lines``.

    Missing lexicon/LM are built from ``lines`` themselves. PER measures the
    channel (gold vs corrupted phones); WER measures the final transcript.
    Record ``i`` is corrupted with ``derive_seed(seed, i)``.
    """
    lines = list(lines)
    lex = lex if lex is not None else build_corpus_lexicon(lines)
    lm = lm if lm is not None else train_ngram(lm_sentences(lines), lm_order)
    model = model or default_confusion_model()
    decoder = Decoder(lex, lm, cfg)
    result = PipelineResult(CorpusReport())
    i = 0
    for item in build_p2t_corpus(lines, policy, lex):
        if isinstance(item, Reject):
            result.rejects.append(item)
            continue
        noisy = corrupt(item.phones, model, derive_seed(seed, i))
        hyp = decoder.decode(noisy)[0][0]
        result.report.add(item.reference, hyp, item.phones, noisy)
        result.outputs.append((item.id, item.reference, hyp))
        i += 1
    return result


def corrupt_records(records: Sequence[CsRecord], model: ConfusionModel, seed: int = 0) -> list[CsRecord]:
    """Copies of ``records`` with phones passed through the channel."""
    return [
        CsRecord(r.id, r.reference, r.localized, r.variant_choices, corrupt(r.phones, model, derive_seed(seed, i)))
        for i, r in enumerate(records)
    ]
