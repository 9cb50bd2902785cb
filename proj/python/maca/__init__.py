"""Metadata-calibrated FAQ retrieval: taxonomy induction, hybrid retrieval,
teacher re-ranking, triplet mining, and adapter distillation."""

import sys as _sys

try:
    from . import _core
except ImportError:  # running against a plain CMake build dir
    import _core  # type: ignore

    _sys.modules[__name__ + "._core"] = _core

from ._core import (  # noqa: F401
    Bm25Index,
    ConfigError,
    DataError,
    FaqItem,
    HashingEmbedder,
    MetadataLabel,
    NumericError,
    PipelineConfig,
    Query,
    RankedEntry,
    RankedList,
    SynthConfig,
    TeacherJudgment,
    calibrated_margin,
    cmd_audit,
    cmd_eval,
    cmd_index,
    cmd_mine,
    cmd_pipeline,
    cmd_rank,
    cmd_sweep,
    cmd_taxonomy,
    cmd_teach,
    cmd_train,
    cosine_similarity,
    gen_paraphrases,
    judge_candidate,
    rrf_fuse,
    slugify,
    synth,
    tokenize,
)

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
