from mmser.data.folds import FoldSpec, load_folds, make_probe_folds, make_session_folds, save_folds
from mmser.data.manifest import (
    RawAnnotation,
    UtteranceRecord,
    build_manifest,
    load_manifest,
    save_manifest,
)
from mmser.data.synthetic import SyntheticCorpusConfig, generate_synthetic_corpus

__all__ = [
    "FoldSpec",
    "RawAnnotation",
    "SyntheticCorpusConfig",
    "UtteranceRecord",
    "build_manifest",
    "generate_synthetic_corpus",
    "load_folds",
    "load_manifest",
    "make_probe_folds",
    "make_session_folds",
    "save_folds",
    "save_manifest",
]
