from mmser.features.cache import (
    CacheMissError,
    CorruptRecordError,
    FeatureCache,
    FeatureCacheError,
    StaleCacheError,
)
from mmser.features.types import PhoneAlignment, SpeechFeatureSet, TextFeatureSet

__all__ = [
    "CacheMissError",
    "CorruptRecordError",
    "FeatureCache",
    "FeatureCacheError",
    "PhoneAlignment",
    "SpeechFeatureSet",
    "StaleCacheError",
    "TextFeatureSet",
]
