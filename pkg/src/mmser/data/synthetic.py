"""Deterministic synthetic corpus with controllable latent factors.

Each utterance is generated from three independently sampled factors:
an emotion class, a speaker, and a per-frame phone sequence. Fixed
seeded Gaussian matrices (frozen per corpus seed) map the factor
one-hots into wav2vec-shaped layer stacks, mel bands, and token
embeddings, plus seeded noise at a configurable signal-to-noise ratio.
Because the maps are full rank the factors stay linearly decodable,
which is what gives the probe experiments signal, and because speaker
and emotion are assigned independently they are unconfounded.

Identical configs produce bit-identical corpora.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from mmser import EMOTIONS
from mmser.data.manifest import UtteranceRecord, save_manifest
from mmser.features.cache import FeatureCache
from mmser.features.phones import ARPABET_ID_RANGE, N_PHONE_IDS
from mmser.features.types import (
    MEL_BANDS,
    SPEAKER_DIM,
    TOKEN_DIM,
    WAV2VEC_DIM,
    WAV2VEC_LAYERS,
    SpeechFeatureSet,
    TextFeatureSet,
)
from mmser.seeding import rng

SPEECH_KIND = "speech"
TEXT_KIND = "text"

SEGMENT_FRAMES = 96
FRAME_SECONDS = 0.02


@dataclass(frozen=True)
class SyntheticCorpusConfig:
    """Shape and randomness knobs for one synthetic corpus.

    factor_snr is the amplitude ratio of the factor signal to the added
    noise; math.inf disables noise entirely. The per-factor scales set
    how strongly each factor shows up in the speech features.
    """

    n_speakers: int
    n_utterances_per_speaker: int
    frames_per_utterance: int
    factor_snr: float
    seed: int
    emotion_scale: float = 1.0
    speaker_scale: float = 1.0
    phone_scale: float = 1.0
    min_tokens: int = 4
    max_tokens: int = 12

    def validate(self) -> None:
        if self.n_speakers < 2:
            raise ValueError("n_speakers must be >= 2")
        if self.frames_per_utterance < SEGMENT_FRAMES:
            raise ValueError(
                f"frames_per_utterance={self.frames_per_utterance} cannot form one "
                f"{SEGMENT_FRAMES}-frame training segment"
            )
        if self.n_utterances_per_speaker < 1:
            raise ValueError("n_utterances_per_speaker must be >= 1")
        if not (self.factor_snr > 0):
            raise ValueError("factor_snr must be positive (math.inf allowed)")
        if not 1 <= self.min_tokens <= self.max_tokens:
            raise ValueError("token count range is empty")

    def fingerprint(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
        return f"synthetic-v1:{digest}"


class _FactorMaps:
    """Frozen Gaussian factor-to-feature maps for one corpus seed."""

    def __init__(self, config: SyntheticCorpusConfig):
        s = config.seed
        n_spk = config.n_speakers
        map_rng = rng(s, "synth-maps")
        self.w2v_emotion = map_rng.standard_normal(
            (WAV2VEC_LAYERS, WAV2VEC_DIM, len(EMOTIONS)), dtype=np.float32
        )
        self.w2v_speaker = map_rng.standard_normal(
            (WAV2VEC_LAYERS, WAV2VEC_DIM, n_spk), dtype=np.float32
        )
        self.w2v_phone = map_rng.standard_normal(
            (WAV2VEC_LAYERS, WAV2VEC_DIM, N_PHONE_IDS), dtype=np.float32
        )
        self.mel_emotion = map_rng.standard_normal((MEL_BANDS, len(EMOTIONS)), dtype=np.float32)
        self.mel_speaker = map_rng.standard_normal((MEL_BANDS, n_spk), dtype=np.float32)
        self.mel_phone = map_rng.standard_normal((MEL_BANDS, N_PHONE_IDS), dtype=np.float32)
        self.text_emotion = map_rng.standard_normal((TOKEN_DIM, len(EMOTIONS)), dtype=np.float32)

        emb = rng(s, "synth-speaker-emb").standard_normal((n_spk, SPEAKER_DIM))
        emb /= np.linalg.norm(emb, axis=1, keepdims=True)
        self.speaker_embeddings = emb.astype(np.float32)

        es, ss, ps = config.emotion_scale, config.speaker_scale, config.phone_scale
        signal_std = math.sqrt(es * es + ss * ss + ps * ps)
        self.w2v_noise_std = 0.0 if math.isinf(config.factor_snr) else signal_std / config.factor_snr
        self.text_noise_std = 0.0 if math.isinf(config.factor_snr) else es / config.factor_snr

        # Attainable per-band mel range over all factor combinations, used
        # to pin the noiseless mel targets exactly into [0, 1].
        lo = (
            es * self.mel_emotion.min(axis=1)
            + ss * self.mel_speaker.min(axis=1)
            + ps * self.mel_phone[:, slice(*ARPABET_ID_RANGE)].min(axis=1)
        )
        hi = (
            es * self.mel_emotion.max(axis=1)
            + ss * self.mel_speaker.max(axis=1)
            + ps * self.mel_phone[:, slice(*ARPABET_ID_RANGE)].max(axis=1)
        )
        self.mel_lo = lo.astype(np.float32)
        self.mel_span = np.maximum(hi - lo, 1e-6).astype(np.float32)


def _phone_track(config: SyntheticCorpusConfig, utterance_id: str) -> np.ndarray:
    """Piecewise-constant random phone runs of 4..12 frames."""
    track_rng = rng(config.seed, "synth-phones", utterance_id)
    lo, hi = ARPABET_ID_RANGE
    ids = np.empty(config.frames_per_utterance, dtype=np.int32)
    t = 0
    while t < config.frames_per_utterance:
        run = int(track_rng.integers(4, 13))
        ids[t : t + run] = int(track_rng.integers(lo, hi))
        t += run
    return ids


def synthesize_utterance(
    config: SyntheticCorpusConfig,
    maps: _FactorMaps,
    utterance_id: str,
    emotion_index: int,
    speaker_index: int,
) -> tuple[SpeechFeatureSet, TextFeatureSet]:
    """Features for one utterance, reproducible from the id alone."""
    es, ss, ps = config.emotion_scale, config.speaker_scale, config.phone_scale
    phone_ids = _phone_track(config, utterance_id)
    t_frames = config.frames_per_utterance

    const = es * maps.w2v_emotion[:, :, emotion_index] + ss * maps.w2v_speaker[:, :, speaker_index]
    stack = ps * maps.w2v_phone[:, :, phone_ids].transpose(0, 2, 1)
    stack += const[:, None, :]
    if maps.w2v_noise_std > 0.0:
        noise_rng = rng(config.seed, "synth-noise", utterance_id)
        stack += maps.w2v_noise_std * noise_rng.standard_normal(stack.shape, dtype=np.float32)

    mel = (
        es * maps.mel_emotion[:, emotion_index][:, None]
        + ss * maps.mel_speaker[:, speaker_index][:, None]
        + ps * maps.mel_phone[:, phone_ids]
    )
    mel = ((mel - maps.mel_lo[:, None]) / maps.mel_span[:, None]).T.astype(np.float32)

    token_rng = rng(config.seed, "synth-text", utterance_id)
    n_tokens = int(token_rng.integers(config.min_tokens, config.max_tokens + 1))
    tokens = np.tile(es * maps.text_emotion[:, emotion_index], (n_tokens, 1))
    if maps.text_noise_std > 0.0:
        tokens = tokens + maps.text_noise_std * token_rng.standard_normal(
            (n_tokens, TOKEN_DIM), dtype=np.float32
        )
    tokens = np.ascontiguousarray(tokens, dtype=np.float32)

    speech = SpeechFeatureSet(
        wav2vec_stack=np.ascontiguousarray(stack, dtype=np.float32),
        mel=np.ascontiguousarray(mel),
        phone_ids=phone_ids,
        speaker_embedding=maps.speaker_embeddings[speaker_index],
    )
    return speech, TextFeatureSet(tokens=tokens)


def corpus_records(config: SyntheticCorpusConfig) -> list[tuple[UtteranceRecord, int, int]]:
    """Manifest records plus (emotion_index, speaker_index) per utterance.

    Emotions are assigned balanced within each speaker (counts differ by
    at most one across classes) in seeded shuffled order, independently
    of the speaker identity.
    """
    config.validate()
    out = []
    duration = config.frames_per_utterance * FRAME_SECONDS
    for spk in range(config.n_speakers):
        session = (spk // 2) % 5 + 1
        speaker_id = f"spk{spk:02d}"
        n = config.n_utterances_per_speaker
        base = np.tile(np.arange(len(EMOTIONS)), (n + len(EMOTIONS) - 1) // len(EMOTIONS))[:n]
        emotions = rng(config.seed, "synth-emotions", speaker_id).permutation(base)
        for k in range(n):
            utterance_id = f"syn-{speaker_id}-u{k:03d}"
            n_tok = int(
                rng(config.seed, "synth-text", utterance_id).integers(
                    config.min_tokens, config.max_tokens + 1
                )
            )
            record = UtteranceRecord(
                utterance_id=utterance_id,
                session=session,
                speaker_id=speaker_id,
                audio_path=f"synthetic://{utterance_id}",
                transcript=" ".join(f"w{i:02d}" for i in range(n_tok)),
                emotion=EMOTIONS[int(emotions[k])],
                duration_s=duration,
            )
            out.append((record, int(emotions[k]), spk))
    out.sort(key=lambda item: item[0].utterance_id)
    return out


def generate_synthetic_corpus(
    config: SyntheticCorpusConfig, out_dir: str | Path
) -> tuple[list[UtteranceRecord], str]:
    """Write manifest plus cached speech/text features under `out_dir`.

    Returns the manifest records and the extractor fingerprint the cache
    records carry. Existing up-to-date records are left in place.
    """
    config.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    maps = _FactorMaps(config)
    cache = FeatureCache(out_dir / "cache")
    fingerprint = config.fingerprint()

    entries = corpus_records(config)
    for record, emotion_index, speaker_index in entries:
        if cache.has(record.utterance_id, SPEECH_KIND, fingerprint) and cache.has(
            record.utterance_id, TEXT_KIND, fingerprint
        ):
            continue
        speech, text = synthesize_utterance(
            config, maps, record.utterance_id, emotion_index, speaker_index
        )
        cache.put(
            record.utterance_id,
            SPEECH_KIND,
            {
                "wav2vec_stack": speech.wav2vec_stack,
                "mel": speech.mel,
                "phone_ids": speech.phone_ids,
                "speaker_embedding": speech.speaker_embedding,
            },
            fingerprint,
        )
        cache.put(record.utterance_id, TEXT_KIND, {"tokens": text.tokens}, fingerprint)

    records = [record for record, _, _ in entries]
    save_manifest(records, out_dir / "manifest.psv")
    (out_dir / "fingerprint.txt").write_text(fingerprint + "\n", encoding="utf-8")
    return records, fingerprint
