"""Per-utterance input representations for the speech and text models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WAV2VEC_LAYERS = 25
WAV2VEC_DIM = 1024
MEL_BANDS = 80
SPEAKER_DIM = 256
TOKEN_DIM = 1024


@dataclass
class SpeechFeatureSet:
    """All speech-side inputs for one utterance, frame-aligned at 20 ms.

    wav2vec_stack: [25, T, 1024], row 0 is the local encoder output and
    rows 1..24 the successive context-network layers. mel: [T, 80].
    phone_ids: [T] int in [0, 128). speaker_embedding: [256], unit norm.
    """

    wav2vec_stack: np.ndarray
    mel: np.ndarray
    phone_ids: np.ndarray
    speaker_embedding: np.ndarray

    def __post_init__(self) -> None:
        stack, mel, phones = self.wav2vec_stack, self.mel, self.phone_ids
        if stack.ndim != 3 or stack.shape[0] != WAV2VEC_LAYERS or stack.shape[2] != WAV2VEC_DIM:
            raise ValueError(f"wav2vec_stack has shape {stack.shape}, expected [25, T, 1024]")
        if mel.ndim != 2 or mel.shape[1] != MEL_BANDS:
            raise ValueError(f"mel has shape {mel.shape}, expected [T, 80]")
        if not (stack.shape[1] == mel.shape[0] == phones.shape[0]):
            raise ValueError(
                "per-frame arrays disagree on T: "
                f"stack {stack.shape[1]}, mel {mel.shape[0]}, phones {phones.shape[0]}"
            )
        if phones.size and (phones.min() < 0 or phones.max() >= 128):
            raise ValueError("phone_ids outside [0, 128)")
        if self.speaker_embedding.shape != (SPEAKER_DIM,):
            raise ValueError(
                f"speaker_embedding has shape {self.speaker_embedding.shape}, expected [256]"
            )
        norm = float(np.linalg.norm(self.speaker_embedding))
        if abs(norm - 1.0) > 1e-4:
            raise ValueError(f"speaker_embedding norm {norm} is not 1 within 1e-4")

    @property
    def n_frames(self) -> int:
        return int(self.mel.shape[0])


@dataclass
class TextFeatureSet:
    """Token-embedding matrix for one utterance's transcript.

    tokens: [N, 1024] with N the token count excluding special tokens.
    `empty_transcript` flags the single all-zero row emitted for empty
    transcripts.
    """

    tokens: np.ndarray
    empty_transcript: bool = False

    def __post_init__(self) -> None:
        if self.tokens.ndim != 2 or self.tokens.shape[1] != TOKEN_DIM:
            raise ValueError(f"tokens has shape {self.tokens.shape}, expected [N, 1024]")
        if self.tokens.shape[0] < 1:
            raise ValueError("tokens must have at least one row")

    @property
    def n_tokens(self) -> int:
        return int(self.tokens.shape[0])

    def padded(self, max_tokens: int) -> np.ndarray:
        """Zero-pad (or truncate) the token matrix to [max_tokens, 1024]."""
        n = self.n_tokens
        if n >= max_tokens:
            return np.ascontiguousarray(self.tokens[:max_tokens])
        out = np.zeros((max_tokens, TOKEN_DIM), dtype=self.tokens.dtype)
        out[:n] = self.tokens
        return out


@dataclass
class PhoneAlignment:
    """Forced-alignment output: (phone_label, start_s, end_s) intervals."""

    intervals: list[tuple[str, float, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for label, start_s, end_s in self.intervals:
            if end_s < start_s:
                raise ValueError(f"phone {label!r}: negative duration [{start_s}, {end_s}]")
