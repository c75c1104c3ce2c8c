"""Frame-level phone id sequences from forced-alignment intervals.

The inventory is a versioned table of exactly 128 ids: silence, a
not-identified bucket, dataset special tokens, the 39 ARPAbet phones,
and reserved padding ids. Silence sits at id 0 so zero-padded id arrays
read as silence.
"""

from __future__ import annotations

import numpy as np

from mmser.features.types import PhoneAlignment

PHONE_INVENTORY_VERSION = 1
N_PHONE_IDS = 128
FRAME_SECONDS = 0.02

SILENCE = "sil"
NOT_IDENTIFIED = "spn"

_SPECIAL_TOKENS = (
    "[LAUGHTER]",
    "[BREATHING]",
    "[LIPSMACK]",
    "[GARBAGE]",
)

_ARPABET = (
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH",
    "EH", "ER", "EY", "F", "G", "HH", "IH", "IY", "JH", "K",
    "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH",
    "T", "TH", "UH", "UW", "V", "W", "Y", "Z", "ZH",
)

_LABELS = (SILENCE, NOT_IDENTIFIED) + _SPECIAL_TOKENS + _ARPABET
_LABELS = _LABELS + tuple(
    f"reserved{i:02d}" for i in range(N_PHONE_IDS - len(_LABELS))
)
assert len(_LABELS) == N_PHONE_IDS

PHONE_TO_ID = {label: i for i, label in enumerate(_LABELS)}
ID_TO_PHONE = dict(enumerate(_LABELS))

SILENCE_ID = PHONE_TO_ID[SILENCE]
NOT_IDENTIFIED_ID = PHONE_TO_ID[NOT_IDENTIFIED]

# Contiguous id block holding the 39 ARPAbet phones.
ARPABET_ID_RANGE = (PHONE_TO_ID[_ARPABET[0]], PHONE_TO_ID[_ARPABET[-1]] + 1)


def phone_id(label: str) -> int:
    """Inventory id for a phone label; unknown labels map to not-identified.

    Stress digits on ARPAbet vowels (e.g. AH0) are stripped before lookup.
    """
    key = label.strip()
    if key in PHONE_TO_ID:
        return PHONE_TO_ID[key]
    bare = key.upper().rstrip("012")
    if bare in PHONE_TO_ID:
        return PHONE_TO_ID[bare]
    return NOT_IDENTIFIED_ID


def phone_sequence(alignment: PhoneAlignment, n_frames: int) -> np.ndarray:
    """Label each 20 ms frame with the phone that overlaps it the longest.

    Frame t spans [20t, 20t + 20) ms. Gaps in the alignment fall to
    silence and overlap ties break toward the earlier phone interval.
    Returns an int32 array of length `n_frames`.
    """
    ids = np.full(n_frames, SILENCE_ID, dtype=np.int32)
    if not alignment.intervals:
        return ids
    intervals = sorted(alignment.intervals, key=lambda iv: (iv[1], iv[2]))
    for t in range(n_frames):
        frame_start = t * FRAME_SECONDS
        frame_end = frame_start + FRAME_SECONDS
        best_id = SILENCE_ID
        best_overlap = 0.0
        for label, start_s, end_s in intervals:
            overlap = min(frame_end, end_s) - max(frame_start, start_s)
            if overlap > best_overlap + 1e-12:
                best_overlap = overlap
                best_id = phone_id(label)
        ids[t] = best_id
    return ids
