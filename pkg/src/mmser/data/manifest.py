"""Labeled utterance manifests and the annotation agreement policy.

A manifest is the flat list of utterances a corpus contributes to
training and evaluation. Raw annotation rows (one per utterance, with
the individual annotator votes) are reduced to a single emotion label
by majority agreement, the Excited category is folded into Happy, and
only the four target classes are kept.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from mmser import EMOTIONS

TARGET_EMOTIONS = frozenset(EMOTIONS)

# Canonical label inventory with the abbreviations used by IEMOCAP
# annotation files. Labels outside the four target classes are valid
# votes; they simply never survive the class filter.
_LABEL_ALIASES = {
    "angry": "Angry",
    "anger": "Angry",
    "ang": "Angry",
    "happy": "Happy",
    "happiness": "Happy",
    "hap": "Happy",
    "excited": "Excited",
    "exc": "Excited",
    "neutral": "Neutral",
    "neutral state": "Neutral",
    "neu": "Neutral",
    "sad": "Sad",
    "sadness": "Sad",
    "frustrated": "Frustrated",
    "frustration": "Frustrated",
    "fru": "Frustrated",
    "fearful": "Fearful",
    "fear": "Fearful",
    "fea": "Fearful",
    "surprised": "Surprised",
    "surprise": "Surprised",
    "sur": "Surprised",
    "disgusted": "Disgusted",
    "disgust": "Disgusted",
    "dis": "Disgusted",
    "other": "Other",
    "oth": "Other",
    "unknown": "Unknown",
    "xxx": "Unknown",
}

KNOWN_LABELS = frozenset(_LABEL_ALIASES.values())

_MANIFEST_FIELDS = (
    "utterance_id",
    "session",
    "speaker_id",
    "audio_path",
    "transcript",
    "emotion",
    "duration_s",
)


class ManifestError(ValueError):
    """Raised for malformed annotation rows or manifest files."""


@dataclass(frozen=True)
class UtteranceRecord:
    """One labeled utterance."""

    utterance_id: str
    session: int
    speaker_id: str
    audio_path: str
    transcript: str
    emotion: str
    duration_s: float

    def __post_init__(self) -> None:
        if self.emotion not in TARGET_EMOTIONS:
            raise ManifestError(
                f"utterance {self.utterance_id!r}: emotion {self.emotion!r} "
                f"is not one of {sorted(TARGET_EMOTIONS)}"
            )
        if not 1 <= self.session <= 5:
            raise ManifestError(
                f"utterance {self.utterance_id!r}: session {self.session} out of range 1-5"
            )


@dataclass(frozen=True)
class RawAnnotation:
    """Unreduced annotation row: one utterance with all annotator votes."""

    utterance_id: str
    session: int
    speaker_id: str
    audio_path: str
    transcript: str
    duration_s: float
    annotator_labels: tuple[str, ...]


def normalize_label(label: str, *, row_id: str = "?") -> str:
    key = label.strip().lower()
    if key not in _LABEL_ALIASES:
        raise ManifestError(f"row {row_id!r}: unknown label string {label!r}")
    return _LABEL_ALIASES[key]


def _majority_label(labels: tuple[str, ...]) -> str | None:
    """Label agreed on by at least two annotators, or None.

    A unique maximum with count >= 2 wins; tied maxima (possible with
    four or more annotators) count as no agreement.
    """
    counts = Counter(labels)
    (top, top_count), *rest = counts.most_common()
    if top_count < 2:
        return None
    if rest and rest[0][1] == top_count:
        return None
    return top


def build_manifest(
    raw_annotations: list[RawAnnotation],
    *,
    merge_before_agreement: bool = False,
) -> list[UtteranceRecord]:
    """Reduce raw annotation rows to the labeled 4-class manifest.

    Keeps only utterances where at least two annotators agree, folds
    Excited into Happy, and drops everything outside the four target
    classes. By default the agreement count is evaluated on the raw
    votes and the Excited merge is applied to the winning label;
    `merge_before_agreement=True` folds Excited votes into Happy before
    counting, so e.g. (Happy, Excited, Sad) becomes a Happy majority.

    Output is sorted by utterance_id. Malformed rows and unknown label
    strings raise ManifestError naming the offending row.
    """
    records = []
    for row in raw_annotations:
        if not row.utterance_id:
            raise ManifestError("annotation row with empty utterance_id")
        if not row.annotator_labels:
            raise ManifestError(f"row {row.utterance_id!r}: no annotator labels")
        if not row.speaker_id or not 1 <= row.session <= 5:
            raise ManifestError(
                f"row {row.utterance_id!r}: missing speaker or bad session {row.session}"
            )
        labels = tuple(
            normalize_label(lab, row_id=row.utterance_id) for lab in row.annotator_labels
        )
        if merge_before_agreement:
            labels = tuple("Happy" if lab == "Excited" else lab for lab in labels)
        agreed = _majority_label(labels)
        if agreed is None:
            continue
        if agreed == "Excited":
            agreed = "Happy"
        if agreed not in TARGET_EMOTIONS:
            continue
        records.append(
            UtteranceRecord(
                utterance_id=row.utterance_id,
                session=row.session,
                speaker_id=row.speaker_id,
                audio_path=row.audio_path,
                transcript=row.transcript,
                emotion=agreed,
                duration_s=row.duration_s,
            )
        )
    records.sort(key=lambda r: r.utterance_id)
    seen: set[str] = set()
    for rec in records:
        if rec.utterance_id in seen:
            raise ManifestError(f"duplicate utterance_id {rec.utterance_id!r}")
        seen.add(rec.utterance_id)
    return records


def save_manifest(records: list[UtteranceRecord], path: str | Path) -> None:
    """Write one pipe-delimited record per line, sorted by utterance_id."""
    path = Path(path)
    lines = []
    for rec in sorted(records, key=lambda r: r.utterance_id):
        fields = (
            rec.utterance_id,
            str(rec.session),
            rec.speaker_id,
            rec.audio_path,
            rec.transcript,
            rec.emotion,
            repr(float(rec.duration_s)),
        )
        for field in fields:
            if "|" in field or "\n" in field:
                raise ManifestError(
                    f"utterance {rec.utterance_id!r}: field contains a delimiter: {field!r}"
                )
        lines.append("|".join(fields))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_manifest(path: str | Path) -> list[UtteranceRecord]:
    path = Path(path)
    records = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("|")
        if len(parts) != len(_MANIFEST_FIELDS):
            raise ManifestError(
                f"{path}:{lineno}: expected {len(_MANIFEST_FIELDS)} fields, got {len(parts)}"
            )
        records.append(
            UtteranceRecord(
                utterance_id=parts[0],
                session=int(parts[1]),
                speaker_id=parts[2],
                audio_path=parts[3],
                transcript=parts[4],
                emotion=parts[5],
                duration_s=float(parts[6]),
            )
        )
    return records


def records_as_unanimous_annotations(
    records: list[UtteranceRecord], n_annotators: int = 3
) -> list[RawAnnotation]:
    """Re-express manifest records as all-annotators-agree rows."""
    return [
        RawAnnotation(
            utterance_id=rec.utterance_id,
            session=rec.session,
            speaker_id=rec.speaker_id,
            audio_path=rec.audio_path,
            transcript=rec.transcript,
            duration_s=rec.duration_s,
            annotator_labels=(rec.emotion,) * n_annotators,
        )
        for rec in records
    ]


def with_audio_root(records: list[UtteranceRecord], root: str | Path) -> list[UtteranceRecord]:
    """Rebase relative audio paths onto `root`."""
    root = Path(root)
    out = []
    for rec in records:
        p = Path(rec.audio_path)
        if rec.audio_path and not p.is_absolute() and "://" not in rec.audio_path:
            rec = replace(rec, audio_path=str(root / p))
        out.append(rec)
    return out
