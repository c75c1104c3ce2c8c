"""Cross-validation fold construction.

Two fold families: leave-one-session-out folds for emotion training
(test on one unseen session, train on the rest) and speaker-dependent
probe folds (the four training sessions of the matching emotion fold,
split 80/20 within each speaker) for the speaker-identification probe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from mmser.data.manifest import UtteranceRecord
from mmser.seeding import rng

SESSIONS = (1, 2, 3, 4, 5)


class FoldError(ValueError):
    """Raised when a manifest cannot support the requested folds."""


@dataclass(frozen=True)
class FoldSpec:
    """Train/test utterance-ID partition for one cross-validation fold."""

    fold_id: int
    train_ids: frozenset[str] = field(default_factory=frozenset)
    test_ids: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        overlap = self.train_ids & self.test_ids
        if overlap:
            raise FoldError(
                f"fold {self.fold_id}: train/test overlap on {sorted(overlap)[:5]}"
            )


def make_session_folds(
    manifest: list[UtteranceRecord],
    sessions: tuple[int, ...] = SESSIONS,
) -> list[FoldSpec]:
    """Leave-one-session-out folds: fold k tests on session k.

    The manifest must contain every session in `sessions`; a missing one
    raises FoldError naming it. The five test sets partition the manifest.
    """
    present = {rec.session for rec in manifest}
    for session in sessions:
        if session not in present:
            raise FoldError(f"manifest has no utterances for session {session}")
    folds = []
    for session in sessions:
        test = frozenset(r.utterance_id for r in manifest if r.session == session)
        train = frozenset(
            r.utterance_id for r in manifest if r.session != session and r.session in sessions
        )
        folds.append(FoldSpec(fold_id=session, train_ids=train, test_ids=test))
    return folds


def make_probe_folds(
    manifest: list[UtteranceRecord],
    seed: int,
    sessions: tuple[int, ...] = SESSIONS,
    test_fraction: float = 0.2,
) -> list[FoldSpec]:
    """Speaker-dependent folds for the identity probe.

    Fold k covers the sessions the matching emotion fold trains on (all
    but session k). Within those sessions each speaker's utterances are
    split at random into train and test, so both sides contain the same
    speakers. The split is seeded per (fold, speaker) and the test side
    always receives at least one utterance.
    """
    present = {rec.session for rec in manifest}
    for session in sessions:
        if session not in present:
            raise FoldError(f"manifest has no utterances for session {session}")
    folds = []
    for held_out in sessions:
        by_speaker: dict[str, list[str]] = {}
        for rec in manifest:
            if rec.session == held_out or rec.session not in sessions:
                continue
            by_speaker.setdefault(rec.speaker_id, []).append(rec.utterance_id)
        train: set[str] = set()
        test: set[str] = set()
        for speaker_id in sorted(by_speaker):
            ids = sorted(by_speaker[speaker_id])
            order = rng(seed, "probe-folds", held_out, speaker_id).permutation(len(ids))
            n_test = max(1, round(test_fraction * len(ids)))
            for rank, idx in enumerate(order):
                (test if rank < n_test else train).add(ids[idx])
        folds.append(FoldSpec(fold_id=held_out, train_ids=frozenset(train), test_ids=frozenset(test)))
    return folds


def save_folds(folds: list[FoldSpec], path: str | Path) -> None:
    """One JSON record per fold: fold_id plus the two sorted ID lists."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for fold in folds:
            fh.write(
                json.dumps(
                    {
                        "fold_id": fold.fold_id,
                        "train_ids": sorted(fold.train_ids),
                        "test_ids": sorted(fold.test_ids),
                    }
                )
                + "\n"
            )


def load_folds(path: str | Path) -> list[FoldSpec]:
    folds = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        folds.append(
            FoldSpec(
                fold_id=int(obj["fold_id"]),
                train_ids=frozenset(obj["train_ids"]),
                test_ids=frozenset(obj["test_ids"]),
            )
        )
    return folds
