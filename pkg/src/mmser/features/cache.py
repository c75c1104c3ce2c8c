"""On-disk feature cache with bit-exact round trips.

One binary record per (utterance, kind). Record layout: an 8-byte magic,
a 4-byte little-endian header length, a JSON header carrying the format
version, the extractor fingerprint, and an array table (name, dtype,
shape, offset, nbytes, crc32), then the raw little-endian payloads at
64-byte-aligned offsets. Payloads can be memory-mapped for cheap
partial reads during training.
"""

from __future__ import annotations

import json
import os
import zlib
from pathlib import Path

import numpy as np

MAGIC = b"MMSERFB1"
FORMAT_VERSION = 1
_ALIGN = 64

_ALLOWED_DTYPES = {"<f4", "<f8", "<i4", "<i8"}


class FeatureCacheError(Exception):
    """Base class for cache failures."""


class CacheMissError(FeatureCacheError):
    """No record stored for the requested utterance."""


class StaleCacheError(FeatureCacheError):
    """Stored record was produced by a different extractor fingerprint."""


class CorruptRecordError(FeatureCacheError):
    """Record bytes fail structural or checksum validation."""


def _aligned(offset: int) -> int:
    return (offset + _ALIGN - 1) // _ALIGN * _ALIGN


class FeatureCache:
    """Content-addressed store of named arrays per (utterance_id, kind)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, utterance_id: str, kind: str) -> Path:
        if "/" in utterance_id or "/" in kind:
            raise FeatureCacheError(f"bad record key {utterance_id!r}/{kind!r}")
        return self.root / f"{utterance_id}__{kind}.feat"

    def put(
        self,
        utterance_id: str,
        kind: str,
        arrays: dict[str, np.ndarray],
        fingerprint: str,
    ) -> Path:
        """Atomically persist named arrays under the given fingerprint."""
        if not arrays:
            raise FeatureCacheError("refusing to store an empty record")
        table = []
        payloads = []
        offset = 0  # relative to payload region start
        for name, arr in arrays.items():
            if np.issubdtype(arr.dtype, np.floating) and not np.all(np.isfinite(arr)):
                raise FeatureCacheError(f"array {name!r} contains non-finite values")
            le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
            dtype_str = le.dtype.str
            if dtype_str not in _ALLOWED_DTYPES:
                raise FeatureCacheError(f"array {name!r} has unsupported dtype {arr.dtype}")
            payload = np.ascontiguousarray(le).tobytes()
            offset = _aligned(offset)
            table.append(
                {
                    "name": name,
                    "dtype": dtype_str,
                    "shape": list(arr.shape),
                    "offset": offset,
                    "nbytes": len(payload),
                    "crc32": zlib.crc32(payload),
                }
            )
            payloads.append((offset, payload))
            offset += len(payload)

        header = json.dumps(
            {"format_version": FORMAT_VERSION, "fingerprint": fingerprint, "arrays": table}
        ).encode("utf-8")
        payload_base = _aligned(len(MAGIC) + 4 + len(header))

        path = self._path(utterance_id, kind)
        tmp = path.with_suffix(".tmp")
        with tmp.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(len(header).to_bytes(4, "little"))
            fh.write(header)
            for rel_offset, payload in payloads:
                fh.seek(payload_base + rel_offset)
                fh.write(payload)
        os.replace(tmp, path)
        return path

    def _read_header(self, path: Path) -> tuple[dict, int]:
        with path.open("rb") as fh:
            magic = fh.read(len(MAGIC))
            if magic != MAGIC:
                raise CorruptRecordError(f"{path}: bad magic {magic!r}")
            raw_len = fh.read(4)
            if len(raw_len) != 4:
                raise CorruptRecordError(f"{path}: truncated header length")
            header_len = int.from_bytes(raw_len, "little")
            raw = fh.read(header_len)
            if len(raw) != header_len:
                raise CorruptRecordError(f"{path}: truncated header")
        try:
            header = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CorruptRecordError(f"{path}: unreadable header: {exc}") from exc
        if header.get("format_version") != FORMAT_VERSION:
            raise CorruptRecordError(
                f"{path}: format version {header.get('format_version')} != {FORMAT_VERSION}"
            )
        payload_base = _aligned(len(MAGIC) + 4 + header_len)
        return header, payload_base

    def get(
        self,
        utterance_id: str,
        kind: str,
        fingerprint: str | None = None,
        mmap: bool = False,
        verify: bool = True,
    ) -> dict[str, np.ndarray]:
        """Load a record's arrays.

        A fingerprint mismatch raises StaleCacheError. With mmap=True the
        arrays are read-only views into the file and checksum verification
        is skipped.
        """
        path = self._path(utterance_id, kind)
        if not path.exists():
            raise CacheMissError(f"no cached record for {utterance_id!r}/{kind!r}")
        header, payload_base = self._read_header(path)
        if fingerprint is not None and header["fingerprint"] != fingerprint:
            raise StaleCacheError(
                f"{path}: cached fingerprint {header['fingerprint']!r} != expected {fingerprint!r}"
            )
        arrays: dict[str, np.ndarray] = {}
        if mmap:
            buf = np.memmap(path, dtype=np.uint8, mode="r")
            for entry in header["arrays"]:
                start = payload_base + entry["offset"]
                view = buf[start : start + entry["nbytes"]].view(entry["dtype"])
                arrays[entry["name"]] = view.reshape(entry["shape"])
            return arrays
        data = path.read_bytes()
        for entry in header["arrays"]:
            start = payload_base + entry["offset"]
            payload = data[start : start + entry["nbytes"]]
            if len(payload) != entry["nbytes"]:
                raise CorruptRecordError(f"{path}: truncated payload for {entry['name']!r}")
            if verify and zlib.crc32(payload) != entry["crc32"]:
                raise CorruptRecordError(f"{path}: checksum mismatch for {entry['name']!r}")
            arrays[entry["name"]] = (
                np.frombuffer(payload, dtype=entry["dtype"]).reshape(entry["shape"]).copy()
            )
        return arrays

    def fingerprint_of(self, utterance_id: str, kind: str) -> str:
        path = self._path(utterance_id, kind)
        if not path.exists():
            raise CacheMissError(f"no cached record for {utterance_id!r}/{kind!r}")
        header, _ = self._read_header(path)
        return header["fingerprint"]

    def has(self, utterance_id: str, kind: str, fingerprint: str | None = None) -> bool:
        """True if a structurally valid record with the fingerprint exists."""
        try:
            self.get(utterance_id, kind, fingerprint=fingerprint)
        except FeatureCacheError:
            return False
        return True
