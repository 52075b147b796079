"""Fragment objects and their on-disk container format.

Wire layout (little-endian), bit-exact round-trip required:

    magic           4 bytes  b"ECFR"
    version         u8       1
    scheme_tag      u8       1 = RS(m,n), 2 = LRC 6+2+2
    param1          u8       RS: m      LRC: data fragment count (6)
    param2          u8       RS: n      LRC: (local groups << 4) | global parities (0x22)
    index           u8
    reserved        u8       0
    object_id       16 bytes
    original_length u64      byte length of the encoded object before padding
    payload_len     u64
    payload         payload_len bytes
    crc32           u32      CRC-32 of the payload
"""

from __future__ import annotations

import enum
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

from ..errors import ChecksumError, MalformedFragmentError
from ..probability import ErasureScheme

MAGIC = b"ECFR"
FORMAT_VERSION = 1
SCHEME_TAG_RS = 1
SCHEME_TAG_LRC = 2
LRC_GROUP_DESCRIPTOR = 0x22  # two local groups, two global parities

_HEADER = struct.Struct("<4sBBBBBB16sQQ")
_TRAILER = struct.Struct("<I")

#: Field-size bound: an RS code over GF(256) supports at most 255 fragments.
MAX_TOTAL_FRAGMENTS = 255


class FragmentRole(enum.Enum):
    DATA = "data"
    LOCAL_PARITY = "local-parity"
    GLOBAL_PARITY = "global-parity"


@dataclass(frozen=True)
class Fragment:
    """One codec unit: a shard of an object plus identifying metadata."""

    object_id: bytes
    scheme: object  # ErasureScheme or LrcScheme
    index: int
    payload: bytes
    original_length: int
    checksum: int | None = None

    def __post_init__(self):
        if len(self.object_id) != 16:
            raise ValueError(f"object_id must be 16 bytes, got {len(self.object_id)}")
        count = getattr(self.scheme, "fragment_count", None)
        if count is None:
            raise TypeError(
                f"scheme {type(self.scheme).__name__} does not expose fragment_count"
            )
        if not 0 <= self.index < count:
            raise ValueError(f"index {self.index} outside 0..{count - 1}")
        if not self.payload:
            raise ValueError("fragment payload must not be empty")
        if self.original_length < 1:
            raise ValueError("original_length must be >= 1")
        if self.checksum is None:
            object.__setattr__(self, "checksum", zlib.crc32(self.payload))

    @property
    def payload_len(self) -> int:
        return len(self.payload)

    @property
    def role(self) -> FragmentRole:
        if isinstance(self.scheme, ErasureScheme):
            return (
                FragmentRole.DATA
                if self.index < self.scheme.m
                else FragmentRole.GLOBAL_PARITY
            )
        # LRC layout: 0-5 data, 6-7 local parities, 8-9 global parities
        if self.index < 6:
            return FragmentRole.DATA
        if self.index < 8:
            return FragmentRole.LOCAL_PARITY
        return FragmentRole.GLOBAL_PARITY

    def verify_checksum(self) -> None:
        actual = zlib.crc32(self.payload)
        if actual != self.checksum:
            raise ChecksumError(
                f"fragment {self.index}: payload CRC {actual:#010x} does not "
                f"match recorded {self.checksum:#010x}",
                index=self.index,
            )


def _scheme_wire_params(scheme) -> tuple[int, int, int]:
    from .lrc import LrcScheme  # deferred: lrc builds on Fragment

    if isinstance(scheme, ErasureScheme):
        if scheme.fragment_count > MAX_TOTAL_FRAGMENTS:
            raise ValueError(
                f"m+n must be <= {MAX_TOTAL_FRAGMENTS}, got {scheme.fragment_count}"
            )
        return SCHEME_TAG_RS, scheme.m, scheme.n
    if isinstance(scheme, LrcScheme):
        return SCHEME_TAG_LRC, scheme.data_fragments, LRC_GROUP_DESCRIPTOR
    raise TypeError(f"cannot serialize scheme {type(scheme).__name__}")


def fragment_to_bytes(fragment: Fragment) -> bytes:
    tag, p1, p2 = _scheme_wire_params(fragment.scheme)
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        tag,
        p1,
        p2,
        fragment.index,
        0,
        fragment.object_id,
        fragment.original_length,
        fragment.payload_len,
    )
    return header + fragment.payload + _TRAILER.pack(fragment.checksum)


def fragment_from_bytes(data: bytes, *, verify: bool = True) -> Fragment:
    if len(data) < _HEADER.size + _TRAILER.size:
        raise MalformedFragmentError(
            f"fragment truncated: {len(data)} bytes is below the minimum "
            f"{_HEADER.size + _TRAILER.size}"
        )
    magic, version, tag, p1, p2, index, reserved, object_id, original_length, payload_len = (
        _HEADER.unpack_from(data)
    )
    if magic != MAGIC:
        raise MalformedFragmentError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise MalformedFragmentError(f"unsupported format version {version}")
    if reserved != 0:
        raise MalformedFragmentError(f"reserved byte must be 0, got {reserved}")
    if len(data) != _HEADER.size + payload_len + _TRAILER.size:
        raise MalformedFragmentError(
            f"payload length field says {payload_len} but "
            f"{len(data) - _HEADER.size - _TRAILER.size} bytes are present"
        )
    if payload_len < 1:
        raise MalformedFragmentError("fragment payload must not be empty")
    if original_length < 1:
        raise MalformedFragmentError("original_length must be >= 1")

    if tag == SCHEME_TAG_RS:
        if p1 < 1 or p1 + p2 > MAX_TOTAL_FRAGMENTS:
            raise MalformedFragmentError(f"invalid RS parameters m={p1}, n={p2}")
        scheme = ErasureScheme(p1, p2)
    elif tag == SCHEME_TAG_LRC:
        from .lrc import LRC_6_2_2

        if p1 != LRC_6_2_2.data_fragments or p2 != LRC_GROUP_DESCRIPTOR:
            raise MalformedFragmentError(
                f"invalid LRC descriptor ({p1}, {p2:#04x})"
            )
        scheme = LRC_6_2_2
    else:
        raise MalformedFragmentError(f"unknown scheme tag {tag}")

    if index >= scheme.fragment_count:
        raise MalformedFragmentError(
            f"index {index} outside scheme with {scheme.fragment_count} fragments"
        )

    payload = data[_HEADER.size : _HEADER.size + payload_len]
    (stored_crc,) = _TRAILER.unpack_from(data, _HEADER.size + payload_len)
    fragment = Fragment(
        object_id=object_id,
        scheme=scheme,
        index=index,
        payload=payload,
        original_length=original_length,
        checksum=stored_crc,
    )
    if verify:
        fragment.verify_checksum()
    return fragment


def write_fragment(fragment: Fragment, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(fragment_to_bytes(fragment))
    return path


def read_fragment(path: str | Path, *, verify: bool = True) -> Fragment:
    return fragment_from_bytes(Path(path).read_bytes(), verify=verify)
