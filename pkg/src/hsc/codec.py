"""Canonical byte formats: ciphertexts, key files, and wire frames.

Everything is fixed-width big-endian.  Files open with the magic "HSC1",
a format version, a kind byte, and the group name, so a decoder can fail
fast on the wrong file or the wrong group.  Variable-length fields carry
a 4-byte length prefix.

A ciphertext serializes as

    direction(1) || u(scalar_len) || V(element_len) || c(|m|)

so the payload beyond the direction tag is exactly scalar_len +
element_len + |m| bytes.  Decoders validate rather than normalise:
a scalar >= q or an off-group element is an error, not a warning.

Frames for the demo protocol are type_tag(1) || length(4) || payload,
with a 1 MiB payload cap.  All decoders raise CodecError subclasses
(never IndexError and friends) on arbitrary input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .group import GroupElement
from .hashing import HashConfig
from .keys import (
    ClcKeyPair,
    ClcPartialKey,
    ClcPublicKey,
    MasterKey,
    PkiKeyPair,
    SystemParams,
)
from .group import make_group
from .signcryption import Ciphertext, Direction

MAGIC = b"HSC1"
FORMAT_VERSION = 1
MAX_FRAME_PAYLOAD = 1 << 20


class CodecError(ValueError):
    """Base class for every encode/decode failure in this module."""


class TruncatedError(CodecError):
    """Input ended before the structure was complete."""


class HeaderError(CodecError):
    """Magic, version, kind, or group name does not match."""


class BadDirectionError(CodecError):
    """Ciphertext direction byte is neither PCHS nor CPHS."""


class ProtocolError(CodecError):
    """Frame violates the protocol limits (size cap, unknown tag)."""


class EndOfStreamError(CodecError):
    """Byte stream closed mid-frame."""


class FileKind(enum.IntEnum):
    PARAMS = 0x01
    MASTER = 0x02
    PKI_KEY = 0x03
    CLC_KEY = 0x04
    PKI_PUB = 0x05
    CLC_PUB = 0x06
    CLC_PARTIAL = 0x07


class FrameType(enum.IntEnum):
    CLIENT_KEY = 0x02
    SERVER_KEY = 0x03
    CIPHERTEXT = 0x04
    STATUS = 0x05


@dataclass
class Frame:
    type_tag: int
    payload: bytes


class _Reader:
    """Cursor over immutable bytes; every read is bounds-checked."""

    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(
                f"needed {n} bytes at offset {self.pos}, have {len(self.data) - self.pos}"
            )
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def take_int(self, width: int) -> int:
        return int.from_bytes(self.take(width), "big")

    def take_prefixed(self) -> bytes:
        return self.take(self.take_int(4))

    def rest(self) -> bytes:
        chunk = self.data[self.pos:]
        self.pos = len(self.data)
        return chunk

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise CodecError(f"{len(self.data) - self.pos} trailing bytes")


def _prefixed(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


def _header(kind: FileKind, group_name: str) -> bytes:
    name = group_name.encode("ascii")
    return MAGIC + bytes([FORMAT_VERSION, kind, len(name)]) + name


def _read_header(r: _Reader, kind: FileKind) -> str:
    if r.take(4) != MAGIC:
        raise HeaderError("bad magic; not an HSC file")
    version = r.take_int(1)
    if version != FORMAT_VERSION:
        raise HeaderError(f"unsupported format version {version}")
    actual = r.take_int(1)
    if actual != kind:
        raise HeaderError(f"expected {kind.name} file, found kind 0x{actual:02x}")
    try:
        return r.take(r.take_int(1)).decode("ascii")
    except UnicodeDecodeError as exc:
        raise HeaderError("group name is not ascii") from exc


def file_kind(data: bytes) -> FileKind:
    """Identify an HSC file from its header without decoding the body."""
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise HeaderError("bad magic; not an HSC file")
    version = r.take_int(1)
    if version != FORMAT_VERSION:
        raise HeaderError(f"unsupported format version {version}")
    kind = r.take_int(1)
    try:
        return FileKind(kind)
    except ValueError:
        raise HeaderError(f"unknown file kind 0x{kind:02x}") from None


def _check_group(name: str, params: SystemParams) -> None:
    if name != params.group.descriptor.name:
        raise HeaderError(
            f"file was made for group {name!r}, params use "
            f"{params.group.descriptor.name!r}"
        )


# -- ciphertexts ------------------------------------------------------------


def encode_ciphertext(sigma: Ciphertext) -> bytes:
    group = sigma.V.group
    return (
        bytes([sigma.direction])
        + group.encode_scalar(sigma.u)
        + group.encode_element(sigma.V)
        + sigma.c
    )


def decode_ciphertext(data: bytes, params: SystemParams) -> Ciphertext:
    group = params.group
    slen, elen = group.descriptor.scalar_len, group.descriptor.element_len
    if len(data) < 1 + slen + elen + 1:
        raise TruncatedError(
            f"ciphertext payload must be at least {1 + slen + elen + 1} bytes"
        )
    r = _Reader(data)
    tag = r.take_int(1)
    try:
        direction = Direction(tag)
    except ValueError:
        raise BadDirectionError(f"bad direction byte 0x{tag:02x}") from None
    u = group.decode_scalar(r.take(slen))
    V = group.decode_element(r.take(elen))
    return Ciphertext(c=r.rest(), u=u, V=V, direction=direction)


# -- system parameters and key files ----------------------------------------


def _encode_hash_config(config: HashConfig) -> bytes:
    out = _prefixed(config.algorithm.encode("ascii"))
    for tag in config.domain_tags:
        out += _prefixed(tag)
    return out


def _decode_hash_config(r: _Reader) -> HashConfig:
    try:
        algorithm = r.take_prefixed().decode("ascii")
    except UnicodeDecodeError as exc:
        raise CodecError("hash algorithm name is not ascii") from exc
    tags = tuple(r.take_prefixed() for _ in range(3))
    try:
        return HashConfig(algorithm=algorithm, domain_tags=tags)
    except ValueError as exc:
        raise CodecError(str(exc)) from exc


def encode_params(params: SystemParams) -> bytes:
    g = params.group
    return (
        _header(FileKind.PARAMS, g.descriptor.name)
        + params.n.to_bytes(4, "big")
        + params.l.to_bytes(2, "big")
        + g.descriptor.q.to_bytes(g.descriptor.scalar_len, "big")
        + g.encode_element(params.P)
        + g.encode_element(params.Ppub)
        + _encode_hash_config(params.hash)
    )


def decode_params(data: bytes) -> SystemParams:
    r = _Reader(data)
    name = _read_header(r, FileKind.PARAMS)
    try:
        group = make_group(name)
    except ValueError as exc:
        raise HeaderError(str(exc)) from exc
    n = r.take_int(4)
    l = r.take_int(2)
    q = r.take_int(group.descriptor.scalar_len)
    if q != group.descriptor.q:
        raise HeaderError(f"order in file does not match group {name!r}")
    P = group.decode_element(r.take(group.descriptor.element_len))
    Ppub = group.decode_element(r.take(group.descriptor.element_len))
    hash_config = _decode_hash_config(r)
    r.finish()
    if P.is_identity():
        raise CodecError("generator must not be the identity")
    if n <= 0:
        raise CodecError("message cap n must be positive")
    return SystemParams(group=group, P=P, Ppub=Ppub, n=n, l=l, hash=hash_config)


def encode_master(params: SystemParams, master: MasterKey) -> bytes:
    g = params.group
    return _header(FileKind.MASTER, g.descriptor.name) + g.encode_scalar(master.s)


def decode_master(data: bytes, params: SystemParams) -> MasterKey:
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.MASTER), params)
    s = params.group.decode_scalar(r.take(params.group.descriptor.scalar_len))
    r.finish()
    if s.is_zero():
        raise CodecError("master key must be nonzero")
    return MasterKey(s=s)


def encode_pki_keypair(params: SystemParams, key: PkiKeyPair) -> bytes:
    g = params.group
    return (
        _header(FileKind.PKI_KEY, g.descriptor.name)
        + g.encode_scalar(key.x_p)
        + g.encode_element(key.PK_p)
    )


def decode_pki_keypair(data: bytes, params: SystemParams) -> PkiKeyPair:
    g = params.group
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.PKI_KEY), params)
    x_p = g.decode_scalar(r.take(g.descriptor.scalar_len))
    PK_p = g.decode_element(r.take(g.descriptor.element_len))
    r.finish()
    return PkiKeyPair(x_p=x_p, PK_p=PK_p)


def encode_clc_keypair(params: SystemParams, key: ClcKeyPair) -> bytes:
    g = params.group
    return (
        _header(FileKind.CLC_KEY, g.descriptor.name)
        + _prefixed(key.identity)
        + g.encode_scalar(key.x_c)
        + g.encode_scalar(key.d)
        + g.encode_element(key.T)
        + g.encode_element(key.PK_c1)
    )


def decode_clc_keypair(data: bytes, params: SystemParams) -> ClcKeyPair:
    g = params.group
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.CLC_KEY), params)
    identity = r.take_prefixed()
    x_c = g.decode_scalar(r.take(g.descriptor.scalar_len))
    d = g.decode_scalar(r.take(g.descriptor.scalar_len))
    T = g.decode_element(r.take(g.descriptor.element_len))
    PK_c1 = g.decode_element(r.take(g.descriptor.element_len))
    r.finish()
    return ClcKeyPair(identity=identity, x_c=x_c, d=d, T=T, PK_c1=PK_c1)


def encode_partial_key(params: SystemParams, identity: bytes, partial: ClcPartialKey) -> bytes:
    g = params.group
    return (
        _header(FileKind.CLC_PARTIAL, g.descriptor.name)
        + _prefixed(identity)
        + g.encode_scalar(partial.d)
        + g.encode_element(partial.T)
    )


def decode_partial_key(data: bytes, params: SystemParams) -> tuple[bytes, ClcPartialKey]:
    g = params.group
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.CLC_PARTIAL), params)
    identity = r.take_prefixed()
    d = g.decode_scalar(r.take(g.descriptor.scalar_len))
    T = g.decode_element(r.take(g.descriptor.element_len))
    r.finish()
    return identity, ClcPartialKey(d=d, T=T)


# public exports never contain scalar fields


def encode_pki_public(params: SystemParams, PK_p: GroupElement) -> bytes:
    g = params.group
    return _header(FileKind.PKI_PUB, g.descriptor.name) + g.encode_element(PK_p)


def decode_pki_public(data: bytes, params: SystemParams) -> GroupElement:
    g = params.group
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.PKI_PUB), params)
    PK_p = g.decode_element(r.take(g.descriptor.element_len))
    r.finish()
    return PK_p


def encode_clc_public(params: SystemParams, identity: bytes, pub: ClcPublicKey) -> bytes:
    g = params.group
    return (
        _header(FileKind.CLC_PUB, g.descriptor.name)
        + _prefixed(identity)
        + g.encode_element(pub.T)
        + g.encode_element(pub.PK_c1)
    )


def decode_clc_public(data: bytes, params: SystemParams) -> tuple[bytes, ClcPublicKey]:
    g = params.group
    r = _Reader(data)
    _check_group(_read_header(r, FileKind.CLC_PUB), params)
    identity = r.take_prefixed()
    T = g.decode_element(r.take(g.descriptor.element_len))
    PK_c1 = g.decode_element(r.take(g.descriptor.element_len))
    r.finish()
    return identity, ClcPublicKey(T=T, PK_c1=PK_c1)


# -- frames -------------------------------------------------------------------


def write_frame(sink, frame: Frame) -> None:
    """Write one frame to a binary file-like sink."""
    if frame.type_tag not in FrameType._value2member_map_:
        raise ProtocolError(f"unknown frame type 0x{frame.type_tag:02x}")
    if len(frame.payload) > MAX_FRAME_PAYLOAD:
        raise ProtocolError(f"payload of {len(frame.payload)} bytes exceeds cap")
    sink.write(bytes([frame.type_tag]) + len(frame.payload).to_bytes(4, "big") + frame.payload)
    sink.flush()


def _read_exact(source, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        chunk = source.read(remaining)
        if not chunk:
            raise EndOfStreamError(f"stream ended with {remaining} bytes outstanding")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(source) -> Frame:
    """Read one frame, blocking until it is complete or the stream ends."""
    header = _read_exact(source, 5)
    tag = header[0]
    if tag not in FrameType._value2member_map_:
        raise ProtocolError(f"unknown frame type 0x{tag:02x}")
    length = int.from_bytes(header[1:5], "big")
    if length > MAX_FRAME_PAYLOAD:
        raise ProtocolError(f"frame length {length} exceeds cap")
    return Frame(type_tag=tag, payload=_read_exact(source, length) if length else b"")
