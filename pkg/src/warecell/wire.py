"""Binary frame format for addressing packets.

Frame layout:

    0x7E | type (1 byte) | record count N (1 byte) | N x 13-byte records | CRC-16 (2 bytes)

Each record is a 12-byte big-endian cell id followed by a 1-byte egress face.
The checksum is CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection,
no final xor) computed over every byte after the frame byte and appended
big-endian.
"""

from __future__ import annotations

from typing import Iterable, Sequence

FRAME_BYTE = 0x7E
TYPE_ADDRESSING = 0x01

ID_BYTES = 12
RECORD_BYTES = ID_BYTES + 1
MAX_RECORDS = 0xFF
MAX_CELL_ID = (1 << (8 * ID_BYTES)) - 1

_HEADER_BYTES = 2  # type + record count
_CRC_BYTES = 2


class FrameError(ValueError):
    """Raised when a byte buffer is not a well-formed frame."""


def crc16_ccitt_false(data: bytes, crc: int = 0xFFFF) -> int:
    """CRC-16/CCITT-FALSE over `data`, optionally continuing from `crc`."""
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ 0x1021) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
    return crc


def frame_length(record_count: int) -> int:
    return 1 + _HEADER_BYTES + record_count * RECORD_BYTES + _CRC_BYTES


def encode_frame(records: Sequence[tuple[int, int]]) -> bytes:
    """Encode (cell id, egress face) records into one framed packet."""
    if len(records) > MAX_RECORDS:
        raise FrameError(f"too many records for one frame: {len(records)} > {MAX_RECORDS}")
    body = bytearray([TYPE_ADDRESSING, len(records)])
    for cell, egress in records:
        if not 0 <= cell <= MAX_CELL_ID:
            raise FrameError(f"cell id {cell!r} does not fit in {ID_BYTES} bytes")
        if not 1 <= egress <= 6:
            raise FrameError(f"egress face {egress!r} out of range 1..6")
        body += cell.to_bytes(ID_BYTES, "big")
        body.append(egress)
    crc = crc16_ccitt_false(bytes(body))
    return bytes([FRAME_BYTE]) + bytes(body) + crc.to_bytes(_CRC_BYTES, "big")


def decode_frame(data: bytes) -> list[tuple[int, int]]:
    """Decode one frame occupying the whole buffer. Returns the record list."""
    records, consumed = _decode_at(data, 0)
    if consumed != len(data):
        raise FrameError(f"trailing bytes after frame: {len(data) - consumed}")
    return records


def decode_stream(data: bytes) -> list[list[tuple[int, int]]]:
    """Decode a buffer of concatenated frames."""
    packets = []
    offset = 0
    while offset < len(data):
        records, consumed = _decode_at(data, offset)
        packets.append(records)
        offset += consumed
    return packets


def _decode_at(data: bytes, offset: int) -> tuple[list[tuple[int, int]], int]:
    if len(data) - offset < frame_length(0):
        raise FrameError("buffer too short for a frame")
    if data[offset] != FRAME_BYTE:
        raise FrameError(f"bad frame byte 0x{data[offset]:02x} at offset {offset}")
    if data[offset + 1] != TYPE_ADDRESSING:
        raise FrameError(f"unknown packet type 0x{data[offset + 1]:02x}")
    count = data[offset + 2]
    total = frame_length(count)
    if len(data) - offset < total:
        raise FrameError(f"truncated frame: need {total} bytes, have {len(data) - offset}")
    body = data[offset + 1 : offset + total - _CRC_BYTES]
    stored = int.from_bytes(data[offset + total - _CRC_BYTES : offset + total], "big")
    actual = crc16_ccitt_false(body)
    if stored != actual:
        raise FrameError(f"CRC mismatch: stored 0x{stored:04x}, computed 0x{actual:04x}")
    records = []
    pos = offset + 1 + _HEADER_BYTES
    for _ in range(count):
        cell = int.from_bytes(data[pos : pos + ID_BYTES], "big")
        egress = data[pos + ID_BYTES]
        if not 1 <= egress <= 6:
            raise FrameError(f"egress face {egress} out of range 1..6")
        records.append((cell, egress))
        pos += RECORD_BYTES
    return records, total
