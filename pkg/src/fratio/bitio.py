"""Bit-level stream I/O for the descriptor format.

Bits are written MSB-first.  Integers use either fixed widths, unsigned
LEB128-style varints (7 payload bits per byte-sized chunk), or a
self-delimiting signed code: a unary width prefix followed by a minimal-width
two's-complement payload.
"""
from __future__ import annotations

import struct


class MalformedStreamError(ValueError):
    """Raised when a descriptor stream is truncated or ill-formed."""


class BitWriter:
    def __init__(self):
        self._bits: list[int] = []

    @property
    def bit_length(self) -> int:
        return len(self._bits)

    def write(self, value: int, nbits: int) -> None:
        if nbits < 0 or value < 0 or (nbits < value.bit_length()):
            raise ValueError(f"cannot write {value} in {nbits} bits")
        for shift in range(nbits - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def write_bytes(self, data: bytes) -> None:
        for b in data:
            self.write(b, 8)

    def write_varint(self, value: int) -> None:
        if value < 0:
            raise ValueError("varint is unsigned")
        while True:
            chunk = value & 0x7F
            value >>= 7
            self.write((0x80 | chunk) if value else chunk, 8)
            if not value:
                break

    def write_float64(self, value: float) -> None:
        self.write_bytes(struct.pack(">d", value))

    def write_signed(self, value: int) -> None:
        """Unary width prefix (width-1 ones then a zero), then two's complement."""
        if value >= 0:
            width = max(1, value.bit_length() + 1)
        else:
            width = (-value - 1).bit_length() + 1
        for _ in range(width - 1):
            self._bits.append(1)
        self._bits.append(0)
        self.write(value & ((1 << width) - 1), width)

    def to_bytes(self) -> bytes:
        bits = self._bits + [0] * (-len(self._bits) % 8)
        out = bytearray()
        for i in range(0, len(bits), 8):
            byte = 0
            for b in bits[i : i + 8]:
                byte = (byte << 1) | b
            out.append(byte)
        return bytes(out)


class BitReader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    @property
    def bits_read(self) -> int:
        return self._pos

    def _bit(self) -> int:
        byte_index, offset = divmod(self._pos, 8)
        if byte_index >= len(self._data):
            raise MalformedStreamError("stream truncated")
        self._pos += 1
        return (self._data[byte_index] >> (7 - offset)) & 1

    def read(self, nbits: int) -> int:
        value = 0
        for _ in range(nbits):
            value = (value << 1) | self._bit()
        return value

    def read_bytes(self, n: int) -> bytes:
        return bytes(self.read(8) for _ in range(n))

    def read_varint(self) -> int:
        value = 0
        shift = 0
        while True:
            byte = self.read(8)
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7
            if shift > 63:
                raise MalformedStreamError("varint too long")

    def read_float64(self) -> float:
        return struct.unpack(">d", self.read_bytes(8))[0]

    def read_signed(self) -> int:
        width = 1
        while self._bit():
            width += 1
            if width > 64:
                raise MalformedStreamError("signed width prefix too long")
        value = self.read(width)
        if value >= 1 << (width - 1):
            value -= 1 << width
        return value
