# SPDX-FileCopyrightText: Copyright (c) 2025 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Binary framing of the messages exchanged between graph servers, parameter
servers and function workers.

Frame layout, little-endian::

    magic        4 bytes  b"ANTP"
    msg_type     u8
    epoch        u32
    layer        u8
    interval     u32
    payload_len  u64      length of the payload in bytes
    payload      payload_len bytes of row-major float32
"""

import enum
import struct
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import torch

from ..exceptions import ProtocolError

MAGIC = b"ANTP"
HEADER_FORMAT = "<4sBIBIQ"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
MAX_PAYLOAD_LEN = 2**63 - 1
PAYLOAD_DTYPE = np.dtype("<f4")


@enum.unique
class MessageType(enum.IntEnum):
    FETCH_WEIGHTS = 1
    PUSH_GRAD = 2
    BROADCAST = 3
    GHOST_UPDATE = 4
    GHOST_GRAD = 5
    TASK_INPUT = 6
    TASK_RESULT = 7


@dataclass(eq=False)
class Message:
    msg_type: MessageType
    epoch: int
    layer: int
    interval: int
    payload: torch.Tensor

    def __eq__(self, other) -> bool:
        if not isinstance(other, Message):
            return NotImplemented
        return (
            self.key == other.key
            and self.payload.dtype == other.payload.dtype
            and torch.equal(self.payload, other.payload)
        )

    @property
    def key(self):
        return (int(self.msg_type), self.epoch, self.layer, self.interval)


def encode_message(msg: Message) -> bytes:
    if msg.payload.dtype != torch.float32:
        raise ProtocolError(
            f"LambdaGNN ERROR: wire payloads are float32, got {msg.payload.dtype}"
        )
    if not 0 <= msg.layer < 256 or not 0 <= msg.epoch < 2**32 or not 0 <= msg.interval < 2**32:
        raise ProtocolError(
            f"LambdaGNN ERROR: header field out of range in {msg.key}"
        )
    body = msg.payload.detach().reshape(-1).numpy().astype(PAYLOAD_DTYPE).tobytes()
    header = struct.pack(
        HEADER_FORMAT, MAGIC, int(msg.msg_type), msg.epoch, msg.layer, msg.interval, len(body)
    )
    return header + body


def decode_header(header: bytes):
    if len(header) < HEADER_SIZE:
        raise ProtocolError(
            f"LambdaGNN ERROR: truncated header, {len(header)} of {HEADER_SIZE} bytes"
        )
    magic, msg_type, epoch, layer, interval, payload_len = struct.unpack(
        HEADER_FORMAT, header[:HEADER_SIZE]
    )
    if magic != MAGIC:
        raise ProtocolError(f"LambdaGNN ERROR: bad magic {magic!r}")
    if payload_len > MAX_PAYLOAD_LEN or payload_len % PAYLOAD_DTYPE.itemsize != 0:
        raise ProtocolError(f"LambdaGNN ERROR: invalid payload length {payload_len}")
    try:
        kind = MessageType(msg_type)
    except ValueError:
        raise ProtocolError(f"LambdaGNN ERROR: unknown message type {msg_type}")
    return kind, epoch, layer, interval, payload_len


def _decode_payload(body: bytes) -> torch.Tensor:
    return torch.from_numpy(np.frombuffer(body, dtype=PAYLOAD_DTYPE).astype(np.float32))


def decode_message(frame: bytes) -> Message:
    kind, epoch, layer, interval, payload_len = decode_header(frame)
    body = frame[HEADER_SIZE:]
    if len(body) != payload_len:
        raise ProtocolError(
            f"LambdaGNN ERROR: frame carries {len(body)} payload bytes, header says {payload_len}"
        )
    return Message(kind, epoch, layer, interval, _decode_payload(body))


def read_frame(recv: Callable[[int], bytes]) -> Optional[Message]:
    """
    Read one frame from a byte stream. ``recv(n)`` returns at most n bytes and
    b"" at end of stream. Returns None on a clean end of stream.
    """

    def read_exactly(n: int) -> bytes:
        buf = b""
        while len(buf) < n:
            chunk = recv(n - len(buf))
            if not chunk:
                break
            buf += chunk
        return buf

    header = read_exactly(HEADER_SIZE)
    if not header:
        return None
    kind, epoch, layer, interval, payload_len = decode_header(header)
    body = read_exactly(payload_len)
    if len(body) != payload_len:
        raise ProtocolError(
            f"LambdaGNN ERROR: stream ended after {len(body)} of {payload_len} payload bytes"
        )
    return Message(kind, epoch, layer, interval, _decode_payload(body))
