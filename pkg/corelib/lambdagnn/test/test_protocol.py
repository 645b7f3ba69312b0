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

import io
import random
import socket
import struct
import time

import pytest
import torch
from lambdagnn.exceptions import ProtocolError
from lambdagnn.serverless.protocol import (
    HEADER_FORMAT,
    HEADER_SIZE,
    MAGIC,
    Message,
    MessageType,
    decode_header,
    decode_message,
    encode_message,
    read_frame,
)
from lambdagnn.serverless.transport import InProcessTransport, TcpTransport, create_transport


def random_message(rng: random.Random) -> Message:
    n = rng.randrange(0, 64)
    payload = torch.tensor([rng.uniform(-1e6, 1e6) for _ in range(n)], dtype=torch.float32)
    return Message(
        MessageType(rng.randrange(1, 8)),
        rng.randrange(0, 2**32),
        rng.randrange(0, 256),
        rng.randrange(0, 2**32),
        payload,
    )


def test_header_layout():
    assert HEADER_SIZE == 22
    msg = Message(MessageType.GHOST_UPDATE, 7, 1, 3, torch.tensor([1.5, -2.0]))
    frame = encode_message(msg)
    assert frame[:4] == MAGIC
    assert struct.unpack(HEADER_FORMAT, frame[:HEADER_SIZE])[1:] == (4, 7, 1, 3, 8)
    assert frame[HEADER_SIZE:] == struct.pack("<2f", 1.5, -2.0)


def test_random_messages_decode_bitwise():
    rng = random.Random(2024)
    for _ in range(1000):
        msg = random_message(rng)
        decoded = decode_message(encode_message(msg))
        assert decoded == msg


def test_special_floats_survive():
    payload = torch.tensor([float("nan"), float("inf"), -0.0, 1e-45])
    decoded = decode_message(encode_message(Message(MessageType.PUSH_GRAD, 0, 0, 0, payload)))
    assert decoded.payload.numpy().tobytes() == payload.numpy().tobytes()


@pytest.mark.parametrize(
    "msg",
    [
        Message(MessageType.BROADCAST, 0, 0, 0, torch.ones(2, dtype=torch.float64)),
        Message(MessageType.BROADCAST, 0, 256, 0, torch.ones(2)),
        Message(MessageType.BROADCAST, -1, 0, 0, torch.ones(2)),
    ],
)
def test_unencodable_messages(msg):
    with pytest.raises(ProtocolError):
        encode_message(msg)


def test_malformed_frames():
    frame = encode_message(Message(MessageType.TASK_INPUT, 1, 2, 3, torch.ones(3)))
    with pytest.raises(ProtocolError):
        decode_header(frame[:10])
    with pytest.raises(ProtocolError):
        decode_message(b"XXXX" + frame[4:])
    with pytest.raises(ProtocolError):
        decode_message(frame[:-1])
    with pytest.raises(ProtocolError):
        decode_message(frame[:4] + bytes([99]) + frame[5:])
    odd = struct.pack(HEADER_FORMAT, MAGIC, 1, 0, 0, 0, 3) + b"abc"
    with pytest.raises(ProtocolError):
        decode_message(odd)


def test_read_frame_from_stream():
    a = Message(MessageType.GHOST_GRAD, 1, 1, 1, torch.ones(4))
    b = Message(MessageType.TASK_RESULT, 2, 0, 5, torch.zeros(0))
    stream = io.BytesIO(encode_message(a) + encode_message(b))
    assert read_frame(stream.read) == a
    assert read_frame(stream.read) == b
    assert read_frame(stream.read) is None
    truncated = io.BytesIO(encode_message(a)[:-2])
    with pytest.raises(ProtocolError):
        read_frame(truncated.read)


def test_in_process_transport():
    transport = InProcessTransport(2)
    msg = Message(MessageType.GHOST_UPDATE, 0, 1, 2, torch.ones(2))
    transport.send(1, msg)
    with pytest.raises(LookupError):
        transport.receive(0, msg.key)
    assert transport.receive(1, msg.key) is msg
    with pytest.raises(LookupError):
        transport.receive(1, msg.key)


def test_tcp_transport_delivers_frames():
    with create_transport("tcp", 2) as transport:
        assert isinstance(transport, TcpTransport)
        sent = [Message(MessageType.GHOST_UPDATE, e, 1, 0, torch.full((3,), float(e))) for e in range(5)]
        for msg in sent:
            transport.send(1, msg)
        for msg in reversed(sent):
            assert transport.receive(1, msg.key, timeout=5.0) == msg
        with pytest.raises(TimeoutError):
            transport.receive(0, sent[0].key, timeout=0.2)


def test_tcp_transport_drops_garbage_connections():
    with TcpTransport(1) as transport:
        with socket.create_connection(transport.addresses[0]) as raw:
            raw.sendall(b"GARBAGE-NOT-A-FRAME-AT-ALL")
            deadline = time.monotonic() + 5.0
            while transport.dropped_connections == 0 and time.monotonic() < deadline:
                time.sleep(0.01)
        assert transport.dropped_connections == 1
        msg = Message(MessageType.BROADCAST, 0, 0, 0, torch.ones(1))
        transport.send(0, msg)
        assert transport.receive(0, msg.key, timeout=5.0) == msg


def test_unknown_transport():
    with pytest.raises(ValueError):
        create_transport("udp", 1)
