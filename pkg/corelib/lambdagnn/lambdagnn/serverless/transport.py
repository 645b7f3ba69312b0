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

import abc
import logging
import socket
import threading
from collections import defaultdict, deque
from typing import Deque, Dict, List, Optional, Tuple

from ..exceptions import ProtocolError
from .protocol import Message, encode_message, read_frame

logger = logging.getLogger(__name__)

MessageKey = Tuple[int, int, int, int]


class Transport(abc.ABC):
    """Point-to-point delivery of messages to numbered endpoints (graph servers)."""

    @abc.abstractmethod
    def send(self, dst: int, msg: Message) -> None:
        ...

    @abc.abstractmethod
    def receive(self, dst: int, key: MessageKey, timeout: Optional[float] = None) -> Message:
        ...

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class InProcessTransport(Transport):
    def __init__(self, num_endpoints: int) -> None:
        self._inbox: List[Dict[MessageKey, Deque[Message]]] = [
            defaultdict(deque) for _ in range(num_endpoints)
        ]

    def send(self, dst: int, msg: Message) -> None:
        self._inbox[dst][msg.key].append(msg)

    def receive(self, dst: int, key: MessageKey, timeout: Optional[float] = None) -> Message:
        queue = self._inbox[dst].get(key)
        if not queue:
            raise LookupError(f"LambdaGNN ERROR: no message {key} for endpoint {dst}")
        msg = queue.popleft()
        if not queue:
            del self._inbox[dst][key]
        return msg


class TcpTransport(Transport):
    """
    One loopback listener per endpoint. Reader threads decode frames into a
    per-endpoint inbox; a frame that fails to decode drops its connection.
    """

    def __init__(
        self, num_endpoints: int, host: str = "127.0.0.1", timeout_s: float = 10.0
    ) -> None:
        self.timeout_s = timeout_s
        self._closed = False
        self._cond = threading.Condition()
        self._inbox: List[Dict[MessageKey, Deque[Message]]] = [
            defaultdict(deque) for _ in range(num_endpoints)
        ]
        self._listeners = [socket.create_server((host, 0)) for _ in range(num_endpoints)]
        self.addresses = [listener.getsockname()[:2] for listener in self._listeners]
        self._clients: Dict[int, socket.socket] = {}
        self._connections: List[socket.socket] = []
        self.dropped_connections = 0
        self._threads = []
        for dst, listener in enumerate(self._listeners):
            thread = threading.Thread(
                target=self._accept_loop, args=(dst, listener), daemon=True
            )
            thread.start()
            self._threads.append(thread)

    def _accept_loop(self, dst: int, listener: socket.socket) -> None:
        listener.settimeout(0.2)
        while not self._closed:
            try:
                conn, _ = listener.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            conn.settimeout(None)
            with self._cond:
                self._connections.append(conn)
            thread = threading.Thread(target=self._read_loop, args=(dst, conn), daemon=True)
            thread.start()
            self._threads.append(thread)

    def _read_loop(self, dst: int, conn: socket.socket) -> None:
        try:
            while True:
                msg = read_frame(conn.recv)
                if msg is None:
                    return
                with self._cond:
                    self._inbox[dst][msg.key].append(msg)
                    self._cond.notify_all()
        except ProtocolError as err:
            logger.warning("dropping connection to endpoint %d: %s", dst, err)
            with self._cond:
                self.dropped_connections += 1
                self._cond.notify_all()
        except OSError:
            pass
        finally:
            conn.close()

    def send(self, dst: int, msg: Message) -> None:
        if dst not in self._clients:
            self._clients[dst] = socket.create_connection(self.addresses[dst])
        self._clients[dst].sendall(encode_message(msg))

    def receive(self, dst: int, key: MessageKey, timeout: Optional[float] = None) -> Message:
        timeout = self.timeout_s if timeout is None else timeout
        with self._cond:
            arrived = self._cond.wait_for(lambda: bool(self._inbox[dst].get(key)), timeout)
            if not arrived:
                raise TimeoutError(
                    f"LambdaGNN ERROR: message {key} for endpoint {dst} not received within {timeout} s"
                )
            queue = self._inbox[dst][key]
            msg = queue.popleft()
            if not queue:
                del self._inbox[dst][key]
            return msg

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        for sock in list(self._clients.values()) + self._listeners:
            try:
                sock.close()
            except OSError:
                pass
        with self._cond:
            for conn in self._connections:
                try:
                    conn.shutdown(socket.SHUT_RDWR)
                except OSError:
                    pass


def create_transport(kind: str, num_endpoints: int) -> Transport:
    if kind == "inprocess":
        return InProcessTransport(num_endpoints)
    if kind == "tcp":
        return TcpTransport(num_endpoints)
    raise ValueError(f"LambdaGNN ERROR: unknown transport {kind!r}")
