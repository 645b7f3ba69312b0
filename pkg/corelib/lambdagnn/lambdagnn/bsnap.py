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
Readers and writers of the bsnap binary formats. All integers are unsigned
32-bit and all reals 32-bit floats, little-endian.

graph.bsnap     (u, v) pairs, one per undirected edge
features.bsnap  [numFeats][v0 feats][v1 feats]...
labels.bsnap    [numLabels][label0][label1]...
"""

import os
from typing import Optional, Tuple

import numpy as np
import torch

from .exceptions import DatasetIOError, GraphFormatError

U32 = np.dtype("<u4")
F32 = np.dtype("<f4")


def _read_bytes(path: str) -> bytes:
    if not os.path.isfile(path):
        raise DatasetIOError(f"LambdaGNN ERROR: {path} not found")
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as err:
        raise DatasetIOError(f"LambdaGNN ERROR: cannot read {path}: {err}")


def _header(data: bytes, path: str) -> int:
    if len(data) < U32.itemsize:
        raise GraphFormatError(f"LambdaGNN ERROR: {path} is too short to hold a header")
    return int(np.frombuffer(data[: U32.itemsize], dtype=U32)[0])


def load_graph_bsnap(path: str, num_vertices: Optional[int] = None) -> torch.Tensor:
    data = _read_bytes(path)
    if len(data) % (2 * U32.itemsize) != 0:
        raise GraphFormatError(
            f"LambdaGNN ERROR: {path} has {len(data)} bytes, not a multiple of 8"
        )
    pairs = np.frombuffer(data, dtype=U32).astype(np.int64).reshape(-1, 2)
    if num_vertices is not None and pairs.size > 0 and int(pairs.max()) >= num_vertices:
        raise GraphFormatError(
            f"LambdaGNN ERROR: {path} references vertex {int(pairs.max())} of a {num_vertices}-vertex graph"
        )
    return torch.from_numpy(pairs)


def write_graph_bsnap(path: str, edges: torch.Tensor) -> None:
    with open(path, "wb") as f:
        f.write(edges.to(torch.int64).numpy().astype(U32).tobytes())


def load_features_bsnap(path: str, num_vertices: int) -> torch.Tensor:
    data = _read_bytes(path)
    num_feats = _header(data, path)
    body = data[U32.itemsize :]
    expected = num_vertices * num_feats * F32.itemsize
    if len(body) != expected:
        raise GraphFormatError(
            f"LambdaGNN ERROR: {path} body has {len(body)} bytes, expected {expected} "
            f"for {num_vertices} vertices x {num_feats} features"
        )
    values = np.frombuffer(body, dtype=F32).astype(np.float32)
    return torch.from_numpy(values.reshape(num_vertices, num_feats))


def write_features_bsnap(path: str, features: torch.Tensor) -> None:
    header = np.array([features.shape[1]], dtype=U32).tobytes()
    with open(path, "wb") as f:
        f.write(header + features.detach().numpy().astype(F32).tobytes())


def load_labels_bsnap(path: str, num_vertices: Optional[int] = None) -> Tuple[torch.Tensor, int]:
    """Returns the label vector and the number of label classes."""
    data = _read_bytes(path)
    num_labels = _header(data, path)
    body = data[U32.itemsize :]
    if len(body) % U32.itemsize != 0:
        raise GraphFormatError(f"LambdaGNN ERROR: {path} body is not a whole number of labels")
    labels = np.frombuffer(body, dtype=U32).astype(np.int64)
    if num_vertices is not None and labels.size != num_vertices:
        raise GraphFormatError(
            f"LambdaGNN ERROR: {path} holds {labels.size} labels for {num_vertices} vertices"
        )
    if labels.size > 0 and int(labels.max()) >= num_labels:
        raise GraphFormatError(
            f"LambdaGNN ERROR: label {int(labels.max())} out of range for {num_labels} labels"
        )
    return torch.from_numpy(labels), num_labels


def write_labels_bsnap(path: str, labels: torch.Tensor, num_labels: int) -> None:
    header = np.array([num_labels], dtype=U32).tobytes()
    with open(path, "wb") as f:
        f.write(header + labels.to(torch.int64).numpy().astype(U32).tobytes())


def labels_to_onehot(
    labels: torch.Tensor, num_labels: int, dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    onehot = torch.zeros(labels.numel(), num_labels, dtype=dtype)
    onehot[torch.arange(labels.numel()), labels] = 1.0
    return onehot
