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
Task kernels of the GCN dataflow.

Graph kernels (gather, scatter, backward_gather) run on the graph server that
owns an interval; vertex kernels (apply_vertex, apply_edge, grad_apply_vertex)
are pure tensor functions that the serverless fleet executes.
"""

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import torch

from .exceptions import MissingGhostError, ShapeError, StashError
from .partition import Partition, VertexInterval
from .tensor_ops import check_finite, matmul, relu, relu_backward


@enum.unique
class ChunkKind(enum.Enum):
    GATHERED = "gathered"
    ACTIVATED = "activated"
    GRADIENT = "gradient"


@dataclass
class LayerChunk:
    """Rows of one interval flowing between two tasks."""

    interval_id: int
    layer: int
    epoch: int
    matrix: torch.Tensor
    kind: ChunkKind

    def __post_init__(self):
        if self.matrix.dim() != 2:
            raise ShapeError(
                f"LambdaGNN ERROR: chunk matrix must be 2-D, got {tuple(self.matrix.shape)}"
            )

    @property
    def rows(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def cols(self) -> int:
        return int(self.matrix.shape[1])


@dataclass
class StashedContext:
    """
    What a backward task needs from the forward pass of the same
    (interval, layer, epoch). ``pre_activation`` is None under rematerialization.
    """

    gathered: torch.Tensor
    pre_activation: Optional[torch.Tensor]
    weight_version: int


class ContextStash:
    """StashedContext entries of one graph server, keyed by (interval, layer, epoch)."""

    def __init__(self) -> None:
        self._entries: Dict[Tuple[int, int, int], StashedContext] = {}

    def put(self, interval: int, layer: int, epoch: int, ctx: StashedContext) -> None:
        self._entries[(interval, layer, epoch)] = ctx

    def pop(self, interval: int, layer: int, epoch: int) -> StashedContext:
        key = (interval, layer, epoch)
        if key not in self._entries:
            raise StashError(
                f"LambdaGNN ERROR: no stashed context for interval {interval}, layer {layer}, epoch {epoch}"
            )
        return self._entries.pop(key)

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class GhostMessage:
    """Rows of one interval bound for one remote partition."""

    src_partition: int
    dst_partition: int
    forward: bool
    layer: int
    epoch: int
    interval_id: int
    vertices: torch.Tensor
    rows: torch.Tensor

    @property
    def payload_bytes(self) -> int:
        return self.rows.numel() * self.rows.element_size()


def _edge_destinations(offsets: torch.Tensor) -> torch.Tensor:
    counts = offsets[1:] - offsets[:-1]
    return torch.repeat_interleave(torch.arange(counts.numel()), counts)


def _position_in_interval(p: Partition, interval: VertexInterval) -> torch.Tensor:
    if interval.partition_id != p.partition_id:
        raise ValueError(
            f"LambdaGNN ERROR: interval {interval.interval_id} belongs to partition "
            f"{interval.partition_id}, not {p.partition_id}"
        )
    position = torch.full((p.num_owned,), -1, dtype=torch.int64)
    position[interval.local_ids] = torch.arange(interval.size)
    return position


def _edge_view(p: Partition, forward: bool):
    if forward:
        return p.in_offsets, p.in_slots, p.in_norm
    return p.out_offsets, p.out_slots, p.out_norm


def required_slots(p: Partition, interval: VertexInterval, forward: bool) -> torch.Tensor:
    """Sorted slot indices an interval's gather reads (its own rows and its neighbors')."""
    offsets, slots, _ = _edge_view(p, forward)
    position = _position_in_interval(p, interval)
    in_interval = position[_edge_destinations(offsets)] >= 0
    return torch.unique(torch.cat([interval.local_ids, slots[in_interval]]))


def _aggregate(
    p: Partition,
    interval: VertexInterval,
    slot_rows: torch.Tensor,
    present: Optional[torch.Tensor],
    forward: bool,
) -> torch.Tensor:
    offsets, slots, norm = _edge_view(p, forward)
    if slot_rows.shape[0] != p.num_slots(forward):
        raise ShapeError(
            f"LambdaGNN ERROR: slot table has {slot_rows.shape[0]} rows, "
            f"partition {p.partition_id} has {p.num_slots(forward)} slots"
        )
    position = _position_in_interval(p, interval)
    if present is not None:
        needed = required_slots(p, interval, forward)
        missing = needed[~present[needed]]
        if missing.numel() > 0:
            raise MissingGhostError(
                f"LambdaGNN ERROR: interval {interval.interval_id} needs {missing.numel()} "
                f"undelivered rows (first slot {int(missing[0])})"
            )
    dtype = slot_rows.dtype
    local = interval.local_ids
    out = p.self_norm[local].to(dtype).unsqueeze(1) * slot_rows[local]
    dst = position[_edge_destinations(offsets)]
    mask = dst >= 0
    contributions = norm[mask].to(dtype).unsqueeze(1) * slot_rows[slots[mask]]
    out.index_add_(0, dst[mask], contributions)
    return out


def gather(
    p: Partition,
    interval: VertexInterval,
    layer: int,
    epoch: int,
    slot_rows: torch.Tensor,
    present: Optional[torch.Tensor] = None,
) -> LayerChunk:
    """
    Row v of the result is ``self(v) * H[v] + sum_{u->v} norm(u->v) * H[u]``,
    the interval's slice of the normalized-adjacency product.

    ``slot_rows`` holds one row per forward slot of ``p`` (owned rows first,
    then forward ghosts); ``present`` flags the slots that hold a delivered value.
    """
    matrix = _aggregate(p, interval, slot_rows, present, forward=True)
    return LayerChunk(interval.interval_id, layer, epoch, matrix, ChunkKind.GATHERED)


def backward_gather(
    p: Partition,
    interval: VertexInterval,
    layer: int,
    epoch: int,
    slot_grads: torch.Tensor,
    present: Optional[torch.Tensor] = None,
) -> LayerChunk:
    """Transposed gather over out-edges: row u is ``self(u) * d[u] + sum_{u->v} norm(u->v) * d[v]``."""
    matrix = _aggregate(p, interval, slot_grads, present, forward=False)
    return LayerChunk(interval.interval_id, layer, epoch, matrix, ChunkKind.GRADIENT)


def scatter(
    p: Partition,
    interval: VertexInterval,
    chunk: LayerChunk,
    forward: bool = True,
) -> List[GhostMessage]:
    """One message per remote partition that reads any of the interval's rows."""
    if chunk.interval_id != interval.interval_id or chunk.rows != interval.size:
        raise ValueError(
            f"LambdaGNN ERROR: chunk of interval {chunk.interval_id} with {chunk.rows} rows "
            f"does not match interval {interval.interval_id} of size {interval.size}"
        )
    _position_in_interval(p, interval)
    send = p.forward_send if forward else p.backward_send
    in_interval = torch.zeros(p.owner.numel(), dtype=torch.bool)
    in_interval[interval.vertices] = True
    row_of = torch.full((p.owner.numel(),), -1, dtype=torch.int64)
    row_of[interval.vertices] = torch.arange(interval.size)

    messages = []
    for dst in sorted(send):
        vertices = send[dst][in_interval[send[dst]]]
        if vertices.numel() == 0:
            continue
        messages.append(
            GhostMessage(
                src_partition=p.partition_id,
                dst_partition=dst,
                forward=forward,
                layer=chunk.layer,
                epoch=chunk.epoch,
                interval_id=interval.interval_id,
                vertices=vertices,
                rows=chunk.matrix[row_of[vertices]].contiguous(),
            )
        )
    return messages


def apply_edge(chunk: LayerChunk) -> LayerChunk:
    return chunk


def apply_vertex(
    chunk: LayerChunk,
    weight: torch.Tensor,
    version: int,
    last_layer: bool,
    stashed_version: Optional[int] = None,
    remat: bool = False,
) -> Tuple[LayerChunk, StashedContext]:
    """
    ``relu(chunk @ W)`` for hidden layers, raw logits ``chunk @ W`` for the last one.
    Returns the output chunk and the context the backward pass of this
    (interval, layer, epoch) will need.
    """
    if stashed_version is not None and version < stashed_version:
        raise StashError(
            f"LambdaGNN ERROR: weight version {version} is older than stashed version {stashed_version}"
        )
    pre = matmul(chunk.matrix, weight)
    out = pre if last_layer else relu(pre)
    ctx = StashedContext(
        gathered=chunk.matrix,
        pre_activation=None if remat else pre,
        weight_version=version,
    )
    return (
        LayerChunk(chunk.interval_id, chunk.layer, chunk.epoch, out, ChunkKind.ACTIVATED),
        ctx,
    )


def rematerialize(ctx: StashedContext, weight: torch.Tensor) -> torch.Tensor:
    if ctx.pre_activation is not None:
        return ctx.pre_activation
    return matmul(ctx.gathered, weight)


def grad_apply_vertex(
    ctx: StashedContext,
    upstream: torch.Tensor,
    weight: torch.Tensor,
    version: int,
    last_layer: bool,
    need_downstream: bool = True,
) -> Tuple[torch.Tensor, Optional[torch.Tensor]]:
    """
    Local weight gradient ``gathered^T @ delta_post`` and downstream gradient
    ``delta_post @ W^T``, where ``delta_post`` is ``upstream`` for the output
    layer and ``relu'(pre) * upstream`` otherwise.
    """
    if version != ctx.weight_version:
        raise StashError(
            f"LambdaGNN ERROR: backward uses weight version {version}, forward used {ctx.weight_version}"
        )
    if last_layer:
        delta_post = upstream
    else:
        delta_post = relu_backward(rematerialize(ctx, weight), upstream)
    grad_weight = matmul(ctx.gathered.t().contiguous(), delta_post)
    downstream = None
    if need_downstream:
        downstream = matmul(delta_post, weight.t().contiguous())
    return check_finite(grad_weight, "grad_apply_vertex"), downstream
