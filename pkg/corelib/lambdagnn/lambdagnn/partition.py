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

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import torch

from .exceptions import DatasetIOError, GraphFormatError
from .graph import Graph


@dataclass(frozen=True)
class Partition:
    """
    One graph server's share of an edge-cut partitioned graph.

    Owned vertices are addressed by local index (their position in ``owned``).
    Gathers address their inputs through a *slot* space: slots ``[0, m)`` are the
    owned vertices, slots ``[m, m + g)`` are ghosts. The forward direction uses
    ``forward_ghosts`` (remote sources of in-edges), the backward direction
    ``backward_ghosts`` (remote targets of out-edges).

    Ghost inventory, per remote partition id:
        forward_send[q]   owned vertices with an out-edge into partition q
        forward_recv[q]   vertices of q with an out-edge into this partition
        backward_send[q]  owned vertices with an in-edge from partition q
        backward_recv[q]  vertices of q with an in-edge from this partition
    """

    partition_id: int
    owned: torch.Tensor
    global_to_local: torch.Tensor
    owner: torch.Tensor
    self_norm: torch.Tensor
    in_offsets: torch.Tensor
    in_sources: torch.Tensor
    in_norm: torch.Tensor
    in_slots: torch.Tensor
    out_offsets: torch.Tensor
    out_targets: torch.Tensor
    out_norm: torch.Tensor
    out_slots: torch.Tensor
    forward_ghosts: torch.Tensor
    backward_ghosts: torch.Tensor
    forward_send: Dict[int, torch.Tensor] = field(default_factory=dict)
    forward_recv: Dict[int, torch.Tensor] = field(default_factory=dict)
    backward_send: Dict[int, torch.Tensor] = field(default_factory=dict)
    backward_recv: Dict[int, torch.Tensor] = field(default_factory=dict)

    @property
    def num_owned(self) -> int:
        return int(self.owned.numel())

    def num_slots(self, forward: bool) -> int:
        ghosts = self.forward_ghosts if forward else self.backward_ghosts
        return self.num_owned + int(ghosts.numel())

    def slots_of(self, global_ids: torch.Tensor, forward: bool) -> torch.Tensor:
        """Slot index of each global vertex id (owned or ghost) in this partition."""
        global_ids = global_ids.to(torch.int64)
        local = self.global_to_local[global_ids]
        is_owned = local >= 0
        ghosts = self.forward_ghosts if forward else self.backward_ghosts
        ghost_pos = torch.searchsorted(ghosts, global_ids)
        if bool((~is_owned).any()):
            remote, pos = global_ids[~is_owned], ghost_pos[~is_owned]
            if ghosts.numel() == 0 or bool((pos >= ghosts.numel()).any()):
                raise KeyError("vertex is neither owned nor a ghost of this partition")
            if not bool((ghosts[pos] == remote).all()):
                raise KeyError("vertex is neither owned nor a ghost of this partition")
        return torch.where(is_owned, local, self.num_owned + ghost_pos)

    def local_edges(self) -> torch.Tensor:
        """Directed edges (local_src, local_dst) with both endpoints owned."""
        counts = self.in_offsets[1:] - self.in_offsets[:-1]
        dst_local = torch.repeat_interleave(torch.arange(self.num_owned), counts)
        src_local = self.global_to_local[self.in_sources]
        keep = src_local >= 0
        return torch.stack([src_local[keep], dst_local[keep]], dim=1)

    def ghost_edge_count(self) -> int:
        return int((self.global_to_local[self.in_sources] < 0).sum())


@dataclass(frozen=True)
class VertexInterval:
    """
    A contiguous run ``[start, end)`` of a partition's interval ordering.
    ``local_ids`` are the owned local indices of that run, ``vertices`` their
    global ids. ``interval_id`` is unique across all partitions of a run.
    """

    interval_id: int
    partition_id: int
    start: int
    end: int
    local_ids: torch.Tensor
    vertices: torch.Tensor

    @property
    def size(self) -> int:
        return self.end - self.start


def _slice_csr(
    offsets: torch.Tensor, values: List[torch.Tensor], owned: torch.Tensor
):
    starts, ends = offsets[owned], offsets[owned + 1]
    counts = ends - starts
    local_offsets = torch.zeros(owned.numel() + 1, dtype=torch.int64)
    local_offsets[1:] = torch.cumsum(counts, dim=0)
    if int(counts.sum()) == 0:
        index = torch.empty(0, dtype=torch.int64)
    else:
        index = torch.cat(
            [torch.arange(int(s), int(e)) for s, e in zip(starts, ends)]
        )
    return local_offsets, [v[index] for v in values]


def _group_by_owner(
    vertices: torch.Tensor, partner_owner: torch.Tensor
) -> Dict[int, torch.Tensor]:
    grouped: Dict[int, torch.Tensor] = {}
    for q in torch.unique(partner_owner).tolist():
        grouped[int(q)] = torch.unique(vertices[partner_owner == q])
    return grouped


def partition_graph(
    g: Graph,
    assignment: Union[Sequence[int], torch.Tensor],
    num_partitions: Optional[int] = None,
) -> List[Partition]:
    if isinstance(assignment, torch.Tensor):
        owner = assignment.to(torch.int64)
    else:
        owner = torch.tensor(list(assignment), dtype=torch.int64)
    if owner.numel() != g.num_vertices:
        raise GraphFormatError(
            f"LambdaGNN ERROR: assignment has {owner.numel()} entries for {g.num_vertices} vertices"
        )
    if num_partitions is None:
        num_partitions = int(owner.max()) + 1
    if int(owner.min()) < 0 or int(owner.max()) >= num_partitions:
        raise GraphFormatError(
            f"LambdaGNN ERROR: partition ids must be dense in [0, {num_partitions})"
        )
    sizes = torch.bincount(owner, minlength=num_partitions)
    if bool((sizes == 0).any()):
        empty = (sizes == 0).nonzero().flatten().tolist()
        raise GraphFormatError(f"LambdaGNN ERROR: empty partition(s) {empty}")

    sources = g.edge_sources()
    rev_dst = torch.repeat_interleave(
        torch.arange(g.num_vertices), g.rev_offsets[1:] - g.rev_offsets[:-1]
    )
    partitions = []
    for pid in range(num_partitions):
        owned = (owner == pid).nonzero().flatten()
        global_to_local = torch.full((g.num_vertices,), -1, dtype=torch.int64)
        global_to_local[owned] = torch.arange(owned.numel())

        in_offsets, (in_sources, in_norm) = _slice_csr(
            g.rev_offsets, [g.rev_targets, g.rev_norm], owned
        )
        out_offsets, (out_targets, out_norm) = _slice_csr(
            g.csr_offsets, [g.csr_targets, g.csr_norm], owned
        )
        forward_ghosts = torch.unique(in_sources[owner[in_sources] != pid])
        backward_ghosts = torch.unique(out_targets[owner[out_targets] != pid])

        # cross edges leaving / entering this partition
        leaving = (owner[sources] == pid) & (owner[g.csr_targets] != pid)
        entering = (owner[rev_dst] == pid) & (owner[g.rev_targets] != pid)
        forward_send = _group_by_owner(sources[leaving], owner[g.csr_targets[leaving]])
        forward_recv = _group_by_owner(g.rev_targets[entering], owner[g.rev_targets[entering]])
        backward_send = _group_by_owner(rev_dst[entering], owner[g.rev_targets[entering]])
        backward_recv = _group_by_owner(g.csr_targets[leaving], owner[g.csr_targets[leaving]])

        partial = dict(
            partition_id=pid,
            owned=owned,
            global_to_local=global_to_local,
            owner=owner,
            self_norm=g.self_norm[owned],
            in_offsets=in_offsets,
            in_sources=in_sources,
            in_norm=in_norm,
            out_offsets=out_offsets,
            out_targets=out_targets,
            out_norm=out_norm,
            forward_ghosts=forward_ghosts,
            backward_ghosts=backward_ghosts,
            forward_send=forward_send,
            forward_recv=forward_recv,
            backward_send=backward_send,
            backward_recv=backward_recv,
        )
        placeholder = Partition(
            in_slots=torch.empty(0, dtype=torch.int64),
            out_slots=torch.empty(0, dtype=torch.int64),
            **partial,
        )
        partitions.append(
            Partition(
                in_slots=placeholder.slots_of(in_sources, forward=True),
                out_slots=placeholder.slots_of(out_targets, forward=False),
                **partial,
            )
        )
    return partitions


def _cross_interval_edges(local_edges: torch.Tensor, interval_of: torch.Tensor) -> int:
    if local_edges.numel() == 0:
        return 0
    return int((interval_of[local_edges[:, 0]] != interval_of[local_edges[:, 1]]).sum())


def split_intervals(p: Partition, k: int, first_id: int = 0) -> List[VertexInterval]:
    """
    Cut the partition into ``k`` intervals of equal size (the remainder goes to the
    lowest-indexed intervals), keeping the vertex order, then make one pass over
    the cuts swapping the two vertices adjacent to each cut whenever that strictly
    lowers the number of inter-interval edges.
    """
    m = p.num_owned
    if not 1 <= k <= m:
        raise ValueError(
            f"LambdaGNN ERROR: cannot split {m} vertices into {k} intervals"
        )
    base, remainder = divmod(m, k)
    sizes = [base + 1 if i < remainder else base for i in range(k)]
    bounds = [0]
    for size in sizes:
        bounds.append(bounds[-1] + size)

    order = torch.arange(m)
    interval_of = torch.repeat_interleave(torch.arange(k), torch.tensor(sizes))
    local_edges = p.local_edges()
    best = _cross_interval_edges(local_edges, interval_of)
    for i in range(k - 1):
        left_pos, right_pos = bounds[i + 1] - 1, bounds[i + 1]
        a, b = int(order[left_pos]), int(order[right_pos])
        interval_of[a], interval_of[b] = i + 1, i
        candidate = _cross_interval_edges(local_edges, interval_of)
        if candidate < best:
            best = candidate
            order[left_pos], order[right_pos] = b, a
        else:
            interval_of[a], interval_of[b] = i, i + 1

    intervals = []
    for i in range(k):
        local_ids = order[bounds[i] : bounds[i + 1]].clone()
        intervals.append(
            VertexInterval(
                interval_id=first_id + i,
                partition_id=p.partition_id,
                start=bounds[i],
                end=bounds[i + 1],
                local_ids=local_ids,
                vertices=p.owned[local_ids],
            )
        )
    return intervals


def round_robin_assignment(num_vertices: int, num_partitions: int) -> torch.Tensor:
    if num_partitions < 1 or num_partitions > num_vertices:
        raise ValueError(
            f"LambdaGNN ERROR: cannot spread {num_vertices} vertices over {num_partitions} partitions"
        )
    return torch.arange(num_vertices) % num_partitions


def load_partition_file(path: str, num_vertices: int) -> torch.Tensor:
    """Parts file: UTF-8 text, line i holds the partition id of vertex i."""
    if not os.path.isfile(path):
        raise DatasetIOError(f"LambdaGNN ERROR: partition file {path} not found")
    with open(path, "r", encoding="utf-8") as f:
        content = f.read()
    if content.endswith("\n"):
        content = content[:-1]
    lines = content.split("\n") if content else []
    if len(lines) != num_vertices:
        raise GraphFormatError(
            f"LambdaGNN ERROR: partition file has {len(lines)} lines, expected {num_vertices}"
        )
    assignment = []
    for lineno, line in enumerate(lines):
        try:
            value = int(line)
        except ValueError:
            raise GraphFormatError(
                f"LambdaGNN ERROR: partition file line {lineno + 1} is not an integer: {line!r}"
            )
        if value < 0:
            raise GraphFormatError(
                f"LambdaGNN ERROR: partition file line {lineno + 1} is negative"
            )
        assignment.append(value)
    return torch.tensor(assignment, dtype=torch.int64)
