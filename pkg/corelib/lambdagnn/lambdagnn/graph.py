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

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import torch

from .exceptions import GraphFormatError

EdgeList = Union[torch.Tensor, Sequence[Tuple[int, int]]]


def as_edge_tensor(edges: EdgeList) -> torch.Tensor:
    if isinstance(edges, torch.Tensor):
        tensor = edges.to(torch.int64)
    else:
        tensor = torch.tensor(list(edges), dtype=torch.int64)
    if tensor.numel() == 0:
        return torch.empty(0, 2, dtype=torch.int64)
    if tensor.dim() != 2 or tensor.shape[1] != 2:
        raise GraphFormatError(
            f"LambdaGNN ERROR: edge list must have shape (E, 2), got {tuple(tensor.shape)}"
        )
    return tensor


def expand_undirected(edges: EdgeList) -> torch.Tensor:
    """Turn each undirected edge into two directed edges; repeated pairs collapse."""
    tensor = as_edge_tensor(edges)
    both = torch.cat([tensor, tensor.flip(1)], dim=0)
    both = both[both[:, 0] != both[:, 1]]
    if both.numel() == 0:
        return torch.empty(0, 2, dtype=torch.int64)
    return torch.unique(both, dim=0)


def _offsets(keys: torch.Tensor, num_vertices: int) -> torch.Tensor:
    counts = torch.bincount(keys, minlength=num_vertices)
    offsets = torch.zeros(num_vertices + 1, dtype=torch.int64)
    offsets[1:] = torch.cumsum(counts, dim=0)
    return offsets


@dataclass(frozen=True)
class Graph:
    """
    Directed graph in CSR form with the coefficients of the normalized adjacency
    D^-1/2 (A + I) D^-1/2, where the degree of a vertex is its in-degree plus one.

    ``csr_*`` lists out-edges per source (edges sorted by (src, dst)), ``rev_*``
    lists in-edges per destination (sorted by (dst, src)). ``csr_norm`` and
    ``rev_norm`` are aligned with ``csr_targets`` and ``rev_targets``;
    ``self_norm[v]`` is the self-loop coefficient. The dense matrix is never built.
    """

    num_vertices: int
    csr_offsets: torch.Tensor
    csr_targets: torch.Tensor
    csr_norm: torch.Tensor
    rev_offsets: torch.Tensor
    rev_targets: torch.Tensor
    rev_norm: torch.Tensor
    self_norm: torch.Tensor
    in_degree: torch.Tensor

    @property
    def num_edges(self) -> int:
        return int(self.csr_targets.numel())

    def out_edges(self, v: int) -> torch.Tensor:
        return self.csr_targets[self.csr_offsets[v] : self.csr_offsets[v + 1]]

    def in_edges(self, v: int) -> torch.Tensor:
        return self.rev_targets[self.rev_offsets[v] : self.rev_offsets[v + 1]]

    def edge_sources(self) -> torch.Tensor:
        return torch.repeat_interleave(
            torch.arange(self.num_vertices), self.csr_offsets[1:] - self.csr_offsets[:-1]
        )

    def edges(self) -> torch.Tensor:
        """All directed edges as an (E, 2) tensor sorted by (src, dst)."""
        return torch.stack([self.edge_sources(), self.csr_targets], dim=1)

    def edge_norm(self, u: int, v: int) -> float:
        targets = self.out_edges(u)
        hits = (targets == v).nonzero()
        if hits.numel() == 0:
            raise KeyError(f"edge {u}->{v} not in graph")
        return float(self.csr_norm[int(self.csr_offsets[u]) + int(hits[0])])

    def neighbors_within(self, source: int, hops: int) -> torch.Tensor:
        """Boolean mask of vertices reachable from ``source`` in at most ``hops`` out-edges."""
        reached = torch.zeros(self.num_vertices, dtype=torch.bool)
        reached[source] = True
        frontier = torch.tensor([source], dtype=torch.int64)
        sources = self.edge_sources()
        for _ in range(hops):
            on_frontier = torch.zeros(self.num_vertices, dtype=torch.bool)
            on_frontier[frontier] = True
            nxt = self.csr_targets[on_frontier[sources]]
            nxt = nxt[~reached[nxt]].unique()
            if nxt.numel() == 0:
                break
            reached[nxt] = True
            frontier = nxt
        return reached


def build_graph(edge_list: EdgeList, num_vertices: int) -> Graph:
    if num_vertices < 1:
        raise GraphFormatError(
            f"LambdaGNN ERROR: num_vertices must be >= 1, got {num_vertices}"
        )
    edges = as_edge_tensor(edge_list)
    if edges.numel() > 0:
        if int(edges.min()) < 0 or int(edges.max()) >= num_vertices:
            raise GraphFormatError(
                f"LambdaGNN ERROR: vertex id out of range [0, {num_vertices})"
            )
        if bool((edges[:, 0] == edges[:, 1]).any()):
            raise GraphFormatError(
                "LambdaGNN ERROR: self-loops are added analytically and must not appear in the input"
            )
    src, dst = edges[:, 0], edges[:, 1]
    forward_keys = src * num_vertices + dst
    if torch.unique(forward_keys).numel() != forward_keys.numel():
        raise GraphFormatError("LambdaGNN ERROR: duplicate edge in input")

    in_degree = torch.bincount(dst, minlength=num_vertices)
    tilde = (in_degree + 1).to(torch.float64)
    inv_sqrt = tilde.rsqrt()

    order = torch.argsort(forward_keys)
    csr_src, csr_dst = src[order], dst[order]
    csr_norm = inv_sqrt[csr_src] * inv_sqrt[csr_dst]

    reverse_keys = dst * num_vertices + src
    rorder = torch.argsort(reverse_keys)
    rev_dst, rev_src = dst[rorder], src[rorder]
    rev_norm = inv_sqrt[rev_src] * inv_sqrt[rev_dst]

    return Graph(
        num_vertices=num_vertices,
        csr_offsets=_offsets(csr_src, num_vertices),
        csr_targets=csr_dst.clone(),
        csr_norm=csr_norm,
        rev_offsets=_offsets(rev_dst, num_vertices),
        rev_targets=rev_src.clone(),
        rev_norm=rev_norm,
        self_norm=1.0 / tilde,
        in_degree=in_degree,
    )


def edge_multiset(edges: Iterable[Tuple[int, int]]) -> list:
    return sorted((int(u), int(v)) for u, v in edges)
