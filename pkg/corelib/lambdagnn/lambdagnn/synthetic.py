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

"""Desk-scale stochastic block model graphs and the metadata of the large benchmark graphs."""

from dataclasses import dataclass
from typing import Dict, Tuple

import torch

from .graph import Graph, build_graph, expand_undirected

FEATURE_NOISE_STD = 0.5


@dataclass(frozen=True)
class DatasetMetadata:
    vertices: int
    edges: int
    features: int
    labels: int


DATASET_METADATA: Dict[str, DatasetMetadata] = {
    "reddit-small": DatasetMetadata(232_900, 114_800_000, 602, 41),
    "reddit-large": DatasetMetadata(1_100_000, 1_300_000_000, 301, 50),
    "amazon": DatasetMetadata(9_200_000, 313_900_000, 300, 25),
    "friendster": DatasetMetadata(65_600_000, 3_600_000_000, 32, 50),
}


def sbm_edges(
    communities: int, per_community: int, p_in: float, p_out: float, seed: int
) -> torch.Tensor:
    """Undirected SBM edges (u < v); vertices are numbered community by community."""
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"LambdaGNN ERROR: {name} must be in [0, 1], got {p}")
    if communities < 1 or per_community < 1:
        raise ValueError(
            f"LambdaGNN ERROR: invalid SBM size {communities}x{per_community}"
        )
    n = communities * per_community
    community = torch.arange(n) // per_community
    same = community.unsqueeze(0) == community.unsqueeze(1)
    probs = torch.where(
        same,
        torch.tensor(p_in, dtype=torch.float64),
        torch.tensor(p_out, dtype=torch.float64),
    )
    generator = torch.Generator().manual_seed(seed)
    draws = torch.rand(n, n, dtype=torch.float64, generator=generator)
    upper = torch.triu(draws < probs, diagonal=1)
    return upper.nonzero()


def synth_sbm(
    communities: int,
    per_community: int,
    p_in: float,
    p_out: float,
    seed: int,
    noise: float = FEATURE_NOISE_STD,
) -> Tuple[Graph, torch.Tensor, torch.Tensor]:
    """
    Graph, features and labels of a stochastic block model. The label of a
    vertex is its community; its features are the community indicator plus
    Gaussian noise.
    """
    edges = sbm_edges(communities, per_community, p_in, p_out, seed)
    n = communities * per_community
    graph = build_graph(expand_undirected(edges), n)
    labels = torch.arange(n) // per_community
    generator = torch.Generator().manual_seed(seed + 1)
    features = torch.zeros(n, communities, dtype=torch.float32)
    features[torch.arange(n), labels] = 1.0
    features += noise * torch.randn(n, communities, generator=generator)
    return graph, features, labels
