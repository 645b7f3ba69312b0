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

from typing import Callable

import pytest
import torch
from lambdagnn.dataset import Dataset
from lambdagnn.graph import Graph, build_graph, expand_undirected


def random_graph(num_vertices: int, edge_prob: float, seed: int) -> Graph:
    generator = torch.Generator().manual_seed(seed)
    draws = torch.rand(num_vertices, num_vertices, generator=generator)
    upper = torch.triu(draws < edge_prob, diagonal=1).nonzero()
    return build_graph(expand_undirected(upper), num_vertices)


def random_dataset(
    num_vertices: int,
    edge_prob: float,
    seed: int,
    num_features: int = 8,
    num_classes: int = 3,
) -> Dataset:
    graph = random_graph(num_vertices, edge_prob, seed)
    generator = torch.Generator().manual_seed(seed + 1000)
    features = torch.randn(num_vertices, num_features, generator=generator)
    labels = torch.randint(0, num_classes, (num_vertices,), generator=generator)
    return Dataset(graph, features, labels, num_classes)


def path_dataset(num_vertices: int, num_features: int = 16, num_classes: int = 4) -> Dataset:
    edges = torch.stack([torch.arange(num_vertices - 1), torch.arange(1, num_vertices)], dim=1)
    graph = build_graph(expand_undirected(edges), num_vertices)
    generator = torch.Generator().manual_seed(7)
    features = torch.randn(num_vertices, num_features, generator=generator)
    labels = torch.randint(0, num_classes, (num_vertices,), generator=generator)
    return Dataset(graph, features, labels, num_classes)


@pytest.fixture
def make_graph() -> Callable[..., Graph]:
    return random_graph


@pytest.fixture
def make_dataset() -> Callable[..., Dataset]:
    return random_dataset


@pytest.fixture
def make_path_dataset() -> Callable[..., Dataset]:
    return path_dataset


@pytest.fixture
def two_clique() -> Graph:
    return build_graph([(0, 1), (1, 0)], 2)
