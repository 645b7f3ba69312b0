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

import math

import pytest
import torch
from lambdagnn.exceptions import GraphFormatError
from lambdagnn.graph import build_graph, edge_multiset, expand_undirected
from lambdagnn.oracle import dense_normalized_adjacency


def test_two_clique_coefficients(two_clique):
    assert two_clique.edge_norm(0, 1) == 0.5
    assert two_clique.edge_norm(1, 0) == 0.5
    assert torch.equal(two_clique.self_norm, torch.tensor([0.5, 0.5], dtype=torch.float64))


def test_path_coefficients():
    g = build_graph(expand_undirected([(0, 1), (1, 2)]), 3)
    assert g.num_edges == 4
    assert g.edge_norm(0, 1) == pytest.approx(1 / math.sqrt(2 * 3))
    assert g.edge_norm(1, 2) == pytest.approx(1 / math.sqrt(3 * 2))
    assert float(g.self_norm[1]) == pytest.approx(1 / 3)
    with pytest.raises(KeyError):
        g.edge_norm(0, 2)


def test_isolated_vertex_keeps_its_own_value():
    g = build_graph([(0, 1)], 3)
    assert float(g.self_norm[2]) == 1.0
    assert g.out_edges(2).numel() == 0 and g.in_edges(2).numel() == 0


@pytest.mark.parametrize(
    "edges, n",
    [
        ([(0, 0)], 2),
        ([(0, 1), (0, 1)], 2),
        ([(0, 2)], 2),
        ([(-1, 0)], 2),
        ([(0, 1)], 0),
    ],
)
def test_malformed_graphs_are_rejected(edges, n):
    with pytest.raises(GraphFormatError):
        build_graph(edges, n)


def test_expand_undirected_collapses_repeats():
    expanded = expand_undirected([(0, 1), (1, 0), (1, 2), (2, 2)])
    assert edge_multiset(expanded.tolist()) == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert expand_undirected([]).shape == (0, 2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_csr_and_reverse_views_agree(make_graph, seed):
    g = make_graph(40, 0.1, seed)
    forward = edge_multiset(g.edges().tolist())
    rev_dst = torch.repeat_interleave(torch.arange(40), g.rev_offsets[1:] - g.rev_offsets[:-1])
    reverse = edge_multiset(zip(g.rev_targets.tolist(), rev_dst.tolist()))
    assert forward == reverse
    a_hat = dense_normalized_adjacency(g)
    # symmetric input gives a symmetric normalized adjacency
    assert torch.allclose(a_hat, a_hat.t())
    assert torch.equal(g.in_degree, torch.bincount(g.csr_targets, minlength=40))


def test_neighbors_within():
    g = build_graph(expand_undirected([(0, 1), (1, 2), (2, 3), (3, 4)]), 5)
    assert g.neighbors_within(0, 0).tolist() == [True, False, False, False, False]
    assert g.neighbors_within(0, 2).tolist() == [True, True, True, False, False]
    assert bool(g.neighbors_within(2, 2).all())
