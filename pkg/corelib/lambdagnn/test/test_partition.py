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

import pytest
import torch
from lambdagnn.exceptions import DatasetIOError, GraphFormatError
from lambdagnn.graph import build_graph, expand_undirected
from lambdagnn.partition import (
    load_partition_file,
    partition_graph,
    round_robin_assignment,
    split_intervals,
)


@pytest.fixture
def path4():
    return build_graph(expand_undirected([(0, 1), (1, 2), (2, 3)]), 4)


def test_edge_cut_ghosts(path4):
    p0, p1 = partition_graph(path4, [0, 0, 1, 1])
    assert p0.owned.tolist() == [0, 1]
    assert p0.forward_ghosts.tolist() == [2]
    assert p0.backward_ghosts.tolist() == [2]
    assert p1.forward_ghosts.tolist() == [1]
    assert list(p0.forward_send) == [1] and p0.forward_send[1].tolist() == [1]
    assert p1.forward_recv[0].tolist() == [1]
    assert p1.backward_send[0].tolist() == [2]
    assert p0.backward_recv[1].tolist() == [2]
    assert p0.ghost_edge_count() == 1
    assert p0.num_slots(True) == 3


def test_slots_of(path4):
    p0, _ = partition_graph(path4, [0, 0, 1, 1])
    assert p0.slots_of(torch.tensor([1, 0, 2]), forward=True).tolist() == [1, 0, 2]
    with pytest.raises(KeyError):
        p0.slots_of(torch.tensor([3]), forward=True)


@pytest.mark.parametrize("num_partitions", [1, 2, 3, 5])
def test_partitions_cover_every_edge_once(make_graph, num_partitions):
    g = make_graph(50, 0.08, num_partitions)
    parts = partition_graph(g, round_robin_assignment(50, num_partitions))
    owned = torch.cat([p.owned for p in parts]).sort().values
    assert torch.equal(owned, torch.arange(50))
    assert sum(int(p.in_sources.numel()) for p in parts) == g.num_edges
    assert sum(int(p.out_targets.numel()) for p in parts) == g.num_edges
    for p in parts:
        # every in-edge source resolves to an owned or ghost slot
        assert bool((p.in_slots < p.num_slots(True)).all())
        assert bool((p.out_slots < p.num_slots(False)).all())


@pytest.mark.parametrize(
    "assignment",
    [[0, 0, 0], [0, 0, 2, 2], [0, -1, 0, 1]],
)
def test_bad_assignments(path4, assignment):
    with pytest.raises(GraphFormatError):
        partition_graph(path4, assignment)


@pytest.mark.parametrize("m, k, sizes", [(10, 3, [4, 3, 3]), (4, 4, [1, 1, 1, 1]), (7, 1, [7])])
def test_interval_sizes(make_graph, m, k, sizes):
    (p,) = partition_graph(make_graph(m, 0.3, 0), [0] * m)
    intervals = split_intervals(p, k, first_id=5)
    assert [iv.size for iv in intervals] == sizes
    assert [iv.interval_id for iv in intervals] == list(range(5, 5 + k))
    assert torch.equal(torch.cat([iv.local_ids for iv in intervals]).sort().values, torch.arange(m))
    for iv in intervals:
        assert torch.equal(iv.vertices, p.owned[iv.local_ids])


def test_interval_count_out_of_range(make_graph):
    (p,) = partition_graph(make_graph(5, 0.3, 0), [0] * 5)
    for k in (0, 6):
        with pytest.raises(ValueError):
            split_intervals(p, k)


def test_boundary_swap_lowers_cross_edges():
    # 0-2 and 1-3 are the only edges; cutting [0, 1 | 2, 3] cuts both, swapping 1 and 2 cuts none
    g = build_graph(expand_undirected([(0, 2), (1, 3)]), 4)
    (p,) = partition_graph(g, [0, 0, 0, 0])
    first, second = split_intervals(p, 2)
    assert sorted(first.vertices.tolist()) == [0, 2]
    assert sorted(second.vertices.tolist()) == [1, 3]


def test_round_robin():
    assert round_robin_assignment(5, 2).tolist() == [0, 1, 0, 1, 0]
    with pytest.raises(ValueError):
        round_robin_assignment(2, 3)


def test_partition_file(tmp_path):
    path = tmp_path / "parts.txt"
    path.write_text("0\n1\n1\n0\n", encoding="utf-8")
    assert load_partition_file(str(path), 4).tolist() == [0, 1, 1, 0]
    with pytest.raises(GraphFormatError):
        load_partition_file(str(path), 5)
    path.write_text("0\nx\n", encoding="utf-8")
    with pytest.raises(GraphFormatError):
        load_partition_file(str(path), 2)
    path.write_text("0\n-2\n", encoding="utf-8")
    with pytest.raises(GraphFormatError):
        load_partition_file(str(path), 2)
    with pytest.raises(DatasetIOError):
        load_partition_file(str(tmp_path / "missing.txt"), 2)
