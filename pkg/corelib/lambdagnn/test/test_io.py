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

import numpy as np
import pytest
import torch
from lambdagnn.bsnap import (
    labels_to_onehot,
    load_features_bsnap,
    load_graph_bsnap,
    load_labels_bsnap,
    write_features_bsnap,
    write_graph_bsnap,
    write_labels_bsnap,
)
from lambdagnn.dataset import load_dataset, parse_synth_spec, split_masks
from lambdagnn.exceptions import ConfigError, DatasetIOError, GraphFormatError
from lambdagnn.graph import edge_multiset
from lambdagnn.synthetic import DATASET_METADATA, sbm_edges, synth_sbm


def test_graph_bytes_are_little_endian_pairs(tmp_path):
    path = tmp_path / "graph.bsnap"
    path.write_bytes(bytes([0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]))
    assert load_graph_bsnap(str(path)).tolist() == [[0, 1], [1, 0]]
    path.write_bytes(b"")
    assert load_graph_bsnap(str(path)).shape == (0, 2)
    path.write_bytes(bytes(9))
    with pytest.raises(GraphFormatError):
        load_graph_bsnap(str(path))
    path.write_bytes(bytes([5, 0, 0, 0, 0, 0, 0, 0]))
    with pytest.raises(GraphFormatError):
        load_graph_bsnap(str(path), num_vertices=5)
    with pytest.raises(DatasetIOError):
        load_graph_bsnap(str(tmp_path / "missing.bsnap"))


def test_graph_write_then_read(tmp_path):
    edges = torch.tensor([[0, 3], [2, 1], [4294967295, 0]])
    path = str(tmp_path / "g.bsnap")
    write_graph_bsnap(path, edges)
    assert torch.equal(load_graph_bsnap(path), edges)


def test_features(tmp_path):
    path = tmp_path / "features.bsnap"
    features = torch.tensor([[1.0, -2.5], [0.125, 3.0]])
    write_features_bsnap(str(path), features)
    raw = path.read_bytes()
    assert raw[:4] == bytes([2, 0, 0, 0]) and len(raw) == 4 + 16
    assert torch.equal(load_features_bsnap(str(path), 2), features)
    path.write_bytes(raw[:-3])
    with pytest.raises(GraphFormatError, match="expected 16"):
        load_features_bsnap(str(path), 2)


def test_labels(tmp_path):
    path = tmp_path / "labels.bsnap"
    path.write_bytes(np.array([3, 0, 2, 1], dtype="<u4").tobytes())
    labels, num_labels = load_labels_bsnap(str(path), 3)
    assert labels.tolist() == [0, 2, 1] and num_labels == 3
    path.write_bytes(np.array([3, 0, 3], dtype="<u4").tobytes())
    with pytest.raises(GraphFormatError):
        load_labels_bsnap(str(path))
    write_labels_bsnap(str(path), torch.tensor([1, 1, 0]), 2)
    assert load_labels_bsnap(str(path))[0].tolist() == [1, 1, 0]
    with pytest.raises(GraphFormatError):
        load_labels_bsnap(str(path), 4)
    assert labels_to_onehot(torch.tensor([1, 0]), 3).tolist() == [[0, 1, 0], [1, 0, 0]]


def test_load_dataset_expands_undirected_edges(tmp_path):
    write_graph_bsnap(str(tmp_path / "graph.bsnap"), torch.tensor([[0, 1], [1, 2]]))
    write_features_bsnap(str(tmp_path / "features.bsnap"), torch.ones(3, 4))
    write_labels_bsnap(str(tmp_path / "labels.bsnap"), torch.tensor([0, 1, 0]), 2)
    ds = load_dataset(str(tmp_path))
    assert ds.num_vertices == 3 and ds.num_classes == 2
    assert edge_multiset(ds.graph.edges().tolist()) == [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert ds.onehot().shape == (3, 2)
    with pytest.raises(DatasetIOError):
        load_dataset(str(tmp_path / "nowhere"))


def test_degenerate_sbm_is_two_cliques():
    g, features, labels = synth_sbm(2, 5, 1.0, 0.0, seed=0)
    assert g.num_edges == 2 * 5 * 4
    assert labels.tolist() == [0] * 5 + [1] * 5
    for v in range(10):
        assert sorted(g.out_edges(v).tolist()) == [u for u in range(10) if u != v and u // 5 == v // 5]
    assert features.shape == (10, 2) and features.dtype == torch.float32


def test_sbm_is_seeded():
    a = synth_sbm(3, 20, 0.2, 0.02, seed=4)
    b = synth_sbm(3, 20, 0.2, 0.02, seed=4)
    assert torch.equal(a[0].edges(), b[0].edges())
    assert torch.equal(a[1], b[1])
    assert not torch.equal(a[0].edges(), synth_sbm(3, 20, 0.2, 0.02, seed=5)[0].edges())


def test_inter_community_edge_count_statistics():
    n1 = n2 = 50
    p_out = 0.05
    counts = []
    for seed in range(100):
        edges = sbm_edges(2, 50, 0.1, p_out, seed)
        counts.append(int(((edges[:, 0] < 50) & (edges[:, 1] >= 50)).sum()))
    expected = n1 * n2 * p_out
    sigma = math.sqrt(n1 * n2 * p_out * (1 - p_out))
    assert abs(sum(counts) / len(counts) - expected) <= 3 * sigma / math.sqrt(len(counts))


def test_sbm_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        sbm_edges(2, 5, 1.5, 0.0, 0)
    with pytest.raises(ValueError):
        sbm_edges(0, 5, 0.5, 0.0, 0)


@pytest.mark.parametrize(
    "spec, expected",
    [("sbm:4x100", (4, 100, 0.1, 0.005)), ("sbm:2X50:0.3:0.01", (2, 50, 0.3, 0.01))],
)
def test_parse_synth_spec(spec, expected):
    assert parse_synth_spec(spec) == expected


@pytest.mark.parametrize("spec", ["sbm", "er:4x100", "sbm:4x", "sbm:4x100:0.1", "sbm:axb"])
def test_parse_synth_spec_errors(spec):
    with pytest.raises(ConfigError):
        parse_synth_spec(spec)


def test_split_masks_partition_the_vertices():
    train, val, test = split_masks(100, 0.6, 0.2, seed=1)
    assert int(train.sum()) == 60 and int(val.sum()) == 20 and int(test.sum()) == 20
    assert not bool((train & val).any() or (train & test).any() or (val & test).any())
    again = split_masks(100, 0.6, 0.2, seed=1)
    assert torch.equal(train, again[0])


def test_reference_dataset_table():
    assert set(DATASET_METADATA) == {"reddit-small", "reddit-large", "amazon", "friendster"}
    assert DATASET_METADATA["friendster"].features == 32
