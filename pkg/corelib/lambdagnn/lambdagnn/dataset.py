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

import logging
import os
from dataclasses import dataclass
from typing import Tuple

import torch

from .bsnap import labels_to_onehot, load_features_bsnap, load_graph_bsnap, load_labels_bsnap
from .exceptions import ConfigError
from .graph import Graph, build_graph, expand_undirected
from .lambdagnn_config import RunConfig
from .synthetic import synth_sbm

logger = logging.getLogger(__name__)

GRAPH_FILE = "graph.bsnap"
FEATURES_FILE = "features.bsnap"
LABELS_FILE = "labels.bsnap"
DEFAULT_P_IN = 0.1
DEFAULT_P_OUT = 0.005


@dataclass
class Dataset:
    graph: Graph
    features: torch.Tensor
    labels: torch.Tensor
    num_classes: int

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    def onehot(self, dtype: torch.dtype = torch.float32) -> torch.Tensor:
        return labels_to_onehot(self.labels, self.num_classes, dtype)


def load_dataset(directory: str) -> Dataset:
    """Load graph.bsnap, features.bsnap and labels.bsnap; the label count fixes |V|."""
    labels, num_classes = load_labels_bsnap(os.path.join(directory, LABELS_FILE))
    n = labels.numel()
    features = load_features_bsnap(os.path.join(directory, FEATURES_FILE), n)
    edges = load_graph_bsnap(os.path.join(directory, GRAPH_FILE), n)
    graph = build_graph(expand_undirected(edges), n)
    logger.info(
        "loaded %s: %d vertices, %d directed edges, %d features, %d labels",
        directory, n, graph.num_edges, features.shape[1], num_classes,
    )
    return Dataset(graph, features, labels, num_classes)


def parse_synth_spec(spec: str) -> Tuple[int, int, float, float]:
    """``sbm:CxN`` or ``sbm:CxN:p_in:p_out``."""
    parts = spec.split(":")
    try:
        if parts[0] != "sbm" or len(parts) not in (2, 4):
            raise ValueError(spec)
        communities, per_community = (int(x) for x in parts[1].lower().split("x"))
        p_in = float(parts[2]) if len(parts) == 4 else DEFAULT_P_IN
        p_out = float(parts[3]) if len(parts) == 4 else DEFAULT_P_OUT
    except ValueError:
        raise ConfigError(
            f"LambdaGNN ERROR: cannot parse synthetic spec {spec!r}, expected sbm:CxN[:p_in:p_out]"
        )
    return communities, per_community, p_in, p_out


def resolve_dataset(config: RunConfig) -> Dataset:
    if config.dataset is not None:
        return load_dataset(config.dataset)
    if config.synth is None:
        raise ConfigError("LambdaGNN ERROR: no dataset or synthetic spec given")
    communities, per_community, p_in, p_out = parse_synth_spec(config.synth)
    try:
        graph, features, labels = synth_sbm(communities, per_community, p_in, p_out, config.seed)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return Dataset(graph, features, labels, communities)


def split_masks(
    num_vertices: int, train_fraction: float, val_fraction: float, seed: int
) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """Seeded train / validation / test vertex masks."""
    generator = torch.Generator().manual_seed(seed)
    order = torch.randperm(num_vertices, generator=generator)
    n_train = max(1, int(round(train_fraction * num_vertices)))
    n_val = min(num_vertices - n_train, int(round(val_fraction * num_vertices)))
    masks = []
    for lo, hi in ((0, n_train), (n_train, n_train + n_val), (n_train + n_val, num_vertices)):
        mask = torch.zeros(num_vertices, dtype=torch.bool)
        mask[order[lo:hi]] = True
        masks.append(mask)
    return masks[0], masks[1], masks[2]
