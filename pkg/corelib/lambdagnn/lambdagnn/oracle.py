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

"""Dense reference evaluation of the GCN, used as ground truth by the tests."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import torch

from .graph import Graph
from .tensor_ops import relu, relu_backward, softmax_cross_entropy

MAX_DENSE_VERTICES = 20000


def dense_normalized_adjacency(g: Graph, dtype: torch.dtype = torch.float64) -> torch.Tensor:
    """``A_hat[v, u]`` is the coefficient of edge u->v; the diagonal holds the self-loop terms."""
    if g.num_vertices > MAX_DENSE_VERTICES:
        raise ValueError(
            f"LambdaGNN ERROR: refusing to densify a graph with {g.num_vertices} vertices "
            f"(limit {MAX_DENSE_VERTICES})"
        )
    a_hat = torch.zeros(g.num_vertices, g.num_vertices, dtype=torch.float64)
    a_hat[g.csr_targets, g.edge_sources()] = g.csr_norm
    a_hat[torch.arange(g.num_vertices), torch.arange(g.num_vertices)] = g.self_norm
    return a_hat.to(dtype)


@dataclass
class OracleForward:
    gathered: List[torch.Tensor]
    pre_activations: List[torch.Tensor]
    hidden: List[torch.Tensor]
    logits: torch.Tensor


def dense_oracle_forward(
    g: Graph, features: torch.Tensor, weights: List[torch.Tensor]
) -> OracleForward:
    a_hat = dense_normalized_adjacency(g, features.dtype)
    hidden = [features]
    gathered, pre_activations = [], []
    for layer, weight in enumerate(weights):
        agg = a_hat @ hidden[-1]
        pre = agg @ weight
        gathered.append(agg)
        pre_activations.append(pre)
        if layer < len(weights) - 1:
            hidden.append(relu(pre))
    return OracleForward(gathered, pre_activations, hidden, pre_activations[-1])


def dense_oracle_backward(
    g: Graph,
    forward: OracleForward,
    weights: List[torch.Tensor],
    labels_onehot: torch.Tensor,
    mask: torch.Tensor,
    normalizer: Optional[int] = None,
) -> Tuple[float, List[torch.Tensor]]:
    """Loss and the per-layer weight gradients of the masked softmax cross-entropy."""
    a_hat = dense_normalized_adjacency(g, forward.logits.dtype)
    loss, delta = softmax_cross_entropy(forward.logits, labels_onehot, mask, normalizer)
    grads: List[torch.Tensor] = [torch.empty(0)] * len(weights)
    for layer in range(len(weights) - 1, -1, -1):
        grads[layer] = forward.gathered[layer].t() @ delta
        if layer > 0:
            d_hidden = a_hat.t() @ (delta @ weights[layer].t())
            delta = relu_backward(forward.pre_activations[layer - 1], d_hidden)
    return loss, grads
