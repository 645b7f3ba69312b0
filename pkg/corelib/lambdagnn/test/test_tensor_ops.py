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
from lambdagnn.exceptions import NonFiniteError, ShapeError
from lambdagnn.tensor_ops import (
    accuracy,
    he_init,
    matmul,
    relu,
    relu_backward,
    softmax_cross_entropy,
    xavier_init,
)


def test_matmul_checks_shapes_and_precision():
    a = torch.ones(2, 3)
    with pytest.raises(ShapeError):
        matmul(a, torch.ones(2, 3))
    with pytest.raises(ShapeError):
        matmul(a, torch.ones(3, 2, dtype=torch.float64))
    with pytest.raises(ShapeError):
        matmul(torch.ones(3), torch.ones(3, 1))
    assert torch.equal(matmul(a, torch.ones(3, 2)), torch.full((2, 2), 3.0))


def test_matmul_rejects_non_finite_result():
    a = torch.tensor([[float("inf"), 1.0]])
    with pytest.raises(NonFiniteError):
        matmul(a, torch.tensor([[0.0], [1.0]]))


def test_relu_backward_treats_zero_as_inactive():
    pre = torch.tensor([[-1.0, 0.0, 2.0]])
    up = torch.tensor([[5.0, 5.0, 5.0]])
    assert torch.equal(relu(pre), torch.tensor([[0.0, 0.0, 2.0]]))
    assert torch.equal(relu_backward(pre, up), torch.tensor([[0.0, 0.0, 5.0]]))
    with pytest.raises(ShapeError):
        relu_backward(pre, torch.ones(1, 2))


@pytest.mark.parametrize("num_classes", [2, 3, 7])
def test_uniform_logits_give_log_c_loss(num_classes):
    logits = torch.zeros(4, num_classes, dtype=torch.float64)
    onehot = torch.zeros(4, num_classes, dtype=torch.float64)
    onehot[torch.arange(4), torch.arange(4) % num_classes] = 1.0
    mask = torch.tensor([True, True, False, True])
    loss, grad = softmax_cross_entropy(logits, onehot, mask)
    assert loss == pytest.approx(math.log(num_classes))
    assert torch.equal(grad[2], torch.zeros(num_classes, dtype=torch.float64))
    assert torch.allclose(grad.sum(dim=1), torch.zeros(4, dtype=torch.float64), atol=1e-12)


def test_cross_entropy_gradient_matches_autograd():
    generator = torch.Generator().manual_seed(3)
    logits = torch.randn(6, 4, dtype=torch.float64, generator=generator)
    labels = torch.tensor([0, 1, 2, 3, 0, 1])
    onehot = torch.nn.functional.one_hot(labels, 4).to(torch.float64)
    mask = torch.tensor([True, False, True, True, False, True])
    loss, grad = softmax_cross_entropy(logits, onehot, mask, normalizer=10)

    leaf = logits.clone().requires_grad_(True)
    ref = torch.nn.functional.cross_entropy(leaf[mask], labels[mask], reduction="sum") / 10
    ref.backward()
    assert loss == pytest.approx(float(ref))
    assert torch.allclose(grad, leaf.grad, atol=1e-12)


def test_cross_entropy_mask_edge_cases():
    logits = torch.zeros(2, 2)
    onehot = torch.eye(2)
    empty = torch.zeros(2, dtype=torch.bool)
    with pytest.raises(ValueError):
        softmax_cross_entropy(logits, onehot, empty)
    loss, grad = softmax_cross_entropy(logits, onehot, empty, normalizer=5)
    assert loss == 0.0 and not bool(grad.any())
    with pytest.raises(ValueError):
        softmax_cross_entropy(logits, torch.full((2, 2), 0.5), torch.ones(2, dtype=torch.bool))


def test_xavier_is_seeded_and_bounded():
    a = xavier_init(30, 20, seed=1)
    b = xavier_init(30, 20, seed=1)
    assert torch.equal(a, b)
    assert not torch.equal(a, xavier_init(30, 20, seed=2))
    assert float(a.abs().max()) <= math.sqrt(6.0 / 50)
    assert xavier_init(3, 4, seed=0, dtype=torch.float64).dtype == torch.float64
    with pytest.raises(ValueError):
        xavier_init(0, 4, seed=0)


def test_he_init_standard_deviation():
    w = he_init(200, 200, seed=5)
    assert float(w.std()) == pytest.approx(math.sqrt(2.0 / 200), rel=0.05)


def test_accuracy_counts_masked_rows_only():
    logits = torch.tensor([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    labels = torch.tensor([0, 0, 0])
    assert accuracy(logits, labels, torch.tensor([True, True, False])) == 0.5
    assert accuracy(logits, labels, torch.zeros(3, dtype=torch.bool)) == 0.0
