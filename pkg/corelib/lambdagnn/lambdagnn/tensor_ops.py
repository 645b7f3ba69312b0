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

"""
Dense kernels shared by every tensor task.

A DenseMatrix is a 2-D, row-major ``torch.Tensor`` whose dtype is either
``torch.float32`` (single precision, the training default) or ``torch.float64``
(double precision, used by oracle and gradient-check paths).
"""

import math
from typing import Optional, Tuple

import torch

from .exceptions import NonFiniteError, ShapeError

SUPPORTED_DTYPES = (torch.float32, torch.float64)


def check_matrix(a: torch.Tensor, name: str = "matrix") -> None:
    if not isinstance(a, torch.Tensor):
        raise TypeError(f"LambdaGNN ERROR: {name} must be a torch.Tensor, got {type(a)}")
    if a.dim() != 2:
        raise ShapeError(
            f"LambdaGNN ERROR: {name} must be 2-D, got shape {tuple(a.shape)}"
        )
    if a.dtype not in SUPPORTED_DTYPES:
        raise TypeError(f"LambdaGNN ERROR: {name} has unsupported dtype {a.dtype}")


def check_finite(a: torch.Tensor, op: str) -> torch.Tensor:
    if not bool(torch.isfinite(a).all()):
        raise NonFiniteError(f"LambdaGNN ERROR: {op} produced NaN or Inf entries")
    return a


def _check_same_shape(a: torch.Tensor, b: torch.Tensor, op: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(
            f"LambdaGNN ERROR: {op} shape mismatch {tuple(a.shape)} vs {tuple(b.shape)}"
        )


def matmul(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    check_matrix(a, "a")
    check_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"LambdaGNN ERROR: matmul dimension mismatch {tuple(a.shape)} x {tuple(b.shape)}"
        )
    if a.dtype != b.dtype:
        raise ShapeError(
            f"LambdaGNN ERROR: matmul precision mismatch {a.dtype} vs {b.dtype}"
        )
    return check_finite(torch.mm(a, b), "matmul")


def relu(a: torch.Tensor) -> torch.Tensor:
    return torch.clamp_min(a, 0.0)


def relu_backward(pre_activation: torch.Tensor, upstream: torch.Tensor) -> torch.Tensor:
    # sigma'(0) is taken as 0
    _check_same_shape(pre_activation, upstream, "relu_backward")
    return torch.where(pre_activation > 0, upstream, torch.zeros_like(upstream))


def softmax(logits: torch.Tensor) -> torch.Tensor:
    return torch.softmax(logits, dim=1)


def softmax_cross_entropy(
    logits: torch.Tensor,
    labels_onehot: torch.Tensor,
    mask: torch.Tensor,
    normalizer: Optional[int] = None,
) -> Tuple[float, torch.Tensor]:
    """
    Masked mean softmax cross-entropy and its gradient with respect to the logits.

    Parameters
    ----------
    logits : torch.Tensor
        Raw scores, one row per vertex.
    labels_onehot : torch.Tensor
        One-hot labels with the same shape as ``logits``.
    mask : torch.Tensor
        Boolean row mask selecting the rows that contribute to the loss.
    normalizer : Optional[int]
        Divisor of the summed loss. Defaults to the number of masked rows. A
        vertex interval passes the size of the global training mask here, so the
        per-interval losses and gradients sum to the global ones.

    Returns
    -------
    (loss, grad) where grad rows are ``(softmax(logits) - Y) / normalizer`` on
    masked rows and zero elsewhere.
    """
    check_matrix(logits, "logits")
    _check_same_shape(logits, labels_onehot, "softmax_cross_entropy")
    mask = mask.to(torch.bool)
    if mask.shape != (logits.shape[0],):
        raise ShapeError(
            f"LambdaGNN ERROR: mask has shape {tuple(mask.shape)}, expected ({logits.shape[0]},)"
        )
    count = int(mask.sum())
    if normalizer is None:
        if count == 0:
            raise ValueError("LambdaGNN ERROR: softmax_cross_entropy with an empty mask")
        normalizer = count
    if normalizer <= 0:
        raise ValueError(f"LambdaGNN ERROR: normalizer must be positive, got {normalizer}")

    masked_labels = labels_onehot[mask]
    if count > 0:
        is_binary = bool(((masked_labels == 0) | (masked_labels == 1)).all())
        if not is_binary or not bool((masked_labels.sum(dim=1) == 1).all()):
            raise ValueError("LambdaGNN ERROR: masked label rows must be one-hot")

    log_probs = torch.log_softmax(logits, dim=1)
    loss = -(masked_labels * log_probs[mask]).sum() / normalizer
    grad = torch.zeros_like(logits)
    grad[mask] = (torch.exp(log_probs[mask]) - masked_labels) / normalizer
    return float(loss), check_finite(grad, "softmax_cross_entropy")


def _check_init_dims(rows: int, cols: int) -> None:
    if rows < 1 or cols < 1:
        raise ValueError(
            f"LambdaGNN ERROR: weight dimensions must be >= 1, got ({rows}, {cols})"
        )


def xavier_init(
    rows: int, cols: int, seed: int, dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    """Glorot uniform on [-b, b], b = sqrt(6 / (rows + cols))."""
    _check_init_dims(rows, cols)
    bound = math.sqrt(6.0 / (rows + cols))
    generator = torch.Generator().manual_seed(seed)
    return torch.empty(rows, cols, dtype=dtype).uniform_(
        -bound, bound, generator=generator
    )


def he_init(
    rows: int, cols: int, seed: int, dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    """He normal, std = sqrt(2 / rows)."""
    _check_init_dims(rows, cols)
    std = math.sqrt(2.0 / rows)
    generator = torch.Generator().manual_seed(seed)
    return torch.empty(rows, cols, dtype=dtype).normal_(0.0, std, generator=generator)


def accuracy(logits: torch.Tensor, labels: torch.Tensor, mask: torch.Tensor) -> float:
    mask = mask.to(torch.bool)
    count = int(mask.sum())
    if count == 0:
        return 0.0
    predicted = logits[mask].argmax(dim=1)
    return float((predicted == labels[mask]).sum()) / count
