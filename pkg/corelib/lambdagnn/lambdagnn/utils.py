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
from typing import Optional

import torch

logger = logging.getLogger(__name__)


def max_relative_error(actual: torch.Tensor, expected: torch.Tensor) -> float:
    """max |a - e| / max(|e|, 1), elementwise."""
    if actual.numel() == 0:
        return 0.0
    diff = (actual.double() - expected.double()).abs()
    scale = expected.double().abs().clamp(min=1.0)
    return float((diff / scale).max())


def assert_matrices_close(
    actual: torch.Tensor,
    expected: torch.Tensor,
    rel_tol: float = 1e-5,
    dtype: Optional[torch.dtype] = None,
) -> None:
    """
    Assert that two matrices agree in shape and in value up to ``rel_tol``
    relative error (absolute below magnitude one).

    Parameters
    ----------
    actual : torch.Tensor
        Matrix produced by the pipeline.
    expected : torch.Tensor
        Reference matrix.
    rel_tol : float
        Largest allowed relative error. Defaults to 1e-5.
    dtype : Optional[torch.dtype]
        Expected dtype of ``actual``. Not checked when None.
    """
    assert isinstance(actual, torch.Tensor), f"actual must be a torch.Tensor, got {type(actual)}"
    assert isinstance(expected, torch.Tensor), f"expected must be a torch.Tensor, got {type(expected)}"
    if dtype is not None:
        assert actual.dtype == dtype, f"actual dtype is {actual.dtype}, expected {dtype}"
    assert actual.shape == expected.shape, f"Shapes are different: {actual.shape} vs {expected.shape}"

    err = max_relative_error(actual, expected)
    if err > rel_tol:
        diff = (actual.double() - expected.double()).abs()
        idx = tuple(int(i) for i in torch.nonzero(diff == diff.max())[0])
        raise AssertionError(
            f"Values are different: max relative error {err:.3e} > {rel_tol:.1e} at {idx}, "
            f"actual={actual[idx].item()} expected={expected[idx].item()}"
        )
    logger.debug("matrices agree, max relative error %.3e", err)


def assert_bitwise_equal(actual: torch.Tensor, expected: torch.Tensor) -> None:
    assert actual.dtype == expected.dtype, f"dtype {actual.dtype} vs {expected.dtype}"
    assert actual.shape == expected.shape, f"Shapes are different: {actual.shape} vs {expected.shape}"
    if not torch.equal(actual, expected):
        rows = torch.nonzero((actual != expected).reshape(actual.shape[0], -1).any(dim=1)).flatten()
        raise AssertionError(f"{rows.numel()} rows differ, first {rows[:10].tolist()}")
