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

import abc
import copy
import enum
from dataclasses import dataclass
from typing import List, Optional

import torch

from .exceptions import ShapeError
from .tensor_ops import check_finite


@dataclass
class OptimizerArgs:
    learning_rate: float = 0.01
    eps: float = 1.0e-8
    beta1: float = 0.9
    beta2: float = 0.999


@enum.unique
class OptimType(enum.Enum):
    SGD = "sgd"
    ADAM = "adam"

    def __str__(self) -> str:
        return self.value


def string_to_opt_type(optimizer_str: str) -> OptimType:
    try:
        return OptimType(optimizer_str)
    except ValueError:
        raise ValueError(f"'{optimizer_str}' is not a valid OptimType.")


@dataclass
class OptimizerState:
    """
    Mutable optimizer state of one weight matrix.

    Attributes
    ----------
    kind : OptimType
        Vanilla SGD or Adam.
    learning_rate : float
        Step size.
    adam_m, adam_v : Optional[torch.Tensor]
        First and second moment estimates, shaped like the tracked parameter.
        Allocated lazily on the first Adam step.
    step_count : int
        Number of updates applied so far.
    """

    kind: OptimType = OptimType.SGD
    learning_rate: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1.0e-8
    adam_m: Optional[torch.Tensor] = None
    adam_v: Optional[torch.Tensor] = None
    step_count: int = 0

    @classmethod
    def from_args(cls, kind: OptimType, opt_args: OptimizerArgs) -> "OptimizerState":
        return cls(
            kind=kind,
            learning_rate=opt_args.learning_rate,
            adam_beta1=opt_args.beta1,
            adam_beta2=opt_args.beta2,
            adam_eps=opt_args.eps,
        )


def optimizer_step(
    state: OptimizerState, params: torch.Tensor, grads: torch.Tensor
) -> torch.Tensor:
    """Return the updated parameters; ``state`` is advanced in place."""
    if params.shape != grads.shape:
        raise ShapeError(
            f"LambdaGNN ERROR: optimizer_step shape mismatch {tuple(params.shape)} vs {tuple(grads.shape)}"
        )
    lr = state.learning_rate
    if state.kind == OptimType.SGD:
        updated = params - lr * grads
    elif state.kind == OptimType.ADAM:
        if state.adam_m is None or state.adam_v is None:
            state.adam_m = torch.zeros_like(params)
            state.adam_v = torch.zeros_like(params)
        assert (
            state.adam_m.shape == params.shape and state.adam_v.shape == params.shape
        ), "Adam moments do not match the tracked parameter"
        beta1, beta2 = state.adam_beta1, state.adam_beta2
        t = state.step_count + 1
        state.adam_m = beta1 * state.adam_m + (1 - beta1) * grads
        state.adam_v = beta2 * state.adam_v + (1 - beta2) * grads.pow(2)
        m_hat = state.adam_m / (1 - beta1**t)
        v_hat = state.adam_v / (1 - beta2**t)
        updated = params - lr * m_hat / (torch.sqrt(v_hat) + state.adam_eps)
    else:
        raise ValueError(f"LambdaGNN ERROR: unsupported optimizer {state.kind}")
    state.step_count += 1
    return check_finite(updated, "optimizer_step")


class BaseLayerOptimizer(abc.ABC):
    """
    Optimizer over the per-layer weight matrices held by the accumulator
    parameter server. One OptimizerState is kept per layer.
    """

    def __init__(self, opt_args: OptimizerArgs, num_layers: int) -> None:
        self._opt_args: OptimizerArgs = copy.deepcopy(opt_args)
        self._num_layers: int = num_layers
        self._states: List[OptimizerState] = [
            OptimizerState.from_args(self.opt_type(), self._opt_args)
            for _ in range(num_layers)
        ]

    @staticmethod
    @abc.abstractmethod
    def opt_type() -> OptimType:
        ...

    def state(self, layer: int) -> OptimizerState:
        return self._states[layer]

    def update(self, layer: int, params: torch.Tensor, grads: torch.Tensor) -> torch.Tensor:
        if not 0 <= layer < self._num_layers:
            raise ValueError(
                f"LambdaGNN ERROR: layer {layer} not tracked by {self.__class__.__name__}."
            )
        return optimizer_step(self._states[layer], params, grads)


class SGDLayerOptimizer(BaseLayerOptimizer):
    @staticmethod
    def opt_type() -> OptimType:
        return OptimType.SGD


class AdamLayerOptimizer(BaseLayerOptimizer):
    @staticmethod
    def opt_type() -> OptimType:
        return OptimType.ADAM


def create_layer_optimizer(
    opt_type: OptimType, opt_args: OptimizerArgs, num_layers: int
) -> BaseLayerOptimizer:
    if opt_type == OptimType.SGD:
        return SGDLayerOptimizer(opt_args, num_layers)
    elif opt_type == OptimType.ADAM:
        return AdamLayerOptimizer(opt_args, num_layers)
    else:
        raise ValueError(f"Not supported optimizer type ,optimizer type = {opt_type}.")
