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

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple


@enum.unique
class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@enum.unique
class TaskKind(enum.Enum):
    GA = "GA"
    AV = "AV"
    SC = "SC"
    AE = "AE"
    GRAD_AE = "dAE"
    GRAD_AV = "dAV"
    GRAD_SC = "dSC"
    GRAD_GA = "dGA"
    WU = "WU"
    FUSED_AV_GRAD_AV = "FUSED"

    @property
    def direction(self) -> Direction:
        if self in (TaskKind.GA, TaskKind.AV, TaskKind.SC, TaskKind.AE):
            return Direction.FORWARD
        return Direction.BACKWARD

    @property
    def is_tensor(self) -> bool:
        """Tensor tasks run on the serverless fleet, the rest on graph or parameter servers."""
        return self in (
            TaskKind.AV,
            TaskKind.AE,
            TaskKind.GRAD_AE,
            TaskKind.GRAD_AV,
            TaskKind.FUSED_AV_GRAD_AV,
        )

    @property
    def is_gather(self) -> bool:
        return self in (TaskKind.GA, TaskKind.GRAD_GA)


@dataclass(frozen=True)
class Task:
    kind: TaskKind
    interval: int
    layer: int
    epoch: int

    @property
    def direction(self) -> Direction:
        return self.kind.direction

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.epoch, self.layer, self.interval)

    def __str__(self) -> str:
        return f"{self.kind.value}(i={self.interval}, l={self.layer}, e={self.epoch})"


Stage = Tuple[TaskKind, int]


class StagePlan:
    """
    The per-epoch task sequence every interval walks through.

    Forward, per layer: GA, AV, SC, AE; the last layer emits logits and has no
    SC. Backward, from the last layer down: dAE, dAV, dSC, dGA, where dSC and
    dGA exist only above layer 0. Fusion replaces AV, AE, dAE and dAV of the
    last layer with one fused task.
    """

    def __init__(self, num_layers: int, fuse: bool = False, ae_stage: bool = True) -> None:
        if num_layers < 1:
            raise ValueError(f"LambdaGNN ERROR: need at least one layer, got {num_layers}")
        self.num_layers = num_layers
        self.fuse = fuse
        self.ae_stage = ae_stage
        last = num_layers - 1
        stages: List[Stage] = []
        for layer in range(num_layers):
            stages.append((TaskKind.GA, layer))
            if layer == last and fuse:
                stages.append((TaskKind.FUSED_AV_GRAD_AV, layer))
                continue
            stages.append((TaskKind.AV, layer))
            if layer != last:
                stages.append((TaskKind.SC, layer))
            if ae_stage:
                stages.append((TaskKind.AE, layer))
        for layer in range(last, -1, -1):
            if not (layer == last and fuse):
                if ae_stage:
                    stages.append((TaskKind.GRAD_AE, layer))
                stages.append((TaskKind.GRAD_AV, layer))
            if layer > 0:
                stages.append((TaskKind.GRAD_SC, layer))
                stages.append((TaskKind.GRAD_GA, layer))
        self.stages = stages

    def __len__(self) -> int:
        return len(self.stages)

    def __getitem__(self, index: int) -> Stage:
        return self.stages[index]

    def successor(self, kind: TaskKind, layer: int) -> Optional[Stage]:
        """The stage after (kind, layer) within an epoch; None at the end of the epoch."""
        index = self.stages.index((kind, layer))
        if index + 1 == len(self.stages):
            return None
        return self.stages[index + 1]

    def count(self, kind: TaskKind) -> int:
        return sum(1 for k, _ in self.stages if k == kind)
