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
Readiness of interval tasks.

Each interval walks the StagePlan once per epoch. A task is runnable when its
interval is idle, its barrier (pipe mode) or epoch gate (async mode) is open,
and, for gathers above the input layer, every row it reads has an admissible
scattered value.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import torch

from ..kernels import required_slots
from ..lambdagnn_config import PipelineMode
from ..partition import Partition, VertexInterval
from .history import ValueHistory
from .tasks import StagePlan, Task, TaskKind

GatherInputs = Tuple[torch.Tensor, torch.Tensor, torch.Tensor]


@dataclass
class IntervalProgress:
    interval: VertexInterval
    epoch: int = 0
    stage: int = 0
    completed: int = 0
    started_epoch: int = -1
    running: bool = False
    carry: Optional[torch.Tensor] = None


class Scheduler:
    def __init__(
        self,
        plan: StagePlan,
        progress: Sequence[IntervalProgress],
        partitions: Sequence[Partition],
        mode: PipelineMode,
        staleness: int,
        max_epochs: int,
        forward_history: Dict[int, ValueHistory],
        backward_history: Dict[int, ValueHistory],
    ) -> None:
        self.plan = plan
        self.progress = list(progress)
        assert all(
            prog.interval.interval_id == i for i, prog in enumerate(self.progress)
        ), "interval ids must be dense and ordered"
        self.partitions = list(partitions)
        self.mode = mode
        self.staleness = staleness
        self.max_epochs = max_epochs
        self.forward_history = forward_history
        self.backward_history = backward_history
        self.closed_epochs: Set[int] = set()
        self.stopped = False
        self._done: Counter = Counter()
        self._admitted: Dict[Task, GatherInputs] = {}
        self._slots = {
            (prog.interval.interval_id, forward): required_slots(
                self.partitions[prog.interval.partition_id], prog.interval, forward
            )
            for prog in self.progress
            for forward in (True, False)
        }

    @property
    def num_intervals(self) -> int:
        return len(self.progress)

    def pending(self, prog: IntervalProgress) -> Optional[Task]:
        if self.stopped or prog.epoch >= self.max_epochs:
            return None
        kind, layer = self.plan[prog.stage]
        return Task(kind, prog.interval.interval_id, layer, prog.epoch)

    def min_completed(self) -> int:
        return min(prog.completed for prog in self.progress)

    def epoch_gap(self) -> int:
        """Newest epoch any interval started minus the oldest epoch not yet completed by all."""
        started = max(prog.started_epoch for prog in self.progress)
        if started < 0:
            return 0
        return started - self.min_completed()

    def stage_done(self, kind: TaskKind, layer: int, epoch: int) -> int:
        return self._done[(kind, layer, epoch)]

    def _gate_open(self, task: Task) -> bool:
        if task.kind == TaskKind.GA and task.layer == 0:
            if task.epoch == 0:
                return True
            if self.mode == PipelineMode.PIPE:
                return (
                    self.min_completed() >= task.epoch
                    and (task.epoch - 1) in self.closed_epochs
                )
            return self.min_completed() >= task.epoch - self.staleness
        if self.mode == PipelineMode.PIPE:
            n = self.num_intervals
            if task.kind == TaskKind.GA:
                return self.stage_done(TaskKind.SC, task.layer - 1, task.epoch) == n
            if task.kind == TaskKind.GRAD_GA:
                return self.stage_done(TaskKind.GRAD_SC, task.layer, task.epoch) == n
        return True

    def _history_for(self, task: Task) -> Optional[ValueHistory]:
        if task.kind == TaskKind.GA and task.layer > 0:
            return self.forward_history[task.layer]
        if task.kind == TaskKind.GRAD_GA:
            return self.backward_history[task.layer]
        return None

    def _admit(self, task: Task) -> bool:
        history = self._history_for(task)
        if history is None:
            return True
        if task in self._admitted:
            return True
        prog = self.progress[task.interval]
        slots = self._slots[(task.interval, history.forward)]
        found = history.lookup(prog.interval.partition_id, slots, task.epoch, self.staleness)
        if found is None:
            return False
        self._admitted[task] = (slots, found[0], found[1])
        return True

    def next_tasks(self) -> List[Task]:
        """Every runnable task, ordered by (epoch, layer, interval)."""
        ready = []
        for prog in self.progress:
            if prog.running:
                continue
            task = self.pending(prog)
            if task is None:
                continue
            if self._gate_open(task) and self._admit(task):
                ready.append(task)
        return sorted(ready, key=lambda t: t.sort_key)

    def take_gather_inputs(self, task: Task) -> GatherInputs:
        return self._admitted.pop(task)

    def mark_started(self, task: Task) -> None:
        prog = self.progress[task.interval]
        assert not prog.running, f"interval {task.interval} already runs a task"
        prog.running = True
        if task.kind == TaskKind.GA and task.layer == 0:
            prog.started_epoch = task.epoch

    def mark_completed(self, task: Task) -> bool:
        """Advance the interval past ``task``. Returns True when it finished its epoch."""
        prog = self.progress[task.interval]
        prog.running = False
        self._done[(task.kind, task.layer, task.epoch)] += 1
        if self.plan.successor(task.kind, task.layer) is not None:
            prog.stage += 1
            return False
        prog.stage = 0
        prog.epoch += 1
        prog.completed += 1
        prog.carry = None
        for key in [k for k in self._done if k[2] < self.min_completed() - self.staleness - 1]:
            del self._done[key]
        return True

    def close_epoch(self, epoch: int) -> None:
        """All weight updates of ``epoch`` are applied and broadcast."""
        self.closed_epochs.add(epoch)

    def finished(self) -> bool:
        return self.stopped or self.min_completed() >= self.max_epochs
