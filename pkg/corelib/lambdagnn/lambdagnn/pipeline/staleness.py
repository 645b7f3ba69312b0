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

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

import torch

from ..exceptions import StalenessViolation
from .tasks import Direction, Task


def check_gather_admissible(consumer_epoch: int, value_epoch: int, staleness: int) -> bool:
    """A gather in epoch e may read a value scattered in epoch e - k for 0 <= k <= S."""
    if consumer_epoch < 0 or value_epoch < 0:
        raise ValueError("LambdaGNN ERROR: epochs must be non-negative")
    return consumer_epoch - value_epoch <= staleness


@dataclass(frozen=True)
class GatherRecord:
    task: str
    interval: int
    layer: int
    epoch: int
    min_value_epoch: int
    max_value_epoch: int
    rows: int


class StalenessAudit:
    """
    Audit trail of every gather that read scattered values, of the weight
    version each interval-epoch used, and of the epoch gap between intervals.

    With ``record_rows`` every scattered row is kept so that each gathered row
    can be compared bitwise with the row its producer scattered.
    """

    def __init__(self, staleness: int, num_vertices: int, record_rows: bool = False) -> None:
        self.staleness = staleness
        self.num_vertices = num_vertices
        self.record_rows = record_rows
        self.records: List[GatherRecord] = []
        self.histogram: Counter = Counter()
        self.epoch_histograms: Dict[int, Counter] = {}
        self.max_epoch_gap = 0
        self.rows_checked = 0
        self._scattered: Dict[Tuple[Direction, int, int], Tuple[torch.Tensor, torch.Tensor]] = {}
        self._versions: Dict[Tuple[int, int], Dict[Tuple[Direction, int], int]] = {}

    def record_gather(self, task: Task, value_epochs: torch.Tensor) -> None:
        if value_epochs.numel() == 0:
            return
        lag = task.epoch - value_epochs
        lo, hi = int(lag.min()), int(lag.max())
        if lo < 0 or not check_gather_admissible(task.epoch, task.epoch - hi, self.staleness):
            raise StalenessViolation(
                f"LambdaGNN ERROR: {task} read values {lo}..{hi} epochs old, bound is {self.staleness}"
            )
        counts = Counter({int(k): int(v) for k, v in zip(*torch.unique(lag, return_counts=True))})
        self.histogram.update(counts)
        self.epoch_histograms.setdefault(task.epoch, Counter()).update(counts)
        self.records.append(
            GatherRecord(
                task=task.kind.value,
                interval=task.interval,
                layer=task.layer,
                epoch=task.epoch,
                min_value_epoch=int(value_epochs.min()),
                max_value_epoch=int(value_epochs.max()),
                rows=int(value_epochs.numel()),
            )
        )

    def record_scatter(
        self, direction: Direction, layer: int, epoch: int, vertices: torch.Tensor, rows: torch.Tensor
    ) -> None:
        if not self.record_rows:
            return
        key = (direction, layer, epoch)
        if key not in self._scattered:
            table = torch.zeros(self.num_vertices, rows.shape[1], dtype=rows.dtype)
            present = torch.zeros(self.num_vertices, dtype=torch.bool)
            self._scattered[key] = (table, present)
        table, present = self._scattered[key]
        table[vertices] = rows
        present[vertices] = True

    def check_rows(
        self,
        direction: Direction,
        layer: int,
        vertices: torch.Tensor,
        value_epochs: torch.Tensor,
        rows: torch.Tensor,
    ) -> None:
        """Every gathered row must be bitwise one of the rows its vertex scattered."""
        if not self.record_rows:
            return
        for epoch in torch.unique(value_epochs).tolist():
            pick = value_epochs == epoch
            key = (direction, layer, int(epoch))
            if key not in self._scattered:
                raise StalenessViolation(
                    f"LambdaGNN ERROR: gathered rows claim epoch {epoch} of layer {layer}, never scattered"
                )
            table, present = self._scattered[key]
            ids = vertices[pick]
            if not bool(present[ids].all()) or not torch.equal(table[ids], rows[pick]):
                raise StalenessViolation(
                    f"LambdaGNN ERROR: gathered rows of layer {layer} differ from the rows scattered in epoch {epoch}"
                )
            self.rows_checked += int(pick.sum())

    def record_version(
        self, interval: int, epoch: int, direction: Direction, layer: int, version: int
    ) -> None:
        self._versions.setdefault((interval, epoch), {})[(direction, layer)] = version

    def version_mismatches(self) -> List[Tuple[int, int]]:
        """Interval-epochs whose tasks did not all use a single weight version."""
        return sorted(
            key for key, used in self._versions.items() if len(set(used.values())) > 1
        )

    def versions_by_epoch(self) -> Dict[int, Set[int]]:
        """Weight versions used by the intervals of each epoch."""
        by_epoch: Dict[int, Set[int]] = {}
        for (_, epoch), used in self._versions.items():
            by_epoch.setdefault(epoch, set()).update(used.values())
        return by_epoch

    def interval_epochs_audited(self) -> int:
        return len(self._versions)

    def observe_gap(self, gap: int) -> None:
        self.max_epoch_gap = max(self.max_epoch_gap, gap)

    def prune(self, min_epoch: int) -> None:
        for key in [k for k in self._scattered if k[2] < min_epoch]:
            del self._scattered[key]

    def histogram_for(self, epoch: Optional[int] = None) -> Dict[str, int]:
        counts = self.histogram if epoch is None else self.epoch_histograms.get(epoch, Counter())
        return {str(k): counts[k] for k in sorted(counts)}
