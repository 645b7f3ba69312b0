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

from typing import Dict, List, Optional, Tuple

import torch

from ..partition import Partition
from .staleness import check_gather_admissible


class ValueHistory:
    """
    Scattered rows of one (direction, layer), kept per partition and per epoch
    in that partition's slot space (owned rows first, then ghosts). Rows are
    written once per (vertex, epoch) and never modified afterwards.
    """

    def __init__(
        self, partitions: List[Partition], forward: bool, width: int, dtype: torch.dtype
    ) -> None:
        self.forward = forward
        self.width = width
        self.dtype = dtype
        self._num_slots = [p.num_slots(forward) for p in partitions]
        self._tables: List[Dict[int, Tuple[torch.Tensor, torch.Tensor]]] = [
            {} for _ in partitions
        ]

    def _table(self, pid: int, epoch: int) -> Tuple[torch.Tensor, torch.Tensor]:
        tables = self._tables[pid]
        if epoch not in tables:
            tables[epoch] = (
                torch.zeros(self._num_slots[pid], self.width, dtype=self.dtype),
                torch.zeros(self._num_slots[pid], dtype=torch.bool),
            )
        return tables[epoch]

    def publish(self, pid: int, slots: torch.Tensor, rows: torch.Tensor, epoch: int) -> None:
        values, present = self._table(pid, epoch)
        assert not bool(present[slots].any()), "a row was scattered twice in one epoch"
        values[slots] = rows.to(self.dtype)
        present[slots] = True

    def lookup(
        self, pid: int, slots: torch.Tensor, consumer_epoch: int, staleness: int
    ) -> Optional[Tuple[torch.Tensor, torch.Tensor]]:
        """
        For each slot, the most recent row scattered in an epoch no later than
        ``consumer_epoch``. Returns (rows, value_epochs), or None when some slot
        has no admissible row yet and the gather must wait.
        """
        rows = torch.zeros(slots.numel(), self.width, dtype=self.dtype)
        epochs = torch.full((slots.numel(),), -1, dtype=torch.int64)
        tables = self._tables[pid]
        for epoch in sorted((e for e in tables if e <= consumer_epoch), reverse=True):
            if not check_gather_admissible(consumer_epoch, epoch, staleness):
                break
            values, present = tables[epoch]
            take = (epochs < 0) & present[slots]
            if bool(take.any()):
                rows[take] = values[slots[take]]
                epochs[take] = epoch
            if bool((epochs >= 0).all()):
                break
        if bool((epochs < 0).any()):
            return None
        return rows, epochs

    def prune(self, min_epoch: int) -> None:
        for tables in self._tables:
            for epoch in [e for e in tables if e < min_epoch]:
                del tables[epoch]

    def epochs_held(self, pid: int) -> List[int]:
        return sorted(self._tables[pid])
