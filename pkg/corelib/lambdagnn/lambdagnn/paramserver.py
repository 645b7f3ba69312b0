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
Replicated parameter servers.

Every replica holds all layers' weights. An interval-epoch reads its weights
from the first replica it contacts, which stashes that version until the
interval's last backward task has pushed its gradient. Gradients are summed
at the accumulator (replica 0), which runs the optimizer and broadcasts the
new version to the other replicas.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Set, Tuple

import torch

from .exceptions import DuplicateContributionError, ShapeError, StashError
from .optimizer import BaseLayerOptimizer

logger = logging.getLogger(__name__)

ACCUMULATOR_PS = 0


@dataclass
class VersionedWeights:
    weights: List[torch.Tensor]
    version: int

    def snapshot(self) -> "VersionedWeights":
        # weights are replaced on update, never written in place
        return VersionedWeights(list(self.weights), self.version)


class StashStore:
    def __init__(self) -> None:
        self._entries: Dict[Tuple[int, int], VersionedWeights] = {}

    def put(self, interval: int, epoch: int, weights: VersionedWeights) -> None:
        assert (interval, epoch) not in self._entries, "stash entry created twice"
        self._entries[(interval, epoch)] = weights

    def get(self, interval: int, epoch: int) -> VersionedWeights:
        if (interval, epoch) not in self._entries:
            raise StashError(
                f"LambdaGNN ERROR: weight stash for interval {interval}, epoch {epoch} is gone"
            )
        return self._entries[(interval, epoch)]

    def evict(self, interval: int, epoch: int) -> None:
        self._entries.pop((interval, epoch), None)

    def __contains__(self, key: Tuple[int, int]) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def versions(self) -> Set[int]:
        return {entry.version for entry in self._entries.values()}


class LoadTracker:
    """Outstanding stash assignments per parameter server."""

    def __init__(self, num_servers: int) -> None:
        self.loads = [0] * num_servers

    def acquire(self, ps: int) -> None:
        self.loads[ps] += 1

    def release(self, ps: int) -> None:
        assert self.loads[ps] > 0, f"load of PS {ps} would become negative"
        self.loads[ps] -= 1


def pick_ps(loads: Sequence[int]) -> int:
    """Lightest-loaded server; ties go to the lowest id."""
    if len(loads) == 0:
        raise ValueError("LambdaGNN ERROR: no parameter server to pick from")
    return min(range(len(loads)), key=lambda ps: (loads[ps], ps))


class ParameterServer:
    def __init__(self, ps_id: int, latest: VersionedWeights) -> None:
        self.ps_id = ps_id
        self.latest = latest
        self.stash = StashStore()


class ParameterServerGroup:
    def __init__(
        self,
        initial_weights: List[torch.Tensor],
        num_servers: int,
        optimizer: BaseLayerOptimizer,
        num_intervals: int,
        staleness: int = 0,
        broadcast_every: int = 1,
    ) -> None:
        if num_servers < 1:
            raise ValueError(
                f"LambdaGNN ERROR: need at least one parameter server, got {num_servers}"
            )
        if broadcast_every < 1:
            raise ValueError(
                f"LambdaGNN ERROR: broadcast_every must be >= 1, got {broadcast_every}"
            )
        self.num_layers = len(initial_weights)
        self.num_intervals = num_intervals
        self.staleness = staleness
        self.broadcast_every = broadcast_every
        self._optimizer = optimizer
        initial = VersionedWeights(list(initial_weights), 0)
        self.servers = [ParameterServer(i, initial.snapshot()) for i in range(num_servers)]
        self.load = LoadTracker(num_servers)
        self._assignment: Dict[Tuple[int, int], int] = {}
        self._pending: Dict[Tuple[int, int], torch.Tensor] = {}
        self._arrived: Dict[Tuple[int, int], Set[int]] = {}
        self._tags: Dict[int, Set[Tuple[int, int]]] = {}
        self._newest_epoch = 0
        self._updates_since_broadcast = 0
        self.applied_gradients: Dict[Tuple[int, int], torch.Tensor] = {}
        self.max_stash_residency = 0
        self.max_live_versions = 0

    @property
    def accumulator(self) -> ParameterServer:
        return self.servers[ACCUMULATOR_PS]

    def latest_version(self, ps: int = ACCUMULATOR_PS) -> int:
        return self.servers[ps].latest.version

    def assigned_ps(self, interval: int, epoch: int) -> int:
        return self._assignment[(interval, epoch)]

    def fetch_weights(self, interval: int, epoch: int, layer: int) -> Tuple[torch.Tensor, int]:
        """
        First call of an (interval, epoch) snapshots the latest weights on the
        lightest replica; every later call returns that same snapshot.
        """
        key = (interval, epoch)
        if key in self._assignment:
            stashed = self.servers[self._assignment[key]].stash.get(interval, epoch)
            return stashed.weights[layer], stashed.version
        ps = pick_ps(self.load.loads)
        server = self.servers[ps]
        stashed = server.latest.snapshot()
        server.stash.put(interval, epoch, stashed)
        self.load.acquire(ps)
        self._assignment[key] = ps
        self.max_stash_residency = max(self.max_stash_residency, len(server.stash))
        self.max_live_versions = max(self.max_live_versions, len(self.live_versions()))
        assert len(server.stash) <= self.num_intervals * (self.staleness + 1), (
            f"PS {ps} holds {len(server.stash)} stashes, more than the staleness bound allows"
        )
        return stashed.weights[layer], stashed.version

    def _check_tag(self, interval: int, epoch: int, layer: int) -> None:
        if epoch < self._newest_epoch - self.staleness:
            raise DuplicateContributionError(
                f"LambdaGNN ERROR: contribution for retired epoch {epoch} (interval {interval}, layer {layer})"
            )
        tags = self._tags.setdefault(epoch, set())
        if (interval, layer) in tags:
            raise DuplicateContributionError(
                f"LambdaGNN ERROR: duplicate contribution (interval {interval}, epoch {epoch}, layer {layer})"
            )
        tags.add((interval, layer))
        if epoch > self._newest_epoch:
            self._newest_epoch = epoch
            for old in [e for e in self._tags if e < epoch - self.staleness]:
                del self._tags[old]
            for old in [k for k in self._assignment if k[1] < epoch - self.staleness]:
                del self._assignment[old]

    def accumulate(self, interval: int, epoch: int, layer: int, grad: torch.Tensor) -> bool:
        """
        Add one interval's gradient for (epoch, layer) at the accumulator. Returns
        True once every interval has contributed, i.e. the update can be applied.
        """
        self._check_tag(interval, epoch, layer)
        weight = self.accumulator.latest.weights[layer]
        if grad.shape != weight.shape:
            raise ShapeError(
                f"LambdaGNN ERROR: gradient shape {tuple(grad.shape)} does not match layer {layer} "
                f"weights {tuple(weight.shape)}"
            )
        key = (epoch, layer)
        if key in self._pending:
            self._pending[key] = self._pending[key] + grad
        else:
            self._pending[key] = grad.clone()
        self._arrived.setdefault(key, set()).add(interval)
        if layer == 0:
            self.release_stash(interval, epoch)
        return len(self._arrived[key]) == self.num_intervals

    def release_stash(self, interval: int, epoch: int) -> None:
        ps = self._assignment.get((interval, epoch))
        if ps is not None and (interval, epoch) in self.servers[ps].stash:
            self.servers[ps].stash.evict(interval, epoch)
            self.load.release(ps)

    def apply_update(self, epoch: int, layer: int) -> int:
        """One optimizer step on the summed gradient of (epoch, layer); returns the new version."""
        key = (epoch, layer)
        arrived = self._arrived.get(key, set())
        assert len(arrived) == self.num_intervals, (
            f"update of {key} applied with {len(arrived)}/{self.num_intervals} contributions"
        )
        grad = self._pending.pop(key)
        del self._arrived[key]
        self.applied_gradients[key] = grad
        acc = self.accumulator.latest
        weights = list(acc.weights)
        weights[layer] = self._optimizer.update(layer, weights[layer], grad)
        self.accumulator.latest = VersionedWeights(weights, acc.version + 1)
        self._updates_since_broadcast += 1
        if self._updates_since_broadcast >= self.broadcast_every:
            self.broadcast()
        return self.accumulator.latest.version

    def broadcast(self, ps: int = ACCUMULATOR_PS) -> bool:
        """Push the newest version of ``ps`` to every replica. Returns False if nothing changed."""
        source = self.servers[ps].latest
        changed = False
        for server in self.servers:
            if server.latest.version < source.version:
                server.latest = source.snapshot()
                changed = True
        self._updates_since_broadcast = 0
        if changed:
            logger.debug("broadcast weights version %d", source.version)
        return changed

    def replicas_identical(self) -> bool:
        reference = self.accumulator.latest
        for server in self.servers[1:]:
            if server.latest.version != reference.version:
                return False
            for a, b in zip(server.latest.weights, reference.weights):
                if not torch.equal(a, b):
                    return False
        return True

    def stash_counts(self) -> List[int]:
        return [len(server.stash) for server in self.servers]

    def live_versions(self) -> Set[int]:
        """Weight versions currently held in some stash."""
        return set().union(*(server.stash.versions() for server in self.servers))
