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
import math
from collections import deque
from typing import Deque, List, Optional, Sequence

logger = logging.getLogger(__name__)

MAX_INITIAL_FLEET = 100
SCALE_DOWN = 0.8
SCALE_UP = 1.25
DEFAULT_WINDOW = 10
SAMPLE_LOG = 4096


def initial_fleet_size(num_intervals: int, cap: int = MAX_INITIAL_FLEET) -> int:
    return max(1, min(num_intervals, cap))


def _strictly_increasing(values: Sequence[int]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def _strictly_decreasing(values: Sequence[int]) -> bool:
    return all(a > b for a, b in zip(values, values[1:]))


def autotune_step(
    queue_history: Sequence[int], size: int, max_size: int, window: int = DEFAULT_WINDOW
) -> int:
    """
    A task queue that grows over the whole window means graph servers are the
    bottleneck, so fewer functions are needed; a shrinking queue means the
    fleet can absorb more.
    """
    if len(queue_history) < window:
        return size
    recent = list(queue_history[-window:])
    if _strictly_increasing(recent):
        return max(1, math.ceil(size * SCALE_DOWN))
    if _strictly_decreasing(recent):
        return min(max_size, math.ceil(size * SCALE_UP))
    return size


class Autotuner:
    """
    Fleet size of one graph server, resized from its sampled queue length.

    ``history`` holds at most ``window`` samples since the last resize;
    ``samples`` keeps the most recent ``sample_log`` samples for inspection.
    """

    def __init__(
        self,
        num_intervals: int,
        max_size: int,
        initial: Optional[int] = None,
        window: int = DEFAULT_WINDOW,
        sample_log: int = SAMPLE_LOG,
    ) -> None:
        if max_size < 1:
            raise ValueError(f"LambdaGNN ERROR: max fleet size must be >= 1, got {max_size}")
        if window < 1:
            raise ValueError(f"LambdaGNN ERROR: autotune window must be >= 1, got {window}")
        self.max_size = max_size
        self.window = window
        start = initial if initial is not None else initial_fleet_size(num_intervals)
        self.size = max(1, min(start, max_size))
        self.history: List[int] = []
        self.samples: Deque[int] = deque(maxlen=sample_log)
        self.trajectory: List[int] = [self.size]

    def observe(self, queue_length: int) -> int:
        self.history.append(queue_length)
        del self.history[: -self.window]
        self.samples.append(queue_length)
        new_size = autotune_step(self.history, self.size, self.max_size, self.window)
        if new_size != self.size:
            logger.info("fleet resized %d -> %d (queue %s)", self.size, new_size, self.history)
            self.size = new_size
            self.history.clear()
            self.trajectory.append(new_size)
        return self.size
