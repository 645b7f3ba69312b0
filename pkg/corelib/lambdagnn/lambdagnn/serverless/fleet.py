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
Timing model of the serverless fleet.

Durations are virtual seconds. Every invocation is quantized to whole
microseconds so that billing (100 ms granularity) is exact.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

import torch

from ..exceptions import LambdaTimeoutError

logger = logging.getLogger(__name__)

BILLING_GRANULARITY_MS = 100
TIMEOUT_WARMUP_INVOCATIONS = 20
TIMEOUT_P95_FACTOR = 5.0
MIN_TIMEOUT_SECONDS = 1.0


@dataclass(frozen=True)
class LambdaSpec:
    """
    Attributes
    ----------
    vcpu_fraction : float
        Share of one core a function instance gets.
    memory_mb : int
        Memory of one instance.
    core_gflops : float
        Calibrated single-precision rate of one reference core.
    """

    vcpu_fraction: float = 0.11
    memory_mb: int = 192
    core_gflops: float = 4.0

    @property
    def compute_rate(self) -> float:
        """FLOP/s of one instance."""
        return self.vcpu_fraction * self.core_gflops * 1e9


@dataclass(frozen=True)
class ServerSpec:
    """A graph or parameter server; one worker thread per vCPU."""

    instance: str = "c5.base"
    threads: int = 4
    core_gflops: float = 4.0
    network_mbps: float = 10000.0
    latency_s: float = 0.0002

    @property
    def compute_rate(self) -> float:
        return self.core_gflops * 1e9

    def transfer_seconds(self, num_bytes: int) -> float:
        return num_bytes * 8 / (self.network_mbps * 1e6)


@dataclass(frozen=True)
class NetworkModel:
    """Per-function bandwidth shrinks once the server's aggregate link saturates."""

    base_latency_s: float = 0.005
    peak_bw_mbps: float = 800.0
    aggregate_cap_mbps: float = 20000.0

    def bandwidth_mbps(self, concurrency: int) -> float:
        if concurrency < 1:
            raise ValueError(
                f"LambdaGNN ERROR: concurrency must be >= 1, got {concurrency}"
            )
        return min(self.peak_bw_mbps, self.aggregate_cap_mbps / concurrency)

    def transfer_seconds(self, num_bytes: int, concurrency: int) -> float:
        return num_bytes * 8 / (self.bandwidth_mbps(concurrency) * 1e6)


@enum.unique
class InvocationOutcome(enum.Enum):
    OK = "ok"
    TIMEOUT_RELAUNCHED = "timeout-relaunched"
    STRAGGLER = "straggler"


def billed_ms(duration_us: int) -> int:
    """Round a duration up to the billing granularity."""
    step_us = BILLING_GRANULARITY_MS * 1000
    return -(-duration_us // step_us) * BILLING_GRANULARITY_MS


def to_microseconds(seconds: float) -> int:
    return int(math.ceil(round(seconds * 1e6, 3)))


@dataclass(frozen=True)
class Invocation:
    task: str
    epoch: int
    start: float
    duration_us: int
    bytes_in: int
    bytes_out: int
    outcome: InvocationOutcome

    @property
    def duration(self) -> float:
        return self.duration_us / 1e6

    @property
    def end(self) -> float:
        return self.start + self.duration

    @property
    def billed_ms(self) -> int:
        return billed_ms(self.duration_us)


@dataclass
class InvocationPlan:
    """The four terms of one attempt's duration."""

    latency_s: float
    input_s: float
    compute_s: float
    output_s: float
    streaming: bool = False

    @property
    def duration(self) -> float:
        if self.streaming:
            # compute starts once the first half of the input arrived
            half = self.input_s / 2
            body = half + max(half, self.compute_s)
        else:
            body = self.input_s + self.compute_s
        return self.latency_s + body + self.output_s


def inject_straggler(plan: InvocationPlan, slowdown_factor: float) -> None:
    plan.compute_s *= slowdown_factor


class StragglerInjector:
    """Seeded choice of which invocations run slow."""

    def __init__(self, fraction: float = 0.0, factor: float = 1.0, seed: int = 0) -> None:
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(
                f"LambdaGNN ERROR: straggler fraction must be in [0, 1], got {fraction}"
            )
        if factor < 1.0:
            raise ValueError(
                f"LambdaGNN ERROR: straggler factor must be >= 1, got {factor}"
            )
        self.fraction = fraction
        self.factor = factor
        self._generator = torch.Generator().manual_seed(seed)

    def draw(self) -> float:
        if self.fraction == 0.0:
            return 1.0
        return self.factor if torch.rand(1, generator=self._generator).item() < self.fraction else 1.0


class LambdaExecutor:
    """
    Runs tensor kernels and prices their virtual duration.

    The kernel itself is executed locally and its result returned unchanged;
    the model only decides how long the invocation took and what it is billed.
    """

    def __init__(
        self,
        spec: LambdaSpec = LambdaSpec(),
        network: NetworkModel = NetworkModel(),
        stragglers: Optional[StragglerInjector] = None,
        streaming: bool = False,
        fixed_timeout_s: Optional[float] = None,
    ) -> None:
        self.spec = spec
        self.network = network
        self.stragglers = stragglers or StragglerInjector()
        self.streaming = streaming
        self.fixed_timeout_s = fixed_timeout_s
        self._durations: List[int] = []

    def timeout_s(self) -> Optional[float]:
        if self.fixed_timeout_s is not None:
            return self.fixed_timeout_s
        if len(self._durations) < TIMEOUT_WARMUP_INVOCATIONS:
            return None
        ordered = sorted(self._durations)
        p95 = ordered[int(math.ceil(0.95 * len(ordered))) - 1] / 1e6
        return max(MIN_TIMEOUT_SECONDS, TIMEOUT_P95_FACTOR * p95)

    def plan(
        self, flops: float, bytes_in: int, bytes_out: int, concurrency: int
    ) -> InvocationPlan:
        return InvocationPlan(
            latency_s=self.network.base_latency_s,
            input_s=self.network.transfer_seconds(bytes_in, concurrency),
            compute_s=flops / self.spec.compute_rate,
            output_s=self.network.transfer_seconds(bytes_out, concurrency),
            streaming=self.streaming,
        )

    def invoke(
        self,
        task: str,
        epoch: int,
        flops: float,
        bytes_in: int,
        bytes_out: int,
        concurrency: int,
        start: float,
        kernel: Optional[Callable[[], Any]] = None,
    ) -> Tuple[Any, List[Invocation]]:
        """
        Returns the kernel's result and the invocation records, two of them
        when the first attempt timed out and was relaunched.
        """
        result = kernel() if kernel is not None else None
        timeout = self.timeout_s()
        plan = self.plan(flops, bytes_in, bytes_out, concurrency)
        slowdown = self.stragglers.draw()
        inject_straggler(plan, slowdown)
        duration_us = to_microseconds(plan.duration)
        outcome = InvocationOutcome.STRAGGLER if slowdown > 1.0 else InvocationOutcome.OK

        if timeout is None or duration_us <= to_microseconds(timeout):
            self._durations.append(duration_us)
            first = Invocation(task, epoch, start, duration_us, bytes_in, bytes_out, outcome)
            return result, [first]

        timeout_us = to_microseconds(timeout)
        aborted = Invocation(
            task, epoch, start, timeout_us, bytes_in, 0, InvocationOutcome.TIMEOUT_RELAUNCHED
        )
        retry = self.plan(flops, bytes_in, bytes_out, concurrency)
        retry_us = to_microseconds(retry.duration)
        if retry_us > timeout_us:
            raise LambdaTimeoutError(
                f"LambdaGNN ERROR: {task} of epoch {epoch} timed out twice ({timeout:.3f} s limit)"
            )
        logger.info("%s of epoch %d timed out after %.3f s, relaunched", task, epoch, timeout)
        self._durations.append(retry_us)
        relaunch = Invocation(
            task, epoch, aborted.end, retry_us, bytes_in, bytes_out, InvocationOutcome.OK
        )
        return result, [aborted, relaunch]
