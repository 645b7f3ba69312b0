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

"""Price tables, usage accounting and the value metric ``1 / (T * C)``."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Union

from .serverless.fleet import Invocation

Number = Union[int, float, Fraction]


def _default_server_rates() -> Dict[str, Fraction]:
    return {"c5.base": Fraction("0.085"), "p3.2xlarge": Fraction("3.06")}


@dataclass(frozen=True)
class PriceTable:
    """
    USD rates. Kept as exact fractions; convert with ``float`` at the edge.

    Attributes
    ----------
    lambda_per_million_requests : Fraction
        Price of one million invocations.
    lambda_compute_per_hour : Fraction
        Price of one hour of function compute, billed per 100 ms.
    server_rates : Dict[str, Fraction]
        Hourly price per server instance type.
    """

    lambda_per_million_requests: Fraction = Fraction("0.20")
    lambda_compute_per_hour: Fraction = Fraction("0.01125")
    server_rates: Dict[str, Fraction] = field(default_factory=_default_server_rates)

    def __post_init__(self):
        rates = [self.lambda_per_million_requests, self.lambda_compute_per_hour]
        rates += list(self.server_rates.values())
        if any(rate <= 0 for rate in rates):
            raise ValueError("LambdaGNN ERROR: all prices must be positive")

    def server_rate(self, instance: str) -> Fraction:
        if instance not in self.server_rates:
            raise ValueError(f"LambdaGNN ERROR: no price for instance type {instance!r}")
        return self.server_rates[instance]


class UsageLedger:
    """Append-only usage record; only totals and appended records are exposed."""

    def __init__(self) -> None:
        self._invocations: List[Invocation] = []
        self._request_count = 0
        self._billed_ms = 0
        self._actual_us = 0
        self._server_seconds: Dict[str, int] = {}

    def record(self, invocation: Invocation) -> None:
        self._invocations.append(invocation)
        self.record_requests(1, invocation.billed_ms, invocation.duration_us)

    def record_requests(self, count: int, billed_ms: int, actual_us: int = 0) -> None:
        if count < 0 or billed_ms < 0 or actual_us < 0:
            raise ValueError("LambdaGNN ERROR: ledger entries must be non-negative")
        self._request_count += count
        self._billed_ms += billed_ms
        self._actual_us += actual_us

    def record_server(self, instance: str, seconds: float, count: int = 1) -> None:
        """Bill ``count`` servers for ``seconds`` each, rounded up to whole seconds."""
        if seconds < 0 or count < 0:
            raise ValueError("LambdaGNN ERROR: server usage must be non-negative")
        billed = int(math.ceil(round(seconds, 6))) * count
        self._server_seconds[instance] = self._server_seconds.get(instance, 0) + billed

    @property
    def invocations(self) -> List[Invocation]:
        return list(self._invocations)

    @property
    def request_count(self) -> int:
        return self._request_count

    @property
    def billed_ms(self) -> int:
        return self._billed_ms

    @property
    def actual_us(self) -> int:
        return self._actual_us

    @property
    def server_seconds(self) -> Dict[str, int]:
        return dict(self._server_seconds)


def lambda_cost(ledger: UsageLedger, prices: PriceTable = PriceTable()) -> Fraction:
    requests = Fraction(ledger.request_count, 1_000_000) * prices.lambda_per_million_requests
    compute = Fraction(ledger.billed_ms, 3_600_000) * prices.lambda_compute_per_hour
    return requests + compute


def server_cost(ledger: UsageLedger, prices: PriceTable = PriceTable()) -> Fraction:
    total = Fraction(0)
    for instance, seconds in sorted(ledger.server_seconds.items()):
        total += Fraction(seconds, 3600) * prices.server_rate(instance)
    return total


def total_cost(ledger: UsageLedger, prices: PriceTable = PriceTable()) -> Fraction:
    return lambda_cost(ledger, prices) + server_cost(ledger, prices)


def value(time_s: Number, cost_usd: Number) -> float:
    """Performance per dollar, in 1 / (s * USD)."""
    if time_s <= 0 or cost_usd <= 0:
        raise ValueError(
            f"LambdaGNN ERROR: value needs positive time and cost, got T={time_s}, C={cost_usd}"
        )
    return float(1 / (Fraction(time_s) * Fraction(cost_usd)))


def value_ratio(time_a: Number, cost_a: Number, time_b: Number, cost_b: Number) -> float:
    """How many times more value configuration a delivers than configuration b."""
    return value(time_a, cost_a) / value(time_b, cost_b)
