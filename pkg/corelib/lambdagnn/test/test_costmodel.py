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

from fractions import Fraction

import pytest
from lambdagnn.costmodel import (
    PriceTable,
    UsageLedger,
    lambda_cost,
    server_cost,
    total_cost,
    value,
    value_ratio,
)
from lambdagnn.serverless.fleet import Invocation, InvocationOutcome


def test_one_million_requests_cost_twenty_cents():
    ledger = UsageLedger()
    ledger.record_requests(1_000_000, billed_ms=0)
    assert lambda_cost(ledger) == Fraction("0.20")


def test_one_hour_of_function_compute():
    ledger = UsageLedger()
    ledger.record_requests(0, billed_ms=3_600_000)
    assert lambda_cost(ledger) == Fraction("0.01125")


def test_invocations_are_billed_in_100ms_steps():
    ledger = UsageLedger()
    ledger.record(Invocation("AV", 0, 0.0, 150_000, 0, 0, InvocationOutcome.OK))
    ledger.record(Invocation("AV", 0, 0.0, 1, 0, 0, InvocationOutcome.TIMEOUT_RELAUNCHED))
    assert ledger.request_count == 2
    assert ledger.billed_ms == 300
    assert ledger.actual_us == 150_001
    assert len(ledger.invocations) == 2
    expected = Fraction(2, 1_000_000) * Fraction("0.20") + Fraction(300, 3_600_000) * Fraction("0.01125")
    assert lambda_cost(ledger) == expected


def test_server_billing():
    ledger = UsageLedger()
    ledger.record_server("c5.base", 3600, count=2)
    ledger.record_server("p3.2xlarge", 0.5)
    assert ledger.server_seconds == {"c5.base": 7200, "p3.2xlarge": 1}
    expected = Fraction("0.17") + Fraction(1, 3600) * Fraction("3.06")
    assert server_cost(ledger) == expected
    assert total_cost(ledger) == expected
    with pytest.raises(ValueError):
        server_cost(_with_server("t2.micro"))


def _with_server(instance):
    ledger = UsageLedger()
    ledger.record_server(instance, 1.0)
    return ledger


def test_value_reproduces_the_gpu_comparison():
    assert value(385, 2.62) == pytest.approx(9.913e-4, rel=1e-3)
    ratio = value_ratio(385, 2.62, 1578, 3.16)
    assert ratio == pytest.approx(4.94, abs=0.01)
    assert abs(ratio - 4.93) / 4.93 < 0.01


def test_value_reproduces_the_cpu_comparison():
    ratio = value_ratio(853.4, 2.67, 2092.7, 3.01)
    assert abs(ratio - 2.75) / 2.75 < 0.01


@pytest.mark.parametrize("t, c", [(0, 1.0), (1.0, 0), (-1.0, 1.0)])
def test_value_needs_positive_inputs(t, c):
    with pytest.raises(ValueError):
        value(t, c)


def test_price_table_validation():
    with pytest.raises(ValueError):
        PriceTable(lambda_per_million_requests=Fraction(0))
    with pytest.raises(ValueError):
        PriceTable().server_rate("m1.tiny")
    assert PriceTable().server_rate("c5.base") == Fraction("0.085")


def test_ledger_rejects_negative_usage():
    ledger = UsageLedger()
    with pytest.raises(ValueError):
        ledger.record_requests(-1, 0)
    with pytest.raises(ValueError):
        ledger.record_server("c5.base", -1.0)
