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

import pytest
from conftest import path_dataset, random_dataset
from lambdagnn.dataset import Dataset
from lambdagnn.lambdagnn_config import PipelineMode, RunConfig, TensorBackend
from lambdagnn.pipeline import Engine, epochs_to_accuracy, run_epochs
from lambdagnn.serverless.fleet import LambdaSpec
from lambdagnn.synthetic import synth_sbm

TARGET = 0.9


@pytest.fixture(scope="module")
def sbm() -> Dataset:
    graph, features, labels = synth_sbm(4, 100, 0.1, 0.005, seed=0)
    return Dataset(graph, features, labels, 4)


def _epochs_to_target(dataset, **kwargs):
    cfg = RunConfig(
        partitions=2,
        intervals=4,
        max_epochs=200,
        target_accuracy=TARGET,
        learning_rate=0.02,
        **kwargs,
    )
    return epochs_to_accuracy(run_epochs(cfg, dataset), TARGET)


def test_bounded_staleness_converges_close_to_synchronous(sbm):
    pipe = _epochs_to_target(sbm, mode=PipelineMode.PIPE)
    assert pipe is not None, "synchronous training never reached the target"
    s0 = _epochs_to_target(sbm, mode=PipelineMode.ASYNC, staleness=0)
    s1 = _epochs_to_target(sbm, mode=PipelineMode.ASYNC, staleness=1)
    assert s0 is not None and s0 <= 2 * pipe
    assert s1 is not None and s1 <= 3 * pipe


def test_asynchrony_hides_stragglers():
    ds = path_dataset(400)
    common = dict(
        partitions=1,
        intervals=8,
        initial_lambdas=8,
        max_lambdas=8,
        max_epochs=30,
        min_epochs=30,
        lambda_spec=LambdaSpec(core_gflops=0.01),
        straggler_fraction=0.1,
        straggler_factor=5.0,
    )
    pipe = run_epochs(RunConfig(mode=PipelineMode.PIPE, **common), ds)
    s0 = run_epochs(RunConfig(mode=PipelineMode.ASYNC, staleness=0, **common), ds)
    assert len(pipe.epochs) == len(s0.epochs) == 30
    assert s0.summary.virtual_time < pipe.summary.virtual_time


def test_autotuned_fleet_stays_in_bounds():
    ds = random_dataset(80, 0.06, 12)
    engine = Engine(
        RunConfig(intervals=4, max_lambdas=6, max_epochs=200, min_epochs=200), ds
    )
    report = engine.run()
    fleet = engine.fleets[0]
    assert fleet.trajectory[0] == 4
    assert all(1 <= size <= 6 for size in fleet.trajectory)
    assert len(fleet.samples) == 4 * len(report.epochs)
    assert all(1 <= record.lambdas <= 6 for record in report.epochs)
    window = fleet.window
    settled = list(fleet.samples)[window:]
    for start in range(len(settled) - window + 1):
        recent = settled[start : start + window]
        assert not all(a < b for a, b in zip(recent, recent[1:])), f"queue grew over samples {start}..{start + window}"


def test_costs_by_backend():
    ds = random_dataset(60, 0.08, 1)
    common = dict(intervals=3, max_epochs=5, min_epochs=5)
    serverless = run_epochs(RunConfig(**common), ds).summary
    server = run_epochs(RunConfig(tensor_backend=TensorBackend.SERVER, **common), ds).summary
    assert serverless.lambda_cost > 0 and serverless.server_cost > 0
    assert server.lambda_cost == 0 and server.server_cost > 0
    assert serverless.value is not None and server.value is not None
