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
import os
import warnings
from dataclasses import dataclass, field
from typing import Optional

import torch

from .exceptions import ConfigError
from .optimizer import OptimType
from .serverless.fleet import LambdaSpec, NetworkModel, ServerSpec

LAMBDAGNN_AUDIT_ROWS = "LAMBDAGNN_AUDIT_ROWS"


def audit_rows_forced() -> bool:
    env = os.getenv(LAMBDAGNN_AUDIT_ROWS)
    return env is not None and env == "1"


@enum.unique
class PipelineMode(enum.Enum):
    """
    Attributes
    ----------
    PIPE : str
        Synchronous training with intra-layer pipelining: layer barriers and an
        epoch barrier that includes the weight updates.
    ASYNC : str
        Bounded-asynchronous training: gathers may read neighbor values up to S
        epochs old and intervals never wait for weight updates.
    """

    PIPE = "pipe"
    ASYNC = "async"


@enum.unique
class InitScheme(enum.Enum):
    XAVIER = "xavier"
    HE = "he"


@enum.unique
class TensorBackend(enum.Enum):
    SERVERLESS = "serverless"
    SERVER = "server"


@enum.unique
class TransportKind(enum.Enum):
    INPROCESS = "inprocess"
    TCP = "tcp"


@enum.unique
class Precision(enum.Enum):
    SINGLE = "single"
    DOUBLE = "double"

    @property
    def dtype(self) -> torch.dtype:
        return torch.float32 if self == Precision.SINGLE else torch.float64


def _string_to_enum(enum_cls, value: str, what: str):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        raise ValueError(f"LambdaGNN ERROR: unknown {what} {value!r}, expected one of {choices}")


def string_to_mode(value: str) -> PipelineMode:
    return _string_to_enum(PipelineMode, value, "mode")


def string_to_backend(value: str) -> TensorBackend:
    return _string_to_enum(TensorBackend, value, "tensor backend")


def string_to_transport(value: str) -> TransportKind:
    return _string_to_enum(TransportKind, value, "transport")


def string_to_init_scheme(value: str) -> InitScheme:
    return _string_to_enum(InitScheme, value, "init scheme")


def string_to_precision(value: str) -> Precision:
    return _string_to_enum(Precision, value, "precision")


@dataclass
class RunConfig:
    """
    Everything a training run depends on.

    Parameters
    ----------
    dataset : Optional[str]
        Directory holding graph.bsnap, features.bsnap and labels.bsnap.
    synth : Optional[str]
        Synthetic dataset spec, ``sbm:CxN`` for C communities of N vertices.
    parts_file : Optional[str]
        Vertex-to-partition file. Vertices are dealt round-robin when absent.
    num_layers : int
        Number of GCN layers. Defaults to 2.
    hidden : int
        Width of every hidden layer. Defaults to 16.
    mode : PipelineMode
        pipe (synchronous) or async (bounded staleness).
    staleness : Optional[int]
        Staleness bound S, only meaningful in async mode. None means 0.
    initial_lambdas : Optional[int]
        Initial fleet size per graph server. None means min(#intervals, 100).
    max_lambdas : int
        Upper bound of the autotuned fleet size per graph server.
    intervals : int
        Vertex intervals per partition.
    partitions : int
        Number of graph servers. Ignored when a parts file is given.
    gs_threads : int
        Worker threads per graph server.
    param_servers : int
        Number of parameter-server replicas.
    broadcast_every : int
        Weight updates between two broadcasts. Pipe mode always broadcasts at epoch end.
    target_accuracy : Optional[float]
        Stop once training accuracy reaches this value.
    min_epochs : int
        Earliest epoch at which the validation-accuracy convergence rule may stop a run.
    fuse, remat, stream, ae_stage : bool
        Task fusion of the last layer, rematerialization instead of stashing
        pre-activations, streaming function inputs, and running the AE stage.
    tensor_backend : TensorBackend
        Run tensor tasks on the serverless fleet or on graph-server threads.
    straggler_fraction, straggler_factor : float
        Share of invocations slowed down and their compute slowdown.
    audit_rows : bool
        Keep every scattered row to check gathered rows bitwise. Also enabled by
        the environment variable LAMBDAGNN_AUDIT_ROWS=1.
    """

    dataset: Optional[str] = None
    synth: Optional[str] = None
    parts_file: Optional[str] = None
    num_layers: int = 2
    hidden: int = 16
    mode: PipelineMode = PipelineMode.PIPE
    staleness: Optional[int] = None
    initial_lambdas: Optional[int] = None
    max_lambdas: int = 100
    learning_rate: float = 0.01
    optimizer: OptimType = OptimType.ADAM
    init_scheme: InitScheme = InitScheme.XAVIER
    intervals: int = 4
    partitions: int = 1
    gs_threads: int = 4
    param_servers: int = 2
    broadcast_every: int = 1
    transport: TransportKind = TransportKind.INPROCESS
    seed: int = 0
    max_epochs: int = 100
    target_accuracy: Optional[float] = None
    min_epochs: int = 10
    fuse: bool = False
    remat: bool = False
    stream: bool = False
    ae_stage: bool = True
    tensor_backend: TensorBackend = TensorBackend.SERVERLESS
    straggler_fraction: float = 0.0
    straggler_factor: float = 1.0
    audit_rows: bool = False
    precision: Precision = Precision.SINGLE
    train_fraction: float = 0.6
    val_fraction: float = 0.2
    autotune_window: int = 10
    lambda_spec: LambdaSpec = field(default_factory=LambdaSpec)
    network: NetworkModel = field(default_factory=NetworkModel)
    server: ServerSpec = field(default_factory=ServerSpec)

    @property
    def effective_staleness(self) -> int:
        if self.mode == PipelineMode.PIPE:
            return 0
        return self.staleness or 0

    @property
    def dtype(self) -> torch.dtype:
        return self.precision.dtype


def validate_run_config(config: RunConfig) -> RunConfig:
    """Reject inconsistent settings and fill inferred defaults in place."""
    if config.dataset is not None and config.synth is not None:
        raise ConfigError("LambdaGNN ERROR: give either a dataset or a synthetic spec, not both")
    if config.mode == PipelineMode.PIPE and config.staleness is not None:
        raise ConfigError("LambdaGNN ERROR: staleness is only valid in async mode")
    if config.staleness is not None and config.staleness < 0:
        raise ConfigError(f"LambdaGNN ERROR: staleness must be >= 0, got {config.staleness}")
    if config.mode == PipelineMode.ASYNC and config.staleness is None:
        config.staleness = 0
    for name in (
        "num_layers",
        "hidden",
        "max_lambdas",
        "intervals",
        "partitions",
        "gs_threads",
        "param_servers",
        "broadcast_every",
        "max_epochs",
        "autotune_window",
    ):
        if getattr(config, name) < 1:
            raise ConfigError(f"LambdaGNN ERROR: {name} must be >= 1, got {getattr(config, name)}")
    if config.learning_rate <= 0:
        raise ConfigError(f"LambdaGNN ERROR: learning rate must be positive, got {config.learning_rate}")
    if config.initial_lambdas is not None:
        if not 1 <= config.initial_lambdas <= config.max_lambdas:
            raise ConfigError(
                f"LambdaGNN ERROR: initial lambdas {config.initial_lambdas} outside [1, {config.max_lambdas}]"
            )
        if config.initial_lambdas > config.intervals:
            warnings.warn(
                f"{config.initial_lambdas} lambdas per server for {config.intervals} intervals; "
                "at most one function per interval can be busy",
                UserWarning,
            )
    if config.target_accuracy is not None and not 0.0 < config.target_accuracy <= 1.0:
        raise ConfigError(f"LambdaGNN ERROR: target accuracy must be in (0, 1], got {config.target_accuracy}")
    if not 0.0 < config.train_fraction <= 1.0 or config.val_fraction < 0.0:
        raise ConfigError("LambdaGNN ERROR: invalid train/validation split")
    if config.train_fraction + config.val_fraction > 1.0 + 1e-9:
        raise ConfigError("LambdaGNN ERROR: train and validation fractions exceed 1")
    if not 0.0 <= config.straggler_fraction <= 1.0 or config.straggler_factor < 1.0:
        raise ConfigError("LambdaGNN ERROR: stragglers need fraction in [0, 1] and factor >= 1")
    if config.transport == TransportKind.TCP and config.precision != Precision.SINGLE:
        raise ConfigError("LambdaGNN ERROR: the tcp transport carries single precision only")
    if audit_rows_forced():
        config.audit_rows = True
    return config
