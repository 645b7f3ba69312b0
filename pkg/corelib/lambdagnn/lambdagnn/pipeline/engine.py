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
Deterministic discrete-event execution of the training pipeline.

Graph tasks run on graph-server worker threads, tensor tasks on the simulated
serverless fleet of the interval's graph server (or on its threads with the
server backend), weight updates on the accumulator parameter server. A task's
numerical result is computed when it starts; its effects (published rows,
pushed gradients) become visible when it completes in virtual time.
"""

import heapq
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import torch

from ..costmodel import UsageLedger, lambda_cost, server_cost, value
from ..dataset import Dataset, resolve_dataset, split_masks
from ..exceptions import ConfigError
from ..kernels import (
    ChunkKind,
    ContextStash,
    GhostMessage,
    LayerChunk,
    apply_edge,
    apply_vertex,
    backward_gather,
    gather,
    grad_apply_vertex,
    rematerialize,
    scatter,
)
from ..lambdagnn_config import (
    InitScheme,
    PipelineMode,
    RunConfig,
    TensorBackend,
    validate_run_config,
)
from ..optimizer import OptimizerArgs, create_layer_optimizer
from ..paramserver import ParameterServerGroup
from ..partition import (
    load_partition_file,
    partition_graph,
    round_robin_assignment,
    split_intervals,
)
from ..serverless.autotuner import Autotuner
from ..serverless.fleet import LambdaExecutor, StragglerInjector
from ..serverless.protocol import Message, MessageType
from ..serverless.transport import create_transport
from ..tensor_ops import he_init, softmax_cross_entropy, xavier_init
from .history import ValueHistory
from .report import EpochRecord, RunStatus, RunSummary, TrainingReport
from .scheduler import IntervalProgress, Scheduler
from .staleness import StalenessAudit
from .tasks import Direction, StagePlan, Task, TaskKind

logger = logging.getLogger(__name__)

CONVERGENCE_DELTA = 0.001
WU_FLOPS_PER_PARAM = 10

Effect = Optional[Callable[[], None]]


@dataclass
class _Cost:
    flops: float
    bytes_in: int = 0
    bytes_out: int = 0


@dataclass
class _EpochStats:
    loss: float = 0.0
    train_correct: int = 0
    val_correct: int = 0
    test_correct: int = 0
    intervals_done: int = 0
    updates_done: int = 0
    invocations: int = 0
    breakdown: Counter = field(default_factory=Counter)


@dataclass(order=True)
class _Event:
    time: float
    seq: int
    task: Task = field(compare=False)
    partition: int = field(compare=False)
    resource: str = field(compare=False)
    effect: Effect = field(compare=False, default=None)


class Engine:
    def __init__(self, config: RunConfig, dataset: Optional[Dataset] = None) -> None:
        self.config = validate_run_config(config)
        cfg = self.config
        self.dataset = dataset if dataset is not None else resolve_dataset(cfg)
        ds = self.dataset
        self.dtype = cfg.dtype
        self.staleness = cfg.effective_staleness
        n = ds.num_vertices
        self.features = ds.features.to(self.dtype)
        self.labels = ds.labels
        self.onehot = ds.onehot(self.dtype)
        self.train_mask, self.val_mask, self.test_mask = split_masks(
            n, cfg.train_fraction, cfg.val_fraction, cfg.seed
        )
        self.num_train = int(self.train_mask.sum())

        if cfg.parts_file is not None:
            assignment = load_partition_file(cfg.parts_file, n)
        else:
            if cfg.partitions > n:
                raise ConfigError(
                    f"LambdaGNN ERROR: {cfg.partitions} partitions for {n} vertices"
                )
            assignment = round_robin_assignment(n, cfg.partitions)
        self.partitions = partition_graph(ds.graph, assignment)
        self.intervals = []
        for p in self.partitions:
            k = min(cfg.intervals, p.num_owned)
            if k < cfg.intervals:
                logger.warning(
                    "partition %d has %d vertices, using %d intervals", p.partition_id, p.num_owned, k
                )
            self.intervals.extend(split_intervals(p, k, first_id=len(self.intervals)))
        self.num_layers = cfg.num_layers
        self.widths = (
            [ds.features.shape[1]] + [cfg.hidden] * (cfg.num_layers - 1) + [ds.num_classes]
        )
        init = xavier_init if cfg.init_scheme == InitScheme.XAVIER else he_init
        self.initial_weights = [
            init(self.widths[l], self.widths[l + 1], cfg.seed + l, self.dtype)
            for l in range(self.num_layers)
        ]
        optimizer = create_layer_optimizer(
            cfg.optimizer, OptimizerArgs(learning_rate=cfg.learning_rate), self.num_layers
        )
        self.ps = ParameterServerGroup(
            self.initial_weights,
            cfg.param_servers,
            optimizer,
            len(self.intervals),
            self.staleness,
            cfg.broadcast_every,
        )
        self.plan = StagePlan(cfg.num_layers, cfg.fuse, cfg.ae_stage)
        self.forward_history = {
            l: ValueHistory(self.partitions, True, self.widths[l], self.dtype)
            for l in range(1, self.num_layers)
        }
        self.backward_history = {
            l: ValueHistory(self.partitions, False, self.widths[l], self.dtype)
            for l in range(1, self.num_layers)
        }
        self._slot_gids = {
            (p.partition_id, forward): torch.cat(
                [p.owned, p.forward_ghosts if forward else p.backward_ghosts]
            )
            for p in self.partitions
            for forward in (True, False)
        }
        # input features never change, so their ghosts are exchanged once up front
        self._feature_slots = [
            self.features[self._slot_gids[(p.partition_id, True)]] for p in self.partitions
        ]
        self._in_edges = {}
        self._out_edges = {}
        for iv in self.intervals:
            p = self.partitions[iv.partition_id]
            self._in_edges[iv.interval_id] = int(
                (p.in_offsets[1:] - p.in_offsets[:-1])[iv.local_ids].sum()
            )
            self._out_edges[iv.interval_id] = int(
                (p.out_offsets[1:] - p.out_offsets[:-1])[iv.local_ids].sum()
            )

        self.audit = StalenessAudit(self.staleness, n, cfg.audit_rows)
        self.stashes = [ContextStash() for _ in self.partitions]
        self.executor = LambdaExecutor(
            cfg.lambda_spec,
            cfg.network,
            StragglerInjector(cfg.straggler_fraction, cfg.straggler_factor, cfg.seed),
            cfg.stream,
        )
        per_partition = Counter(iv.partition_id for iv in self.intervals)
        self.fleets = [
            Autotuner(
                per_partition[p.partition_id],
                cfg.max_lambdas,
                cfg.initial_lambdas,
                cfg.autotune_window,
            )
            for p in self.partitions
        ]
        self.ledger = UsageLedger()
        self.transport = create_transport(cfg.transport.value, len(self.partitions))
        self.progress = [IntervalProgress(iv) for iv in self.intervals]
        self.scheduler = Scheduler(
            self.plan,
            self.progress,
            self.partitions,
            cfg.mode,
            self.staleness,
            cfg.max_epochs,
            self.forward_history,
            self.backward_history,
        )

        self.now = 0.0
        self._seq = 0
        self._events: List[_Event] = []
        self._free_threads = [cfg.gs_threads] * len(self.partitions)
        self._lambdas_busy = [0] * len(self.partitions)
        self._queue_lengths = [0] * len(self.partitions)
        self._ps_queue: deque = deque()
        self._ps_busy = False
        self._stats: Dict[int, _EpochStats] = {}
        self._logits: Dict[int, torch.Tensor] = {}
        self.epoch_logits: Dict[int, torch.Tensor] = {}
        self.report = TrainingReport()
        self.status = RunStatus.MAX_EPOCHS
        self._last_record_time = 0.0
        self._last_test_acc = 0.0

    @property
    def serverless(self) -> bool:
        return self.config.tensor_backend == TensorBackend.SERVERLESS

    def _stats_for(self, epoch: int) -> _EpochStats:
        return self._stats.setdefault(epoch, _EpochStats())

    def _push(self, duration: float, task: Task, partition: int, resource: str, effect: Effect) -> None:
        self._seq += 1
        heapq.heappush(
            self._events, _Event(self.now + duration, self._seq, task, partition, resource, effect)
        )

    # ------------------------------------------------------------------ run

    def run(self) -> TrainingReport:
        try:
            self._dispatch()
            while self._events and not self.scheduler.stopped:
                event = heapq.heappop(self._events)
                self.now = event.time
                if event.task.kind == TaskKind.WU:
                    self._complete_update(event.task)
                else:
                    self._complete(event)
                self._dispatch()
            if not self.scheduler.finished():
                stuck = [str(self.scheduler.pending(prog)) for prog in self.progress]
                raise RuntimeError(f"LambdaGNN ERROR: pipeline deadlock, pending tasks {stuck}")
        finally:
            self.transport.close()
        return self._finish()

    def _dispatch(self) -> None:
        waiting = [0] * len(self.partitions)
        for task in self.scheduler.next_tasks():
            pid = self.intervals[task.interval].partition_id
            on_lambda = task.kind.is_tensor and self.serverless
            if on_lambda:
                if self._lambdas_busy[pid] >= self.fleets[pid].size:
                    waiting[pid] += 1
                    continue
            elif self._free_threads[pid] == 0:
                continue
            self._start(task, pid, on_lambda)
        self._queue_lengths = waiting
        gap = self.scheduler.epoch_gap()
        self.audit.observe_gap(gap)
        assert gap <= self.staleness, f"epoch gap {gap} exceeds staleness {self.staleness}"

    def _start(self, task: Task, pid: int, on_lambda: bool) -> None:
        self.scheduler.mark_started(task)
        prepare = {
            TaskKind.GA: self._prepare_gather,
            TaskKind.GRAD_GA: self._prepare_gather,
            TaskKind.SC: self._prepare_scatter,
            TaskKind.GRAD_SC: self._prepare_scatter,
            TaskKind.AV: self._prepare_apply_vertex,
            TaskKind.AE: self._prepare_apply_edge,
            TaskKind.GRAD_AE: self._prepare_apply_edge,
            TaskKind.GRAD_AV: self._prepare_grad_apply_vertex,
            TaskKind.FUSED_AV_GRAD_AV: self._prepare_fused,
        }[task.kind]
        cost, compute = prepare(task)
        server = self.config.server
        stats = self._stats_for(task.epoch)
        if on_lambda:
            effect, invocations = self.executor.invoke(
                task.kind.value,
                task.epoch,
                cost.flops,
                cost.bytes_in,
                cost.bytes_out,
                self._lambdas_busy[pid] + 1,
                self.now,
                kernel=compute,
            )
            for invocation in invocations:
                self.ledger.record(invocation)
            stats.invocations += len(invocations)
            duration = invocations[-1].end - self.now
            self._lambdas_busy[pid] += 1
            resource = "lambda"
        else:
            effect = compute()
            duration = cost.flops / server.compute_rate
            if not task.kind.is_tensor:
                duration += server.latency_s + server.transfer_seconds(cost.bytes_out)
            self._free_threads[pid] -= 1
            resource = "thread"
        stats.breakdown[task.kind.value] += duration
        self._push(duration, task, pid, resource, effect)

    def _complete(self, event: _Event) -> None:
        if event.resource == "lambda":
            self._lambdas_busy[event.partition] -= 1
        else:
            self._free_threads[event.partition] += 1
        if event.effect is not None:
            event.effect()
        if self.scheduler.mark_completed(event.task):
            self._interval_epoch_done(event.task)

    # ---------------------------------------------------------- graph tasks

    def _prepare_gather(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        prog = self.progress[task.interval]
        iv = prog.interval
        p = self.partitions[iv.partition_id]
        forward = task.kind == TaskKind.GA
        width = self.widths[task.layer]
        edges = self._in_edges[iv.interval_id] if forward else self._out_edges[iv.interval_id]
        cost = _Cost(flops=2 * (edges + iv.size) * width)

        if forward and task.layer == 0:

            def compute() -> Effect:
                prog.carry = gather(p, iv, 0, task.epoch, self._feature_slots[p.partition_id]).matrix
                return None

            return cost, compute

        slots, rows, value_epochs = self.scheduler.take_gather_inputs(task)
        direction = Direction.FORWARD if forward else Direction.BACKWARD

        def compute() -> Effect:
            self.audit.record_gather(task, value_epochs)
            gids = self._slot_gids[(p.partition_id, forward)][slots]
            self.audit.check_rows(direction, task.layer, gids, value_epochs, rows)
            table = torch.zeros(p.num_slots(forward), width, dtype=self.dtype)
            present = torch.zeros(p.num_slots(forward), dtype=torch.bool)
            table[slots] = rows
            present[slots] = True
            kernel = gather if forward else backward_gather
            prog.carry = kernel(p, iv, task.layer, task.epoch, table, present).matrix
            return None

        return cost, compute

    def _prepare_scatter(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        prog = self.progress[task.interval]
        iv = prog.interval
        p = self.partitions[iv.partition_id]
        forward = task.kind == TaskKind.SC
        # SC(l) publishes the input of layer l + 1, dSC(l) the gradient w.r.t. the gathered input of layer l
        layer = task.layer + 1 if forward else task.layer
        history = (self.forward_history if forward else self.backward_history)[layer]
        rows = prog.carry
        kind = ChunkKind.ACTIVATED if forward else ChunkKind.GRADIENT
        messages = scatter(p, iv, LayerChunk(iv.interval_id, layer, task.epoch, rows, kind), forward)
        cost = _Cost(flops=0, bytes_out=sum(m.payload_bytes for m in messages))
        direction = Direction.FORWARD if forward else Direction.BACKWARD

        def publish() -> None:
            history.publish(p.partition_id, iv.local_ids, rows, task.epoch)
            for message in messages:
                self._deliver(message, history, iv.vertices)
            self.audit.record_scatter(direction, layer, task.epoch, iv.vertices, rows)

        return cost, lambda: publish

    def _deliver(self, message: GhostMessage, history: ValueHistory, sent_from: torch.Tensor) -> None:
        msg_type = MessageType.GHOST_UPDATE if message.forward else MessageType.GHOST_GRAD
        msg = Message(msg_type, message.epoch, message.layer, message.interval_id, message.rows.reshape(-1))
        self.transport.send(message.dst_partition, msg)
        received = self.transport.receive(message.dst_partition, msg.key)
        dst = self.partitions[message.dst_partition]
        expected = (dst.forward_recv if message.forward else dst.backward_recv)[message.src_partition]
        vertices = expected[torch.isin(expected, sent_from)]
        rows = received.payload.reshape(vertices.numel(), history.width).to(self.dtype)
        history.publish(
            dst.partition_id, dst.slots_of(vertices, message.forward), rows, message.epoch
        )

    # --------------------------------------------------------- tensor tasks

    def _record_logits(self, task: Task, logits: torch.Tensor) -> None:
        iv = self.intervals[task.interval]
        vertices = iv.vertices
        stats = self._stats_for(task.epoch)
        loss, _ = softmax_cross_entropy(
            logits, self.onehot[vertices], self.train_mask[vertices], self.num_train
        )
        stats.loss += loss
        correct = logits.argmax(dim=1) == self.labels[vertices]
        stats.train_correct += int((correct & self.train_mask[vertices]).sum())
        stats.val_correct += int((correct & self.val_mask[vertices]).sum())
        stats.test_correct += int((correct & self.test_mask[vertices]).sum())
        if task.epoch not in self._logits:
            self._logits[task.epoch] = torch.zeros(
                self.dataset.num_vertices, self.widths[-1], dtype=self.dtype
            )
        self._logits[task.epoch][vertices] = logits

    def _forward_vertex(self, task: Task) -> None:
        prog = self.progress[task.interval]
        iv = prog.interval
        last = task.layer == self.num_layers - 1
        weight, version = self.ps.fetch_weights(iv.interval_id, task.epoch, task.layer)
        self.audit.record_version(iv.interval_id, task.epoch, Direction.FORWARD, task.layer, version)
        chunk = LayerChunk(iv.interval_id, task.layer, task.epoch, prog.carry, ChunkKind.GATHERED)
        out, ctx = apply_vertex(chunk, weight, version, last, remat=self.config.remat)
        self.stashes[iv.partition_id].put(iv.interval_id, task.layer, task.epoch, ctx)
        prog.carry = out.matrix
        if last:
            self._record_logits(task, out.matrix)

    def _backward_vertex(self, task: Task) -> Effect:
        prog = self.progress[task.interval]
        iv = prog.interval
        last = task.layer == self.num_layers - 1
        weight, version = self.ps.fetch_weights(iv.interval_id, task.epoch, task.layer)
        self.audit.record_version(iv.interval_id, task.epoch, Direction.BACKWARD, task.layer, version)
        ctx = self.stashes[iv.partition_id].pop(iv.interval_id, task.layer, task.epoch)
        if last:
            logits = rematerialize(ctx, weight)
            _, upstream = softmax_cross_entropy(
                logits,
                self.onehot[iv.vertices],
                self.train_mask[iv.vertices],
                self.num_train,
            )
        else:
            upstream = prog.carry
        grad_weight, downstream = grad_apply_vertex(
            ctx, upstream, weight, version, last, need_downstream=task.layer > 0
        )
        prog.carry = downstream
        return lambda: self._push_gradient(task, grad_weight)

    def _vertex_costs(self, task: Task) -> Tuple[_Cost, _Cost]:
        iv = self.intervals[task.interval]
        es = self.features.element_size()
        rows, d_in, d_out = iv.size, self.widths[task.layer], self.widths[task.layer + 1]
        weight_bytes = d_in * d_out * es
        mm = 2 * rows * d_in * d_out
        remat = self.config.remat
        forward = _Cost(
            flops=mm,
            bytes_in=rows * d_in * es + weight_bytes,
            bytes_out=rows * d_out * es * (1 if remat else 2),
        )
        downstream = task.layer > 0
        backward = _Cost(
            flops=mm * (2 if downstream else 1) + (mm if remat else 0),
            bytes_in=rows * d_out * es
            + rows * d_in * es
            + (0 if remat else rows * d_out * es)
            + weight_bytes,
            bytes_out=weight_bytes + (rows * d_in * es if downstream else 0),
        )
        return forward, backward

    def _prepare_apply_vertex(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        forward, _ = self._vertex_costs(task)

        def compute() -> Effect:
            self._forward_vertex(task)
            return None

        return forward, compute

    def _prepare_grad_apply_vertex(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        _, backward = self._vertex_costs(task)
        return backward, lambda: self._backward_vertex(task)

    def _prepare_fused(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        forward, backward = self._vertex_costs(task)
        cost = _Cost(forward.flops + backward.flops, forward.bytes_in, backward.bytes_out)

        def compute() -> Effect:
            self._forward_vertex(task)
            return self._backward_vertex(task)

        return cost, compute

    def _prepare_apply_edge(self, task: Task) -> Tuple[_Cost, Callable[[], Effect]]:
        prog = self.progress[task.interval]
        iv = prog.interval
        matrix = prog.carry
        nbytes = matrix.numel() * matrix.element_size()
        cost = _Cost(flops=matrix.numel(), bytes_in=nbytes, bytes_out=nbytes)

        def compute() -> Effect:
            kind = ChunkKind.ACTIVATED if task.kind == TaskKind.AE else ChunkKind.GRADIENT
            chunk = LayerChunk(iv.interval_id, task.layer, task.epoch, matrix, kind)
            prog.carry = apply_edge(chunk).matrix
            return None

        return cost, compute

    # ------------------------------------------------------ weight updates

    def _push_gradient(self, task: Task, grad_weight: torch.Tensor) -> None:
        if self.ps.accumulate(task.interval, task.epoch, task.layer, grad_weight):
            self._ps_queue.append(Task(TaskKind.WU, -1, task.layer, task.epoch))
            self._start_update()

    def _start_update(self) -> None:
        if self._ps_busy or not self._ps_queue:
            return
        task = self._ps_queue.popleft()
        server = self.config.server
        numel = self.widths[task.layer] * self.widths[task.layer + 1]
        replicas = self.config.param_servers - 1
        duration = (
            server.latency_s
            + WU_FLOPS_PER_PARAM * numel / server.compute_rate
            + server.transfer_seconds(numel * self.features.element_size() * replicas)
        )
        self._ps_busy = True
        self._stats_for(task.epoch).breakdown[TaskKind.WU.value] += duration
        self._push(duration, task, -1, "ps", None)

    def _complete_update(self, task: Task) -> None:
        self._ps_busy = False
        version = self.ps.apply_update(task.epoch, task.layer)
        logger.debug("applied update of epoch %d layer %d, version %d", task.epoch, task.layer, version)
        stats = self._stats_for(task.epoch)
        stats.updates_done += 1
        if stats.updates_done == self.num_layers:
            if self.config.mode == PipelineMode.PIPE:
                self.ps.broadcast()
            self.scheduler.close_epoch(task.epoch)
            self._maybe_record(task.epoch)
        self._start_update()

    # -------------------------------------------------------- epoch records

    def _interval_epoch_done(self, task: Task) -> None:
        pid = self.intervals[task.interval].partition_id
        stats = self._stats_for(task.epoch)
        stats.intervals_done += 1
        if self.serverless:
            self.fleets[pid].observe(self._queue_lengths[pid])
        oldest = self.scheduler.min_completed() - self.staleness
        for history in list(self.forward_history.values()) + list(self.backward_history.values()):
            history.prune(oldest)
        self.audit.prune(oldest)
        self._maybe_record(task.epoch)

    def _maybe_record(self, epoch: int) -> None:
        stats = self._stats.get(epoch)
        if stats is None or self.scheduler.stopped:
            return
        if stats.intervals_done < len(self.intervals) or stats.updates_done < self.num_layers:
            return
        del self._stats[epoch]

        def ratio(correct: int, mask: torch.Tensor) -> float:
            total = int(mask.sum())
            return correct / total if total else 0.0

        record = EpochRecord(
            epoch=epoch,
            loss=stats.loss,
            train_acc=ratio(stats.train_correct, self.train_mask),
            val_acc=ratio(stats.val_correct, self.val_mask),
            makespan=self.now - self._last_record_time,
            virtual_time=self.now,
            lambdas=sum(f.size for f in self.fleets) if self.serverless else 0,
            invocations=stats.invocations,
            staleness_histogram=self.audit.histogram_for(epoch),
            breakdown={k: stats.breakdown[k] for k in sorted(stats.breakdown)},
        )
        self._last_record_time = self.now
        self._last_test_acc = ratio(stats.test_correct, self.test_mask)
        self.epoch_logits[epoch] = self._logits.pop(epoch)
        for old in [e for e in self.epoch_logits if 0 < e < epoch - 1]:
            del self.epoch_logits[old]
        previous = self.report.epochs[-1] if self.report.epochs else None
        self.report.epochs.append(record)
        logger.info(
            "epoch %d loss %.4f train %.3f val %.3f t=%.3fs",
            epoch, record.loss, record.train_acc, record.val_acc, record.virtual_time,
        )

        target = self.config.target_accuracy
        if target is not None:
            if record.train_acc >= target:
                self._stop(RunStatus.TARGET_REACHED)
        elif (
            previous is not None
            and epoch + 1 >= self.config.min_epochs
            and abs(record.val_acc - previous.val_acc) < CONVERGENCE_DELTA
        ):
            self._stop(RunStatus.CONVERGED)

    def _stop(self, status: RunStatus) -> None:
        self.status = status
        self.scheduler.stopped = True

    def _finish(self) -> TrainingReport:
        cfg = self.config
        elapsed = self.now
        self.ledger.record_server(
            cfg.server.instance, elapsed, count=len(self.partitions) + cfg.param_servers
        )
        lam = lambda_cost(self.ledger)
        srv = server_cost(self.ledger)
        total = lam + srv
        self.report.summary = RunSummary(
            status=self.status,
            epochs=len(self.report.epochs),
            test_acc=self._last_test_acc,
            virtual_time=elapsed,
            lambda_cost=float(lam),
            server_cost=float(srv),
            total_cost=float(total),
            value=value(elapsed, total) if elapsed > 0 and total > 0 else None,
        )
        return self.report


def run_epochs(config: RunConfig, dataset: Optional[Dataset] = None) -> TrainingReport:
    """Train until the target accuracy, convergence, or the epoch limit."""
    return Engine(config, dataset).run()
