"""Node store and the single-step activation engine.

An Environment owns every reactive expression it allocated: a node table
describing structure, a status table holding each expression's last outcome,
the event world, and the divergence limits. Activation is a recursive walk:
step dispatches on the node kind, writes the resulting status back, and
returns it. A terminated expression is inert; stepping it returns END and
changes nothing.

Preemption unwinds as an Abort exception. Every node whose in-progress step
is unwound is marked END on the way out; a basic expression with a matching
handler catches the abort instead and keeps running.

Loops replace their body with a fresh copy of the saved one when it
terminates. A body that terminated after reading this instant's events
would see the same events again if its replacement ran now, so the
replacement waits for the next activation; bodies that read nothing restart
in place, which is also where instantaneous-loop divergence is caught.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import (
    Abort,
    END,
    InstantaneousLoop,
    InstantRecord,
    InstantTrace,
    Limits,
    MicroStepLimitExceeded,
    ReactiveId,
    Status,
    STOP,
    SUSP,
    UncaughtAbort,
    star,
)
from .program import (
    Resumption,
    copy_resumption,
    resumption_activations,
    run_resumption,
)
from .world import Cond, HostAction, World, cond_reads_events, eval_cond


@dataclass
class BasicNode:
    resumption: Resumption


@dataclass
class MergeNode:
    left: ReactiveId
    right: ReactiveId


@dataclass
class RifNode:
    cond: Cond
    then_branch: ReactiveId
    else_branch: ReactiveId


@dataclass
class CloseNode:
    child: ReactiveId


@dataclass
class LoopNode:
    saved: ReactiveId
    current: ReactiveId


@dataclass
class RepeatNode:
    saved: ReactiveId
    current: ReactiveId
    remaining: int


@dataclass
class InitNode:
    action: HostAction
    child: ReactiveId


@dataclass
class AwaitNode:
    cond: Cond
    child: ReactiveId
    latched: bool = False


Node = Union[BasicNode, MergeNode, RifNode, CloseNode, LoopNode, RepeatNode, InitNode, AwaitNode]


def _node_children(node: Node) -> list[ReactiveId]:
    if isinstance(node, BasicNode):
        return list(resumption_activations(node.resumption))
    if isinstance(node, MergeNode):
        return [node.left, node.right]
    if isinstance(node, RifNode):
        return [node.then_branch, node.else_branch]
    if isinstance(node, CloseNode):
        return [node.child]
    if isinstance(node, (LoopNode, RepeatNode)):
        return [node.saved, node.current]
    if isinstance(node, (InitNode, AwaitNode)):
        return [node.child]
    raise TypeError(f"not a node: {node!r}")


class Environment:
    """A single-threaded reactive engine instance.

    All stepping on one environment is strictly sequential; host actions
    must not re-enter react on their own environment.
    """

    def __init__(self, world: World | None = None, limits: Limits | None = None):
        self.nodes: dict[ReactiveId, Node] = {}
        self.statuses: dict[ReactiveId, Status] = {}
        self.world = world if world is not None else World()
        self.limits = limits if limits is not None else Limits()
        self._next_id = 0
        self._event_reads = 0
        self._reacting = False

    # ------------------------------------------------------------------
    # Allocation and duplication

    def alloc(self, node: Node) -> ReactiveId:
        """Register a node under a fresh id; fresh expressions start STOP."""
        for child in _node_children(node):
            if child not in self.nodes:
                raise ValueError(f"child id {child} is not allocated")
        rid = self._next_id
        self._next_id += 1
        self.nodes[rid] = node
        self.statuses[rid] = STOP
        return rid

    def dup(self, r: ReactiveId) -> ReactiveId:
        """Deep-copy the region reachable from r, statuses and resumptions
        included. Sharing inside the region is preserved; the original is
        untouched."""
        if r not in self.nodes:
            raise ValueError(f"unknown reactive id {r}")
        return self._copy_region(r, {}, set())

    def _copy_region(
        self, r: ReactiveId, memo: dict[ReactiveId, ReactiveId], visiting: set[ReactiveId]
    ) -> ReactiveId:
        if r in memo:
            return memo[r]
        if r in visiting:
            raise RuntimeError(f"cycle detected in reactive node graph at id {r}")
        visiting.add(r)
        node = self.nodes[r]
        if isinstance(node, BasicNode):
            for child in resumption_activations(node.resumption):
                self._copy_region(child, memo, visiting)
            copied: Node = BasicNode(copy_resumption(node.resumption, lambda c: memo[c]))
        elif isinstance(node, MergeNode):
            copied = MergeNode(
                self._copy_region(node.left, memo, visiting),
                self._copy_region(node.right, memo, visiting),
            )
        elif isinstance(node, RifNode):
            copied = RifNode(
                node.cond,
                self._copy_region(node.then_branch, memo, visiting),
                self._copy_region(node.else_branch, memo, visiting),
            )
        elif isinstance(node, CloseNode):
            copied = CloseNode(self._copy_region(node.child, memo, visiting))
        elif isinstance(node, LoopNode):
            copied = LoopNode(
                self._copy_region(node.saved, memo, visiting),
                self._copy_region(node.current, memo, visiting),
            )
        elif isinstance(node, RepeatNode):
            copied = RepeatNode(
                self._copy_region(node.saved, memo, visiting),
                self._copy_region(node.current, memo, visiting),
                node.remaining,
            )
        elif isinstance(node, InitNode):
            copied = InitNode(node.action, self._copy_region(node.child, memo, visiting))
        elif isinstance(node, AwaitNode):
            copied = AwaitNode(
                node.cond, self._copy_region(node.child, memo, visiting), node.latched
            )
        else:
            raise TypeError(f"not a node: {node!r}")
        visiting.discard(r)
        rid = self.alloc(copied)
        self.statuses[rid] = self.statuses[r]
        memo[r] = rid
        return rid

    # ------------------------------------------------------------------
    # Stepping

    def run_action(self, action: HostAction) -> None:
        if action.reads_events:
            self._event_reads += 1
        action.run(self.world)

    def _eval_cond(self, cond: Cond) -> bool:
        if cond_reads_events(cond):
            self._event_reads += 1
        return eval_cond(cond, self.world)

    def step(self, r: ReactiveId) -> Status:
        """Activate the expression r once and return the outcome.

        Terminated expressions short-circuit: the activation is not
        propagated and nothing changes. An abort unwinding through r marks
        it END before re-raising.
        """
        if r not in self.nodes:
            raise ValueError(f"unknown reactive id {r}")
        if self.statuses[r] is END:
            return END
        try:
            status = self._dispatch(r, self.nodes[r])
        except Abort:
            self.statuses[r] = END
            raise
        self.statuses[r] = status
        return status

    def _dispatch(self, r: ReactiveId, node: Node) -> Status:
        if isinstance(node, BasicNode):
            return run_resumption(self, node.resumption)
        if isinstance(node, MergeNode):
            return self._step_merge(node)
        if isinstance(node, RifNode):
            return self._step_rif(node)
        if isinstance(node, CloseNode):
            return self._close_steps(node.child)
        if isinstance(node, LoopNode):
            return self._step_loop(node)
        if isinstance(node, RepeatNode):
            return self._step_repeat(node)
        if isinstance(node, InitNode):
            self.run_action(node.action)
            return self.step(node.child)
        if isinstance(node, AwaitNode):
            return self._step_await(node)
        raise TypeError(f"not a node: {node!r}")

    def _step_merge(self, node: MergeNode) -> Status:
        left_status = self.statuses[node.left]
        right_status = self.statuses[node.right]
        if left_status is SUSP and right_status is not SUSP:
            # Mid-instant re-step: only the suspended branch runs; the other
            # branch contributes its stored outcome.
            a = self.step(node.left)
            return star(a, self.statuses[node.right])
        if right_status is SUSP and left_status is not SUSP:
            a = self.step(node.right)
            return star(self.statuses[node.left], a)
        a = self.step(node.left)
        b = self.step(node.right)
        return star(a, b)

    def _step_rif(self, node: RifNode) -> Status:
        # A suspended branch resumes without re-evaluating the condition;
        # otherwise the condition is evaluated anew every instant.
        if self.statuses[node.then_branch] is SUSP:
            return self.step(node.then_branch)
        if self.statuses[node.else_branch] is SUSP:
            return self.step(node.else_branch)
        if self._eval_cond(node.cond):
            return self.step(node.then_branch)
        return self.step(node.else_branch)

    def _close_steps(self, r: ReactiveId) -> Status:
        """Re-activate r until it leaves suspension, within one instant."""
        status = self.step(r)
        steps = 1
        while status is SUSP:
            if steps >= self.limits.max_micro_steps:
                raise MicroStepLimitExceeded(self.limits.max_micro_steps)
            status = self.step(r)
            steps += 1
        return status

    def _step_loop(self, node: LoopNode) -> Status:
        restarts = 0
        before = self._event_reads
        status = self.step(node.current)
        while status is END:
            observed = self._event_reads > before
            node.current = self.dup(node.saved)
            if observed:
                # The finished body read this instant's events; its
                # replacement starts at the next activation.
                return STOP
            restarts += 1
            if restarts > self.limits.max_loop_restarts:
                raise InstantaneousLoop(self.limits.max_loop_restarts)
            before = self._event_reads
            status = self.step(node.current)
        return status

    def _step_repeat(self, node: RepeatNode) -> Status:
        restarts = 0
        before = self._event_reads
        status = self.step(node.current)
        while status is END:
            node.remaining -= 1
            if node.remaining <= 0:
                return END
            observed = self._event_reads > before
            node.current = self.dup(node.saved)
            if observed:
                return STOP
            restarts += 1
            if restarts > self.limits.max_loop_restarts:
                raise InstantaneousLoop(self.limits.max_loop_restarts)
            before = self._event_reads
            status = self.step(node.current)
        return status

    def _step_await(self, node: AwaitNode) -> Status:
        if not node.latched:
            if not self._eval_cond(node.cond):
                return STOP
            node.latched = True
        return self.step(node.child)

    # ------------------------------------------------------------------
    # Instant-level entry points

    def react(self, r: ReactiveId) -> bool:
        """Run one instant of r (with the implicit close) and report
        whether it terminated."""
        if self._reacting:
            raise RuntimeError("react is not reentrant; host actions must not call it")
        self._reacting = True
        try:
            try:
                status = self._close_steps(r)
            except Abort as abort:
                raise UncaughtAbort(abort.tag) from None
            return status is END
        finally:
            self._reacting = False

    def react_t(self, r: ReactiveId, max_instants: int) -> InstantTrace:
        """React once per instant, with no events, until termination or the
        instant budget runs out."""
        if max_instants < 1:
            raise ValueError("max_instants must be at least 1")
        trace = InstantTrace()
        for index in range(1, max_instants + 1):
            self.world.apply_instant(None)
            done = self.react(r)
            trace.instants.append(
                InstantRecord(index, self.world.drain_output(), self.statuses[r])
            )
            if done:
                trace.terminated = True
                break
        return trace
