"""Constructors for reactive expressions.

Each combinator allocates a node in the given environment and returns its
id. halt, nothing, when, and terminate are plain desugarings over the
others, so their behavioral equivalences hold by construction.
"""
from __future__ import annotations

from .core import ReactiveId
from .kernel import (
    AwaitNode,
    BasicNode,
    CloseNode,
    Environment,
    InitNode,
    LoopNode,
    MergeNode,
    RepeatNode,
    RifNode,
)
from .program import EMPTY_PROGRAM, Program, Seq, Stop, initial_resumption
from .world import Cond, HostAction


def rexp(env: Environment, program: Program) -> ReactiveId:
    """A basic reactive expression running the given instruction tree."""
    return env.alloc(BasicNode(initial_resumption(program)))


def merge(env: Environment, left: ReactiveId, right: ReactiveId) -> ReactiveId:
    """Parallel composition: activates left then right each instant;
    terminates when both have terminated."""
    return env.alloc(MergeNode(left, right))


def rif(env: Environment, cond: Cond, then_branch: ReactiveId, else_branch: ReactiveId) -> ReactiveId:
    """Conditional activation; the condition is re-evaluated every instant."""
    return env.alloc(RifNode(cond, then_branch, else_branch))


def close(env: Environment, child: ReactiveId) -> ReactiveId:
    """Resolve the child's suspensions within the instant."""
    return env.alloc(CloseNode(child))


def nothing(env: Environment) -> ReactiveId:
    """Terminates on its first activation."""
    return rexp(env, EMPTY_PROGRAM)


def halt(env: Environment) -> ReactiveId:
    """Stops at every instant, forever."""
    return loop(env, rexp(env, Seq((Stop(),))))


def loop(env: Environment, body: ReactiveId) -> ReactiveId:
    """Restart the body from a construction-time copy whenever it
    terminates. The argument itself is never activated by the loop."""
    saved = env.dup(body)
    return env.alloc(LoopNode(saved, env.dup(saved)))


def repeat(env: Environment, count: int, body: ReactiveId) -> ReactiveId:
    """Run the body to termination ``count`` times, then terminate."""
    if count < 0:
        raise ValueError("repeat count must be non-negative")
    if count == 0:
        return nothing(env)
    saved = env.dup(body)
    return env.alloc(RepeatNode(saved, env.dup(saved), count))


def init(env: Environment, action: HostAction, child: ReactiveId) -> ReactiveId:
    """Run the action before every activation of the child."""
    return env.alloc(InitNode(action, child))


def await_(env: Environment, cond: Cond, child: ReactiveId) -> ReactiveId:
    """Stop until the condition first holds, then behave as the child.

    The condition is checked once per instant until it holds and never
    again afterwards.
    """
    return env.alloc(AwaitNode(cond, child))


def when(env: Environment, cond: Cond, child: ReactiveId) -> ReactiveId:
    """Activate the child when the condition holds, otherwise stop."""
    return rif(env, cond, child, halt(env))


def terminate(env: Environment, cond: Cond, child: ReactiveId) -> ReactiveId:
    """Activate the child while the condition is false; terminate the
    instant it first holds."""
    return rif(env, cond, nothing(env), child)
