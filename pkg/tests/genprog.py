"""Seeded random program and trace generator for differential testing."""
from __future__ import annotations

import random

from instants.dsl import (
    ActivateStmt,
    AwaitExpr,
    CloseExpr,
    HaltExpr,
    HandleStmt,
    InitExpr,
    LoopExpr,
    MergeExpr,
    NothingExpr,
    PrintStmt,
    RaiseStmt,
    RepeatExpr,
    RexpExpr,
    RifExpr,
    SeqStmt,
    SetStmt,
    StopStmt,
    SuspendStmt,
    TerminateExpr,
    WhenExpr,
)
from instants.world import (
    ActionSeq,
    And,
    BinOp,
    BoolConst,
    CellRef,
    Compare,
    InstantEvents,
    IntConst,
    Negate,
    Not,
    Or,
    Print,
    RaiseTag,
    SetCell,
    Sig,
    ValueRef,
)

SIGNALS = ("a", "b", "go")
VALUES = ("v",)
CELLS = ("x", "y")
TAGS = ("T", "U")
TEXTS = ("p", "q", "r")


def gen_int(rng: random.Random, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        return IntConst(rng.randint(-3, 9))
    if roll < 0.55:
        return CellRef(rng.choice(CELLS))
    if roll < 0.70:
        return ValueRef(rng.choice(VALUES))
    if roll < 0.90:
        return BinOp(rng.choice("+-*"), gen_int(rng, depth - 1), gen_int(rng, depth - 1))
    return Negate(gen_int(rng, depth - 1))


def gen_cond(rng: random.Random, depth: int):
    roll = rng.random()
    if roll < 0.40:
        return Sig(rng.choice(SIGNALS))
    if depth <= 0 or roll < 0.50:
        return BoolConst(rng.random() < 0.5)
    if roll < 0.60:
        return Not(gen_cond(rng, depth - 1))
    if roll < 0.70:
        return And(gen_cond(rng, depth - 1), gen_cond(rng, depth - 1))
    if roll < 0.80:
        return Or(gen_cond(rng, depth - 1), gen_cond(rng, depth - 1))
    return Compare(rng.choice(("=", "<", "<=")), gen_int(rng, 1), gen_int(rng, 1))


def gen_template(rng: random.Random) -> str:
    parts = []
    for _ in range(rng.randint(1, 2)):
        roll = rng.random()
        if roll < 0.50:
            parts.append(rng.choice(TEXTS))
        elif roll < 0.75:
            parts.append("{cell:%s}" % rng.choice(CELLS))
        else:
            parts.append("{value:%s}" % rng.choice(VALUES))
    return " ".join(parts)


def gen_action(rng: random.Random, depth: int, allow_raise: bool = True):
    roll = rng.random()
    if roll < 0.45:
        return Print(gen_template(rng))
    if roll < 0.85:
        return SetCell(rng.choice(CELLS), gen_int(rng, 1))
    if roll < 0.93 and depth > 0:
        return ActionSeq(
            tuple(gen_action(rng, depth - 1, allow_raise) for _ in range(rng.randint(0, 2)))
        )
    if allow_raise:
        return RaiseTag(rng.choice(TAGS))
    return Print(gen_template(rng))


def gen_stmt(rng: random.Random, depth: int, allow_raise: bool = True):
    roll = rng.random()
    if roll < 0.22:
        return PrintStmt(gen_template(rng))
    if roll < 0.38:
        return SetStmt(rng.choice(CELLS), gen_int(rng, 1))
    if roll < 0.58:
        return StopStmt()
    if roll < 0.66:
        return SuspendStmt()
    if roll < 0.78 and depth > 0:
        return ActivateStmt(gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.88 and depth > 0:
        return HandleStmt(
            rng.choice(TAGS),
            gen_prog(rng, depth - 1, max_items=3, allow_raise=allow_raise),
            gen_prog(rng, depth - 1, max_items=2, allow_raise=allow_raise),
        )
    if roll < 0.94 and allow_raise:
        return RaiseStmt(rng.choice(TAGS))
    return SeqStmt(tuple(gen_stmt(rng, 0, allow_raise) for _ in range(rng.randint(0, 2))))


def gen_prog(rng: random.Random, depth: int, max_items: int = 8, allow_raise: bool = True):
    return SeqStmt(tuple(gen_stmt(rng, depth, allow_raise) for _ in range(rng.randint(0, max_items))))


def gen_expr(rng: random.Random, depth: int, allow_raise: bool = True):
    roll = rng.random()
    if depth <= 0 or roll < 0.30:
        leaf = rng.random()
        if leaf < 0.70:
            return RexpExpr(gen_prog(rng, max(0, depth - 1), max_items=5, allow_raise=allow_raise))
        if leaf < 0.85:
            return HaltExpr()
        return NothingExpr()
    if roll < 0.45:
        return MergeExpr(gen_expr(rng, depth - 1, allow_raise), gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.55:
        return RifExpr(
            gen_cond(rng, 2), gen_expr(rng, depth - 1, allow_raise), gen_expr(rng, depth - 1, allow_raise)
        )
    if roll < 0.63:
        return CloseExpr(gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.71:
        return LoopExpr(gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.78:
        return RepeatExpr(rng.randint(0, 3), gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.84:
        return InitExpr(gen_action(rng, 1, allow_raise), gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.90:
        return AwaitExpr(gen_cond(rng, 2), gen_expr(rng, depth - 1, allow_raise))
    if roll < 0.95:
        return WhenExpr(gen_cond(rng, 2), gen_expr(rng, depth - 1, allow_raise))
    return TerminateExpr(gen_cond(rng, 2), gen_expr(rng, depth - 1, allow_raise))


def gen_trace(rng: random.Random):
    instants = []
    for _ in range(rng.randint(1, 10)):
        signals = frozenset(name for name in SIGNALS if rng.random() < 0.40)
        values = {name: rng.randint(0, 9) for name in VALUES if rng.random() < 0.35}
        instants.append(InstantEvents(signals, values))
    return instants


def gen_case(seed: int, allow_raise: bool = True):
    """One differential test case: an expression tree plus an event trace."""
    rng = random.Random(seed)
    return gen_expr(rng, rng.randint(1, 5), allow_raise), gen_trace(rng)
