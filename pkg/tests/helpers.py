"""Small drivers shared by the test modules."""
from __future__ import annotations

from instants import Environment
from instants.world import InstantEvents


def react_once(env: Environment, root, events: InstantEvents | None = None):
    """Run one instant and return (outputs, terminated)."""
    env.world.apply_instant(events)
    done = env.react(root)
    return env.world.drain_output(), done


def run_instants(env: Environment, root, events_list, pad_empty: int = 0):
    """Run one instant per entry (plus optional empty instants); collect
    (outputs, status name, terminated) rows."""
    rows = []
    for events in list(events_list) + [None] * pad_empty:
        env.world.apply_instant(events)
        done = env.react(root)
        rows.append((env.world.drain_output(), env.statuses[root].name, done))
        if done:
            break
    return rows
