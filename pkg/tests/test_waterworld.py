import math

import numpy as np
import pytest

from neorl.actions import Action
from neorl.errors import ConfigurationError
from neorl.waterworld import (
    Color,
    EnvParams,
    Event,
    ObjectState,
    advance,
    create_env,
    observe,
    step,
)


def test_default_world_has_three_objects():
    state = create_env(EnvParams(), 42)
    assert len(state.objects) == 3
    assert state.agent_position == (0.5, 0.5) and state.agent_velocity == (0.0, 0.0)


def test_creation_is_deterministic():
    assert create_env(EnvParams(), 42) == create_env(EnvParams(), 42)
    assert create_env(EnvParams(), 42) != create_env(EnvParams(), 43)


@pytest.mark.parametrize("field, value", [
    ("object_count", 0), ("agent_radius", 0.0), ("arena_width", -1.0), ("velocity_damping", 0.0),
    ("velocity_damping", 1.5), ("object_speed_range", (0.01, 0.001)),
])
def test_invalid_params_name_the_field(field, value):
    with pytest.raises(ConfigurationError, match=field):
        EnvParams(**{field: value})


def test_initial_objects_do_not_overlap():
    p = EnvParams(object_count=8)
    for seed in range(20):
        s = create_env(p, seed)
        for i, a in enumerate(s.objects):
            assert math.hypot(a.x - s.agent_x, a.y - s.agent_y) > p.agent_radius + p.object_radius
            for b in s.objects[i + 1:]:
                assert math.hypot(a.x - b.x, a.y - b.y) >= 2 * p.object_radius


def _place(state, objects):
    state.objects = [ObjectState(*o) for o in objects]
    return state


def test_far_from_everything():
    s = _place(create_env(EnvParams(), 0), [(0.1, 0.1, 0.0, 0.0, Color.GREEN), (0.9, 0.9, 0.0, 0.0, Color.RED)])
    res = step(s, Action.N)
    assert res.reward == 0.0 and res.events == ()


def test_green_capture():
    s = _place(create_env(EnvParams(accel_per_step=0.0), 0), [
        (0.52, 0.5, 0.0, 0.0, Color.GREEN), (0.1, 0.1, 0.0, 0.0, Color.GREEN), (0.9, 0.9, 0.0, 0.0, Color.RED)])
    res = step(s, Action.N)
    assert res.reward == 1.0
    assert res.events == (Event.CAPTURED_GREEN,)
    assert len(res.next_state.objects) == 3
    assert res.next_state.objects[0] != s.objects[0]
    assert res.next_state.objects[1:] == s.objects[1:]


def test_last_green_resets_board():
    s = _place(create_env(EnvParams(accel_per_step=0.0), 0), [
        (0.52, 0.5, 0.0, 0.0, Color.GREEN), (0.1, 0.1, 0.0, 0.0, Color.RED), (0.9, 0.9, 0.0, 0.0, Color.RED)])
    res = step(s, Action.N)
    assert res.reward == 1.0
    assert res.events == (Event.CAPTURED_GREEN, Event.BOARD_RESET)
    assert all(a != b for a, b in zip(res.next_state.objects, s.objects))


def test_simultaneous_captures_sum():
    s = _place(create_env(EnvParams(accel_per_step=0.0), 0), [
        (0.52, 0.5, 0.0, 0.0, Color.GREEN), (0.48, 0.5, 0.0, 0.0, Color.RED), (0.9, 0.9, 0.0, 0.0, Color.GREEN)])
    res = step(s, Action.N)
    assert res.reward == 0.0
    assert sorted(e.value for e in res.events) == ["captured_green", "captured_red"]


def test_step_leaves_input_untouched_and_observe_is_pure():
    s = create_env(EnvParams(), 3)
    snapshot = s.copy()
    step(s, Action.E)
    assert s == snapshot
    assert observe(s) == observe(s.copy())
    assert len(observe(s).objects) == 3


def test_agent_sticks_to_walls():
    p = EnvParams()
    s = create_env(p, 0)
    for _ in range(200):
        advance(s, Action.E)
    assert s.agent_x == p.arena_width - p.agent_radius
    assert s.agent_vx == 0.0


def test_object_reflection_preserves_speed():
    p = EnvParams()
    s = _place(create_env(p, 0), [(0.031, 0.9, -0.004, 0.002, Color.RED)])
    speed = abs(s.objects[0].vx)
    advance(s, Action.S)
    o = s.objects[0]
    assert o.vx > 0 and abs(o.vx) == speed
    assert o.x >= p.object_radius


def test_fuzz_invariants():
    p = EnvParams()
    s = create_env(p, 9)
    rng = np.random.default_rng(9)
    greens = reds = 0
    total = 0.0
    for action in rng.integers(4, size=20_000):
        speeds = [(abs(o.vx), abs(o.vy)) for o in s.objects]
        reward, events = advance(s, action)
        total += reward
        greens += events.count(Event.CAPTURED_GREEN)
        reds += events.count(Event.CAPTURED_RED)
        assert len(s.objects) == p.object_count
        assert p.agent_radius <= s.agent_x <= p.arena_width - p.agent_radius
        assert p.agent_radius <= s.agent_y <= p.arena_height - p.agent_radius
        lo, hi = p.object_speed_range
        for o, (sx, sy) in zip(s.objects, speeds):
            assert 0 <= o.x <= p.arena_width and 0 <= o.y <= p.arena_height
            assert lo <= abs(o.vx) <= hi and lo <= abs(o.vy) <= hi
        if not events:
            assert [(abs(o.vx), abs(o.vy)) for o in s.objects] == speeds
    assert total == greens - reds
    assert greens + reds > 0


def test_action_sequence_determinism():
    actions = np.random.default_rng(1).integers(4, size=2000)

    def run():
        s = create_env(EnvParams(), 5)
        return [advance(s, a) for a in actions], s

    (r1, s1), (r2, s2) = run(), run()
    assert r1 == r2 and s1 == s2


def test_observation_count_after_capture():
    s = create_env(EnvParams(), 11)
    rng = np.random.default_rng(0)
    for _ in range(50_000):
        _, events = advance(s, rng.integers(4))
        if Event.CAPTURED_GREEN in events:
            break
    else:
        pytest.fail("no green capture in 50k random steps")
    assert len(observe(s).objects) == 3
