"""A seedable WaterWorld clone.

The agent is a disc that accelerates in one of four cardinal directions each
step. Circular objects drift around the arena and bounce off its walls;
touching one captures it for +1 (green) or -1 (red) and respawns it with a
fresh colour, position and velocity. Capturing the last green object
respawns the whole board.

Units are arena lengths and environment steps.
"""
from __future__ import annotations

import copy
import enum
import math
from dataclasses import dataclass, field, fields
from typing import NamedTuple

import numpy as np

from .actions import UNIT_VECTORS
from .errors import ConfigurationError


class Color(enum.Enum):
    GREEN = "green"
    RED = "red"


class Event(enum.Enum):
    CAPTURED_GREEN = "captured_green"
    CAPTURED_RED = "captured_red"
    BOARD_RESET = "board_reset"


REWARD = {Color.GREEN: 1.0, Color.RED: -1.0}


@dataclass(frozen=True)
class EnvParams:
    arena_width: float = 1.0
    arena_height: float = 1.0
    agent_radius: float = 0.03
    object_radius: float = 0.03
    object_count: int = 3
    accel_per_step: float = 0.012
    velocity_damping: float = 0.975
    object_speed_range: tuple[float, float] = (0.001, 0.005)
    green_probability: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "object_speed_range", tuple(float(v) for v in self.object_speed_range))
        for name in ("arena_width", "arena_height", "agent_radius", "object_radius"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be strictly positive, got {getattr(self, name)!r}")
        if int(self.object_count) != self.object_count or self.object_count < 1:
            raise ConfigurationError(f"object_count must be an integer >= 1, got {self.object_count!r}")
        if not self.accel_per_step >= 0:
            raise ConfigurationError(f"accel_per_step must be non-negative, got {self.accel_per_step!r}")
        if not 0.0 < self.velocity_damping <= 1.0:
            raise ConfigurationError(f"velocity_damping must lie in (0, 1], got {self.velocity_damping!r}")
        lo, hi = self.object_speed_range
        if not 0.0 <= lo <= hi:
            raise ConfigurationError(f"object_speed_range must satisfy 0 <= lo <= hi, got {self.object_speed_range!r}")
        if not 0.0 <= self.green_probability <= 1.0:
            raise ConfigurationError(f"green_probability must lie in [0, 1], got {self.green_probability!r}")
        if 2 * self.object_radius >= min(self.arena_width, self.arena_height):
            raise ConfigurationError("object_radius too large for the arena")
        if 2 * self.agent_radius >= min(self.arena_width, self.arena_height):
            raise ConfigurationError("agent_radius too large for the arena")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (0.0, 0.0, self.arena_width, self.arena_height)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["object_speed_range"] = list(d["object_speed_range"])
        return d


@dataclass
class ObjectState:
    x: float
    y: float
    vx: float
    vy: float
    color: Color

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def velocity(self) -> tuple[float, float]:
        return (self.vx, self.vy)


@dataclass
class EnvState:
    params: EnvParams
    agent_x: float
    agent_y: float
    agent_vx: float = 0.0
    agent_vy: float = 0.0
    objects: list[ObjectState] = field(default_factory=list)
    rng: np.random.Generator = field(default=None, repr=False)
    step_counter: int = 0

    @property
    def agent_position(self) -> tuple[float, float]:
        return (self.agent_x, self.agent_y)

    @property
    def agent_velocity(self) -> tuple[float, float]:
        return (self.agent_vx, self.agent_vy)

    def copy(self) -> "EnvState":
        return EnvState(
            self.params, self.agent_x, self.agent_y, self.agent_vx, self.agent_vy,
            [copy.copy(o) for o in self.objects], copy.deepcopy(self.rng), self.step_counter,
        )

    def __eq__(self, other):
        if not isinstance(other, EnvState):
            return NotImplemented
        return (
            self.params == other.params
            and self.agent_position == other.agent_position
            and self.agent_velocity == other.agent_velocity
            and self.objects == other.objects
            and self.step_counter == other.step_counter
            and self.rng.bit_generator.state == other.rng.bit_generator.state
        )


class ObjectView(NamedTuple):
    position: tuple[float, float]
    velocity: tuple[float, float]
    color: Color


class Observation(NamedTuple):
    agent_position: tuple[float, float]
    agent_velocity: tuple[float, float]
    objects: tuple[ObjectView, ...]


class StepResult(NamedTuple):
    next_state: EnvState
    reward: float
    events: tuple[Event, ...]


_MAX_REJECTIONS = 10_000


def _sample_object(state: EnvState, avoid: list[ObjectState] = ()) -> ObjectState:
    p = state.params
    rng = state.rng
    r = p.object_radius
    min_agent = p.agent_radius + r
    for _ in range(_MAX_REJECTIONS):
        x = rng.uniform(r, p.arena_width - r)
        y = rng.uniform(r, p.arena_height - r)
        if math.hypot(x - state.agent_x, y - state.agent_y) <= min_agent:
            continue
        if any(math.hypot(x - o.x, y - o.y) < 2 * r for o in avoid):
            continue
        break
    else:
        raise ConfigurationError("could not place an object; arena too crowded for object_count/radii")
    color = Color.GREEN if rng.random() < p.green_probability else Color.RED
    lo, hi = p.object_speed_range
    vx = rng.uniform(lo, hi) * (1.0 if rng.random() < 0.5 else -1.0)
    vy = rng.uniform(lo, hi) * (1.0 if rng.random() < 0.5 else -1.0)
    return ObjectState(x, y, vx, vy, color)


def create_env(params: EnvParams | None = None, seed=0) -> EnvState:
    """Fresh world: agent resting at the centre, objects placed without overlap."""
    params = params or EnvParams()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = EnvState(params, params.arena_width / 2, params.arena_height / 2, rng=rng)
    for _ in range(params.object_count):
        state.objects.append(_sample_object(state, state.objects))
    return state


def advance(state: EnvState, action: int) -> tuple[float, tuple[Event, ...]]:
    """Advance ``state`` one step in place; returns ``(reward, events)``."""
    p = state.params
    ux, uy = UNIT_VECTORS[int(action)]
    damping, accel = p.velocity_damping, p.accel_per_step

    vx = state.agent_vx * damping + accel * ux
    vy = state.agent_vy * damping + accel * uy
    x, y = state.agent_x + vx, state.agent_y + vy
    ra = p.agent_radius
    # sticky walls for the agent: clamp and drop the normal velocity
    if x < ra:
        x, vx = ra, 0.0
    elif x > p.arena_width - ra:
        x, vx = p.arena_width - ra, 0.0
    if y < ra:
        y, vy = ra, 0.0
    elif y > p.arena_height - ra:
        y, vy = p.arena_height - ra, 0.0
    state.agent_x, state.agent_y, state.agent_vx, state.agent_vy = x, y, vx, vy

    ro = p.object_radius
    lo_x, hi_x = ro, p.arena_width - ro
    lo_y, hi_y = ro, p.arena_height - ro
    reach = ra + ro
    captured = []
    for i, o in enumerate(state.objects):
        o.x += o.vx
        o.y += o.vy
        if o.x < lo_x:
            o.x, o.vx = 2 * lo_x - o.x, -o.vx
        elif o.x > hi_x:
            o.x, o.vx = 2 * hi_x - o.x, -o.vx
        if o.y < lo_y:
            o.y, o.vy = 2 * lo_y - o.y, -o.vy
        elif o.y > hi_y:
            o.y, o.vy = 2 * hi_y - o.y, -o.vy
        if math.hypot(o.x - x, o.y - y) < reach:
            captured.append(i)
    state.step_counter += 1

    if not captured:
        return 0.0, ()

    events = []
    reward = 0.0
    green_captured = False
    for i in captured:
        color = state.objects[i].color
        reward += REWARD[color]
        if color is Color.GREEN:
            green_captured = True
            events.append(Event.CAPTURED_GREEN)
        else:
            events.append(Event.CAPTURED_RED)
    survivors_green = any(
        o.color is Color.GREEN for i, o in enumerate(state.objects) if i not in captured
    )
    if green_captured and not survivors_green:
        for i in range(len(state.objects)):
            state.objects[i] = _sample_object(state)
        events.append(Event.BOARD_RESET)
    else:
        for i in captured:
            state.objects[i] = _sample_object(state)
    return reward, tuple(events)


def step(state: EnvState, action: int) -> StepResult:
    """Functional step: ``state`` is left untouched."""
    nxt = state.copy()
    reward, events = advance(nxt, action)
    return StepResult(nxt, reward, events)


def observe(state: EnvState) -> Observation:
    return Observation(
        state.agent_position,
        state.agent_velocity,
        tuple(ObjectView(o.position, o.velocity, o.color) for o in state.objects),
    )


class WaterWorld:
    """Stateful convenience wrapper that steps in place."""

    def __init__(self, params: EnvParams | None = None, seed=0):
        self.params = params or EnvParams()
        self.state = create_env(self.params, seed)

    def observe(self) -> Observation:
        return observe(self.state)

    def step(self, action: int) -> tuple[float, tuple[Event, ...]]:
        return advance(self.state, action)
