"""Drive the WaterWorld clone with a random policy and watch the events."""
from collections import Counter

import numpy as np

from neorl.waterworld import EnvParams, WaterWorld

env = WaterWorld(EnvParams(), seed=3)
rng = np.random.default_rng(0)
events = Counter()
total = 0.0
for t in range(9000):  # five minutes at 30 steps/s
    reward, ev = env.step(int(rng.integers(4)))
    total += reward
    events.update(e.name for e in ev)

obs = env.observe()
print("agent at ({:.3f}, {:.3f})".format(*obs.agent_position))
for o in obs.objects:
    print(f"  {o.color.name:5s} at ({o.position[0]:.3f}, {o.position[1]:.3f})")
print("events:", dict(events))
print("accumulated reward:", total)
