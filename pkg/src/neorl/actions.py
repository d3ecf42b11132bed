"""The cardinal action set shared by the environment and every neoRL node."""
from enum import IntEnum

import numpy as np


class Action(IntEnum):
    N = 0  # up, +y
    S = 1  # down, -y
    E = 2  # right, +x
    W = 3  # left, -x


N_ACTIONS = 4

# unit vector of each action, indexed by Action
UNIT_VECTORS = np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]])
