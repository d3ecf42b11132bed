"""Train a GVF bank to convergence and compare with closed-form values."""
import numpy as np

from neorl.gvf import GvfBank
from neorl.nres import make_grid
from neorl.oracle import GridWorld, bank_q_star, train_to_convergence

n, gamma = 5, 0.9
bank = train_to_convergence(GvfBank(make_grid(n), gamma, alpha=1.0))
ref = bank_q_star(GridWorld(n), gamma)
print("max |Q - Q*| =", np.abs(bank.q - ref).max())

# value of each cell for reaching the centre goal, laid out with +y upward
goal = (n // 2) * n + n // 2
v = bank.q[goal].max(axis=1).reshape(n, n)[::-1]
np.set_printoptions(precision=3, suppress=True)
print(v)
