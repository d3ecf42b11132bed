"""One neoRL node: superpose a green and a red object, read off the desire."""
from neorl.gvf import GvfBank
from neorl.node import Element, desire_vector, node_forward
from neorl.nres import make_grid
from neorl.oracle import train_to_convergence

grid = make_grid(7)
bank = train_to_convergence(GvfBank(grid, 0.9, alpha=1.0))

agent = (0.5, 0.5)
objects = [Element(0.9, 0.5, +1.0), Element(0.3, 0.1, -1.0)]  # green east, red south-west
out = node_forward(bank, grid, agent, objects)
print("Q(N,S,E,W) =", out.q.round(4))
print("desire (dx, dy) =", desire_vector(out.q).round(4))
e = out.desire
print(f"emitted element at ({e.x:.3f}, {e.y:.3f}) with valence {e.valence:+g}")

alone = node_forward(bank, grid, agent, objects[:1])
print("green only (dx, dy) =", desire_vector(alone.q).round(4))
