"""Factor a random unitary into the descending-chain triangle mesh.

Walks through the basic workflow: draw a seeded unitary, decompose it,
inspect the mesh shape, canonicalize down to n^2 - 1 parameters, and
print the ASCII rendering of the circuit.
"""

import numpy as np

from sunmesh import (
    canonicalize,
    depth,
    parameter_count,
    random_unitary_qr,
    reconstruct,
    recursive_view,
    render,
    triangle_decompose,
)


def main():
    n = 5
    m = random_unitary_qr(n, seed=11)
    plan = triangle_decompose(m)

    print(f"target: {n}x{n} Haar-random unitary (seed 11)")
    print(f"couplers: {len(plan.couplers)}   depth: {depth(plan)}   "
          f"raw parameters: {parameter_count(plan)}")
    err = np.abs(reconstruct(plan) - m).max()
    print(f"roundtrip error: {err:.2e}")

    canon = canonicalize(plan, m)
    print(f"canonical parameters: {parameter_count(canon)} (= n^2 - 1)")
    heads = sum(c.i == n - 1 for c in canon.couplers)
    print(f"full couplers: {heads} chain heads; the rest carry gamma == alpha")

    view = recursive_view(canon)
    left = [(c.i, c.j) for c in view.left]
    print(f"recursive split: coset chain {left} around a {n - 1}-mode core")

    print()
    print(render(canon))


if __name__ == "__main__":
    main()
