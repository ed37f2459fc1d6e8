"""Factorization of unitaries into coupler meshes.

Three schemes are provided:

* :func:`triangle_decompose` builds the descending-chain triangle: for each
  column k the chain ``C_k = R_{n-1,n} ... R_{k,k+1}`` of adjacent rotations
  that zeroes the column bottom-up.  Couplers appear n(n-1)/2 times with
  multiplicity i on pair (i, i+1) and the mesh packs into 2n-3 layers.
* :func:`clements_decompose` builds the rectangular mesh of depth n via the
  alternating left/right nulling order, then folds the residual output
  phases into the coupler angles so no separate phase layer remains.
* :func:`reck_decompose` is the comparison baseline that eliminates each
  column against a fixed pivot row and therefore uses non-adjacent pairs.

:func:`canonicalize` rewrites a triangle plan into its minimal-parameter
form (chain heads full3, everything else constrained2, n^2 - 1 angles), and
:func:`recursive_view` exposes the chain nesting that makes the triangle a
recursive coset construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import ToleranceError, ValidationError
from .linalg import as_complex_matrix, is_unitary, project_to_su
from .mesh import (
    ARITY_CONSTRAINED,
    ARITY_FULL,
    Coupler,
    MeshPlan,
    depth,
    reconstruct,
)
from .su2 import EulerAngles, push_phase_through_coupler, su2_from_euler, zeroing_angles

__all__ = [
    "triangle_decompose",
    "canonicalize",
    "RecursiveView",
    "recursive_view",
    "clements_decompose",
    "reck_decompose",
    "generator_ledger",
    "loss_analysis",
]

_IDENTITY = EulerAngles(0.0, 0.0, 0.0)


def _elimination_angles(a: complex, b: complex) -> EulerAngles:
    """Zeroing angles, with the all-zero pair mapped to an identity coupler.

    Entries that are already zero keep their slot in the fixed mesh shape
    instead of being skipped.
    """
    if a == 0 and b == 0:
        return _IDENTITY
    return zeroing_angles(a, b)


def triangle_decompose(m, tol: float = 1e-10) -> MeshPlan:
    """Factor a unitary into the descending-chain triangle mesh.

    The input is split as ``m = exp(i*phi) * w`` with ``det(w) = 1``, then w
    is reduced column by column: within column k, adjacent row rotations are
    applied from the bottom up, each zeroing one subdiagonal entry while
    leaving a real nonnegative pivot behind.  Because every zeroing step
    sees that real pivot as its second entry, all couplers after the first
    of each chain come out with ``gamma == alpha`` exactly, which is what
    :func:`canonicalize` later relies on.
    """
    a = as_complex_matrix(m)
    if not is_unitary(a, tol):
        raise ValidationError("triangle_decompose requires a unitary matrix")
    n = a.shape[0]
    phi, w = project_to_su(a, tol)
    w = w.copy()
    couplers = []
    for k in range(n - 1):
        for r in range(n - 2, k - 1, -1):
            ang = _elimination_angles(w[r, k], w[r + 1, k])
            rows = [r, r + 1]
            w[rows, k + 1 :] = su2_from_euler(ang).conj().T @ w[rows, k + 1 :]
            # The rotated column entries are known analytically: pivot
            # becomes the pair norm, the lower entry exactly zero.
            w[r, k] = math.hypot(abs(w[r, k]), abs(w[r + 1, k]))
            w[r + 1, k] = 0.0
            couplers.append(Coupler(r + 1, r + 2, ang, ARITY_FULL))
    return MeshPlan(n, phi, tuple(couplers))


def _triangle_pair_sequence(n: int) -> list[tuple[int, int]]:
    """Mode pairs of the triangle plan in order: chains C_1 ... C_{n-1}."""
    return [(m, m + 1) for k in range(1, n) for m in range(n - 1, k - 1, -1)]


def _require_chain_order(plan: MeshPlan, op: str) -> None:
    expected = _triangle_pair_sequence(plan.n)
    actual = [(c.i, c.j) for c in plan.couplers]
    if actual != expected:
        raise ValidationError(f"{op} requires a plan in canonical chain order")


def canonicalize(
    plan: MeshPlan, m, tol: float = 1e-10, return_info: bool = False
) -> MeshPlan | tuple[MeshPlan, dict]:
    """Rewrite a triangle plan with the minimal n^2 - 1 parameter count.

    Chain-head couplers (pair (n-1, n)) keep all three angles; every other
    coupler is reduced to ``constrained2`` with ``gamma == alpha``.  The
    z-phase each reduction strips off is carried rightward through the rest
    of the mesh as a running diagonal, using the exact commutation rule of
    :func:`push_phase_through_coupler`.  If the leftover diagonal is not a
    global phase, the free angles are polished by damped least squares
    (at most 200 residual evaluations) starting from the carried plan.

    With ``return_info=True`` also returns ``{"method", "residual"}``.
    Raises :class:`ToleranceError` carrying the best residual if neither
    path reaches ``10 * tol``.
    """
    target = as_complex_matrix(m)
    if not is_unitary(target, tol):
        raise ValidationError("canonicalize requires a unitary reference matrix")
    n = plan.n
    if target.shape[0] != n:
        raise ValidationError("plan and matrix dimensions disagree")
    _require_chain_order(plan, "canonicalize")

    theta = [0.0] * n
    out = []
    for c in plan.couplers:
        p, q = c.i - 1, c.j - 1
        ang, mu = push_phase_through_coupler(theta[p], theta[q], c.angles, side="left")
        theta[p] = theta[q] = mu
        if c.i == n - 1:
            out.append(Coupler(c.i, c.j, ang, ARITY_FULL))
        else:
            # Split K(a, b, g) = K(a, b, a) * Rz(g - a) and hand the z
            # residue to the running diagonal.
            half = 0.5 * (ang.gamma - ang.alpha)
            out.append(
                Coupler(c.i, c.j, EulerAngles(ang.alpha, ang.beta, ang.alpha), ARITY_CONSTRAINED)
            )
            theta[p] += half
            theta[q] -= half
    mean = sum(theta) / n
    candidate = MeshPlan(n, plan.global_phase + mean, tuple(out))
    residual = float(np.linalg.norm(reconstruct(candidate) - target))
    if residual <= 10.0 * tol:
        info = {"method": "analytic", "residual": residual}
        return (candidate, info) if return_info else candidate

    refined, refined_residual = _refine_canonical(candidate, target)
    if refined_residual <= 10.0 * tol:
        info = {"method": "refined", "residual": refined_residual}
        return (refined, info) if return_info else refined
    best = min(residual, refined_residual)
    raise ToleranceError(
        f"canonicalization stalled at residual {best:.3e}", residual=best
    )


def _refine_canonical(plan: MeshPlan, target: np.ndarray) -> tuple[MeshPlan, float]:
    """Least-squares polish of all free angles plus the global phase."""
    x0 = []
    for c in plan.couplers:
        x0.extend([c.angles.alpha, c.angles.beta])
        if c.arity == ARITY_FULL:
            x0.append(c.angles.gamma)
    x0.append(plan.global_phase)

    def unpack(x) -> MeshPlan:
        pos = 0
        couplers = []
        for c in plan.couplers:
            if c.arity == ARITY_FULL:
                ang = EulerAngles(x[pos], x[pos + 1], x[pos + 2])
                pos += 3
            else:
                ang = EulerAngles(x[pos], x[pos + 1], x[pos])
                pos += 2
            couplers.append(replace(c, angles=ang))
        return MeshPlan(plan.n, x[pos], tuple(couplers))

    def fun(x):
        r = reconstruct(unpack(x)) - target
        return np.concatenate([r.real.ravel(), r.imag.ravel()])

    fit = least_squares(fun, np.asarray(x0), method="lm", max_nfev=200)
    refined = unpack(fit.x)
    return refined, float(np.linalg.norm(reconstruct(refined) - target))


@dataclass(frozen=True)
class RecursiveView:
    """One level of the coset recursion behind the triangle mesh.

    A non-terminal level is ``left``, the partial chain that rotates the
    leading basis vector into the first column, followed by ``middle``, the
    chain's closing coupler on the top pair of the level, followed by
    ``right``, the view of the remaining full subgroup factor one dimension
    down.  The deepest level is a single ``terminal`` coupler.
    """

    left: tuple[Coupler, ...]
    middle: Coupler | None
    right: "RecursiveView | None"
    terminal: Coupler | None = None

    def flatten(self) -> tuple[Coupler, ...]:
        if self.terminal is not None:
            return (self.terminal,)
        return self.left + (self.middle,) + self.right.flatten()


def recursive_view(plan: MeshPlan) -> RecursiveView:
    """Split a canonical plan into its nested chain structure."""
    if not plan.couplers:
        raise ValidationError("recursive_view needs a plan with couplers")
    _require_chain_order(plan, "recursive_view")

    def build(couplers: tuple[Coupler, ...]) -> RecursiveView:
        if len(couplers) == 1:
            return RecursiveView((), None, None, terminal=couplers[0])
        # Chain length at this level follows from the triangle count:
        # len = d(d-1)/2 for subproblem size d, chain uses d-1 couplers.
        d = round((1 + math.isqrt(1 + 8 * len(couplers))) / 2)
        chain, rest = couplers[: d - 1], couplers[d - 1 :]
        return RecursiveView(chain[:-1], chain[-1], build(rest))

    return build(plan.couplers)


def clements_decompose(m, tol: float = 1e-10) -> MeshPlan:
    """Factor a unitary into the depth-n rectangular mesh.

    Subdiagonal entries are nulled along antidiagonals, alternating between
    column operations (right factors) and row operations (left factors).
    The elimination leaves a diagonal of unit phases in the middle of the
    plan; that diagonal is commuted out to the left and then swept back
    across the whole mesh, where exact phase transfers at each coupler make
    it uniform so it folds into the global phase.  The output therefore
    contains couplers only.
    """
    a = as_complex_matrix(m)
    if not is_unitary(a, tol):
        raise ValidationError("clements_decompose requires a unitary matrix")
    n = a.shape[0]
    w = a.copy()
    left: list[Coupler] = []
    right: list[Coupler] = []
    for i in range(1, n):
        if i % 2 == 1:
            for j in range(i):
                r, c = n - 1 - j, i - 1 - j
                ang = _elimination_angles(np.conj(w[r, c + 1]), w[r, c])
                cols = [c, c + 1]
                w[:, cols] = w[:, cols] @ su2_from_euler(ang).conj().T
                w[r, c] = 0.0
                right.append(Coupler(c + 1, c + 2, ang, ARITY_FULL))
        else:
            for j in range(1, i + 1):
                r, c = n + j - i - 1, j - 1
                ang = _elimination_angles(w[r - 1, c], w[r, c])
                rows = [r - 1, r]
                w[rows, :] = su2_from_euler(ang).conj().T @ w[rows, :]
                w[r, c] = 0.0
                left.append(Coupler(r, r + 1, ang, ARITY_FULL))

    theta = [math.atan2(w[k, k].imag, w[k, k].real) for k in range(n)]
    phase = 0.0

    # Stage 1: commute the diagonal leftward through the left factors so the
    # full plan sits to its right.
    for idx in range(len(left) - 1, -1, -1):
        c = left[idx]
        p, q = c.i - 1, c.j - 1
        ang, mu = push_phase_through_coupler(theta[p], theta[q], c.angles, side="right")
        left[idx] = replace(c, angles=ang)
        theta[p] = theta[q] = mu

    couplers = left + right[::-1]

    # Stage 2: sweep the diagonal rightward through every coupler, choosing
    # at each pair the outgoing phase split that pins the running prefix sum
    # to its uniform target.  Once every adjacent pair has been crossed the
    # diagonal is the constant mean and becomes part of the global phase.
    mean = sum(theta) / n if n else 0.0
    for idx, c in enumerate(couplers):
        p, q = c.i - 1, c.j - 1
        psi_p = (c.i * mean) - (sum(theta[: c.i]) - theta[p])
        psi_q = (theta[p] - psi_p) + theta[q]
        ang, mu_in = push_phase_through_coupler(theta[p], theta[q], c.angles, side="left")
        ang, mu_out = push_phase_through_coupler(-psi_p, -psi_q, ang, side="right")
        couplers[idx] = replace(c, angles=ang)
        phase += mu_in + mu_out
        theta[p], theta[q] = psi_p, psi_q
    if n:
        phase += sum(theta) / n

    plan = MeshPlan(n, phase, tuple(couplers))
    # An n=2 rectangle has a single physical column; pad with an identity
    # coupler so the layer count matches the scheme's nominal depth.
    while n >= 2 and depth(plan) < n:
        plan = MeshPlan(n, plan.global_phase, plan.couplers + (Coupler(1, 2, _IDENTITY),))
    return plan


def reck_decompose(m, tol: float = 1e-10) -> MeshPlan:
    """Pivot-row elimination baseline that uses non-adjacent couplers.

    Column k is cleared against pivot row k directly, so the plan contains
    one coupler for every unordered mode pair (i, j), most of them not
    nearest neighbours.  Useful only as a comparison point; the mesh
    operations that assume adjacency reject its output.
    """
    a = as_complex_matrix(m)
    if not is_unitary(a, tol):
        raise ValidationError("reck_decompose requires a unitary matrix")
    n = a.shape[0]
    phi, w = project_to_su(a, tol)
    w = w.copy()
    couplers = []
    for k in range(n - 1):
        for r in range(n - 1, k, -1):
            ang = _elimination_angles(w[k, k], w[r, k])
            rows = [k, r]
            w[rows, k + 1 :] = su2_from_euler(ang).conj().T @ w[rows, k + 1 :]
            w[k, k] = math.hypot(abs(w[k, k]), abs(w[r, k]))
            w[r, k] = 0.0
            couplers.append(Coupler(k + 1, r + 1, ang, ARITY_FULL))
    return MeshPlan(n, phi, tuple(couplers))


def generator_ledger(scheme: str, n: int) -> dict:
    """Count the distinct generator types a scheme needs at dimension n.

    Off-diagonal counts refer to distinct pair types with j > i; the
    transpose partner of each is not counted separately.  The triangle uses
    only the n-1 adjacent pairs, so it saves (n-1)(n-2)/2 types over the
    all-pairs baseline.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValidationError(f"need integer n >= 2, got {n!r}")
    if scheme == "triangle":
        offdiag = n - 1
        savings = (n - 1) * (n - 2) // 2
    elif scheme == "reck":
        offdiag = n * (n - 1) // 2
        savings = 0
    else:
        raise ValidationError(f"unknown scheme {scheme!r}")
    return {"offdiag_pairs": offdiag, "diagonal": n, "savings_vs_reck": savings}


def loss_analysis(plan: MeshPlan, per_coupler_loss_db: float) -> list[dict]:
    """Best- and worst-path coupler counts and attenuation per input mode.

    Light entering a mode traverses the mesh right to left in product
    order; every coupler whose pair it sits on must be crossed and may
    route it to either port.  For each input mode the minimum and maximum
    number of couplers over all routes is reported together with the
    corresponding attenuation at the given per-coupler insertion loss.
    """
    loss = float(per_coupler_loss_db)
    if loss < 0:
        raise ValidationError("per-coupler loss must be nonnegative")
    n = plan.n
    order = list(reversed(plan.couplers))
    report = []
    for mode in range(1, n + 1):
        best = [math.inf] * n
        worst = [-math.inf] * n
        best[mode - 1] = 0
        worst[mode - 1] = 0
        for c in order:
            p, q = c.i - 1, c.j - 1
            b = min(best[p], best[q])
            if b < math.inf:
                best[p] = best[q] = b + 1
            w = max(worst[p], worst[q])
            if w > -math.inf:
                worst[p] = worst[q] = w + 1
        b = min(best)
        w = max(worst)
        report.append(
            {
                "mode": mode,
                "best_couplers": int(b),
                "worst_couplers": int(w),
                "best_loss_db": b * loss,
                "worst_loss_db": w * loss,
            }
        )
    return report
