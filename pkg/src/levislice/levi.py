"""Boundary geometry engine.

A Domain is a real-valued defining function rho together with a sampling
box; the open set is {rho < 0} and its boundary is {rho = 0}.  This module
projects points onto the boundary, evaluates the Levi form, minimizes it
over complex tangent directions, and classifies the domain at sampled
boundary points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from . import linalg as la


class DomainError(Exception):
    pass


class ProjectionError(Exception):
    pass


class BoundaryNotFoundError(Exception):
    pass


VERDICT_PSEUDOCONVEX = "pseudoconvex-at-samples"
VERDICT_NONPSEUDOCONVEX = "nonpseudoconvex"
VERDICT_DEGENERATE = "degenerate"

# fraction by which the sampling box is inflated when accepting projected points
BOX_INFLATION = 0.1
# degenerate-gradient samples tolerated before the verdict becomes "degenerate"
DEGENERATE_FRACTION = 0.1


@dataclass(frozen=True)
class Tolerances:
    boundary_eps: float = 1e-9
    grad_floor: float = 1e-8
    levi_eps: float = 1e-7
    realness_eps: float = 1e-9


@dataclass(frozen=True)
class Domain:
    ast: ex.Ast
    box: np.ndarray          # (2n, 2) bounds, real coords ordered re1, im1, re2, ...
    tol: Tolerances = field(default_factory=Tolerances)

    @property
    def n(self) -> int:
        return max(self.ast.n, 1)


def square_box(n: int, half_width: float, center=None) -> np.ndarray:
    """Box [c - w, c + w] in every one of the 2n real coordinates."""
    centers = np.zeros(2 * n) if center is None else np.asarray(center, float)
    return np.stack([centers - half_width, centers + half_width], axis=1)


def make_domain(rho, box=None, tol: Tolerances = Tolerances(),
                check_trials: int = 64, check_seed: int = 0) -> Domain:
    ast = ex.parse(rho) if isinstance(rho, str) else rho
    n = max(ast.n, 1)
    if box is None:
        box = square_box(n, 1.5)
    box = np.asarray(box, float)
    if box.shape != (2 * n, 2):
        raise DomainError(f"box must have shape ({2 * n}, 2), got {box.shape}")
    if not np.all(box[:, 0] < box[:, 1]):
        raise DomainError("box bounds must satisfy lower < upper")
    if not ex.check_real_valued(ast, check_trials, check_seed, box=box,
                                realness_tol=tol.realness_eps):
        raise DomainError("defining function is not real-valued on the sampling box")
    return Domain(ast, box, tol)


@dataclass(frozen=True)
class LeviProbe:
    point: np.ndarray        # boundary point M
    lambda_min: float        # minimum of the Levi form over unit tangent vectors
    direction: np.ndarray    # unit tangent minimizer Z
    grad_norm: float


@dataclass(frozen=True)
class LeviReport:
    probes: list[LeviProbe]
    worst: int | None
    verdict: str
    degenerate_count: int
    sample_count: int

    @property
    def worst_probe(self) -> LeviProbe:
        if self.worst is None:
            raise DomainError("report has no probes")
        return self.probes[self.worst]


# ---------------------------------------------------------------------------
# Sampling and projection
# ---------------------------------------------------------------------------

def sample_box_points(box: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Pseudorandom points in the box, one counter-based stream per index.

    Sample i depends only on (seed, i), so results are identical no matter
    how the work is split across threads.
    """
    dims = box.shape[0]
    reals = np.empty((count, dims))
    for i in range(count):
        rng = np.random.default_rng((seed, i))
        reals[i] = box[:, 0] + rng.random(dims) * (box[:, 1] - box[:, 0])
    return reals[:, 0::2] + 1j * reals[:, 1::2]


def _in_inflated_box(box: np.ndarray, pts: np.ndarray) -> np.ndarray:
    reals = np.empty((pts.shape[0], 2 * pts.shape[1]))
    reals[:, 0::2] = pts.real
    reals[:, 1::2] = pts.imag
    center = (box[:, 0] + box[:, 1]) / 2.0
    half = (box[:, 1] - box[:, 0]) / 2.0 * (1.0 + BOX_INFLATION)
    return np.all(np.abs(reals - center) <= half, axis=1)


def _newton_batch(domain: Domain, z0: np.ndarray,
                  max_iter: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Gradient-direction Newton toward {rho = 0} on a batch of points.

    The real gradient of rho is 2*conj(grad); the step is the exact Newton
    step for the linearization of rho along that direction.  Returns the
    final points and a convergence mask.
    """
    tol = domain.tol
    z = z0.copy()
    done = np.zeros(len(z), bool)
    failed = np.zeros(len(z), bool)
    for _ in range(max_iter):
        vals, grads = ex.eval_value_grad(domain.ast, z)
        gn = np.linalg.norm(grads, axis=1)
        rgn = 2.0 * gn
        bad = ~np.all(np.isfinite(z), axis=1) | ~np.isfinite(vals)
        failed |= ~done & (bad | (rgn < tol.grad_floor))
        done |= ~failed & (np.abs(vals) <= tol.boundary_eps * (1.0 + rgn))
        active = ~(done | failed)
        if not active.any():
            break
        gn2 = np.maximum(gn * gn, np.finfo(float).tiny)
        step = (vals / (2.0 * gn2))[:, None] * np.conj(grads)
        z[active] -= step[active]
    return z, done & ~failed


def project_to_boundary(domain: Domain, z0) -> np.ndarray:
    z0 = np.asarray(z0, complex)[None, :]
    pts, ok = _newton_batch(domain, z0)
    if not ok[0]:
        raise ProjectionError("boundary projection did not converge")
    return pts[0]


def sample_boundary(domain: Domain, count: int, seed: int) -> np.ndarray:
    """Project `count` box samples onto the boundary; drop failures.

    Errors if fewer than half converge inside the (slightly inflated) box,
    which usually means the box misses the boundary entirely.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    starts = sample_box_points(domain.box, count, seed)
    try:
        pts, ok = _newton_batch(domain, starts)
    except ex.EvalError:
        # fall back to one-at-a-time projection so one bad point cannot
        # poison the whole batch
        pts = starts.copy()
        ok = np.zeros(count, bool)
        for i in range(count):
            try:
                pts[i:i + 1], ok_i = _newton_batch(domain, starts[i:i + 1])
                ok[i] = ok_i[0]
            except ex.EvalError:
                ok[i] = False
    ok &= _in_inflated_box(domain.box, pts)
    good = pts[ok]
    if len(good) < 0.5 * count:
        raise BoundaryNotFoundError(
            f"only {len(good)}/{count} samples reached the boundary; "
            "the sampling box likely misses it")
    return good


# ---------------------------------------------------------------------------
# Levi form
# ---------------------------------------------------------------------------

def levi_form_at(domain: Domain, M, Z) -> float:
    """Levi form sum_{j,k} (d^2 rho / dz_j dzbar_k)(M) Z_j conj(Z_k)."""
    Z = np.asarray(Z, complex)
    jet = ex.eval_jet(domain.ast, M)
    raw = complex(np.einsum("jk,j,k->", jet.mixed, Z, np.conj(Z)))
    if abs(raw.imag) > 1e-10 * (1.0 + abs(raw)):
        raise DomainError(f"Levi form not real: imaginary part {raw.imag:.3e}")
    return raw.real


def _probe_from_jet(domain: Domain, M: np.ndarray, grad: np.ndarray,
                    mixed: np.ndarray) -> LeviProbe:
    gn = float(np.linalg.norm(grad))
    basis = la.tangent_null_basis(grad, grad_floor=domain.tol.grad_floor)
    restricted = np.einsum("lm,li,mj->ij", mixed, basis, np.conj(basis))
    lam, vec = la.hermitian_eig_min(la.HermitianMatrix.from_array(restricted))
    # with restricted = P^T H conj(P), the Levi form of P v is
    # conj(v)^H restricted conj(v), so the minimizer is P conj(eigvec)
    Z = basis @ np.conj(vec)
    Z = Z / np.linalg.norm(Z)
    return LeviProbe(point=M.copy(), lambda_min=lam, direction=Z, grad_norm=gn)


def restricted_levi_min(domain: Domain, M) -> LeviProbe:
    M = np.asarray(M, complex)
    jet = ex.eval_jet(domain.ast, M)
    if np.linalg.norm(jet.grad) < domain.tol.grad_floor:
        raise la.DegenerateGradientError(
            f"gradient norm {np.linalg.norm(jet.grad):.3e} below floor")
    return _probe_from_jet(domain, M, jet.grad, jet.mixed)


def classify(domain: Domain, count: int = 200, seed: int = 0) -> LeviReport:
    """Probe sampled boundary points and classify the domain.

    Degenerate-gradient samples are skipped and counted; they force the
    "degenerate" verdict once they exceed 10% of the samples.
    """
    points = sample_boundary(domain, count, seed)
    jets = ex.eval_jet_batch(domain.ast, points)
    probes: list[LeviProbe] = []
    degenerate = 0
    for i in range(len(jets)):
        try:
            probes.append(_probe_from_jet(domain, points[i],
                                          jets.grad[i], jets.mixed[i]))
        except la.DegenerateGradientError:
            degenerate += 1
    if not probes or degenerate > DEGENERATE_FRACTION * len(points):
        return LeviReport(probes, None, VERDICT_DEGENERATE, degenerate, len(points))
    worst = int(np.argmin([p.lambda_min for p in probes]))
    if probes[worst].lambda_min < -domain.tol.levi_eps:
        verdict = VERDICT_NONPSEUDOCONVEX
    else:
        verdict = VERDICT_PSEUDOCONVEX
    return LeviReport(probes, worst, verdict, degenerate, len(points))
