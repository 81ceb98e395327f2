"""Splitting a field into a conservative part and a sphere-invariant part.

For a continuously differentiable field X on R^n (or on a closed ball
around the origin), the scalar potential

    H(x) = integral over t in [0, 1] of <X(t x), x> dt,   H(0) = 0

generates the conservative part grad H, and the remainder
u(x) = X(x) - grad H(x) is everywhere orthogonal to the position vector
(tangent to origin-centered spheres).  The split is unique under the
normalization H(0) = 0 and <u(x), x> = 0, and satisfies the radial
equality <X(x), x> = <grad H(x), x> at every point; the verification
report below checks that identity, the orthogonality of u, and the
idempotence of the split numerically.

Two independent gradient routes are provided and cross-checked:

* ``gradient_potential``: central finite differences of the potential,
  one adaptive quadrature per shifted evaluation (the primary route);
* ``gradient_potential_integral``: differentiation under the integral
  sign, integrating X_i(t x) + t * <dX/dx_i(t x), x> over t in [0, 1],
  with the field derivatives taken by central differences.

Both routes are batched over points: the shifted potentials (or the
integrand components) are stacked into one vector-valued adaptive
quadrature so a single field call covers all Gauss nodes of a panel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .fields import VectorField
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_unit

__all__ = [
    "ORIGIN_RADIUS",
    "DecompositionSample",
    "DecompositionSet",
    "VerificationReport",
    "compute_potential",
    "potential_many",
    "gradient_potential",
    "gradient_potential_many",
    "gradient_potential_integral",
    "gradient_potential_integral_many",
    "decompose",
    "decompose_many",
    "verify_decomposition",
    "ConservativePart",
    "SphereInvariantPart",
]

# Below this norm the potential is pinned to exactly zero (its analytic
# value), which keeps normalized residuals away from 0/0.
ORIGIN_RADIUS = 1e-12

# Cube root of machine epsilon: the standard step for second-order
# central differences of values carrying relative rounding noise.
_FD_SCALE = float(np.cbrt(np.finfo(float).eps))

# Cap on simultaneous components of one vector-valued quadrature.
_MAX_COMPONENTS = 2048


def _as_points(field, points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != field.dimension:
        raise DimensionMismatchError(
            f"expected points of shape (m, {field.dimension}), got {pts.shape}"
        )
    return pts


def _chunks(total, size):
    for start in range(0, total, size):
        yield np.arange(start, min(start + size, total))


def potential_many(field: VectorField, points, config: QuadratureConfig | None = None):
    """Potential and quadrature error estimate at each row of ``points``."""
    cfg = config if config is not None else DEFAULT_QUADRATURE
    pts = _as_points(field, points)
    m = pts.shape[0]
    values = np.zeros(m)
    errors = np.zeros(m)
    norms = np.linalg.norm(pts, axis=1)
    active = np.flatnonzero(norms >= ORIGIN_RADIUS)
    n = field.dimension
    for chunk in _chunks(active.size, _MAX_COMPONENTS):
        base = pts[active[chunk]]

        def integrand(ts, base=base):
            probe = (ts[:, None, None] * base[None, :, :]).reshape(-1, n)
            vals = field.evaluate_many(probe).reshape(ts.size, base.shape[0], n)
            return np.einsum("qbn,bn->qb", vals, base)

        val, err = integrate_unit(integrand, cfg)
        values[active[chunk]] = val
        errors[active[chunk]] = err
    return values, errors


def compute_potential(field: VectorField, point, config: QuadratureConfig | None = None):
    """Potential at one point; returns ``(value, error_estimate)``.

    The potential at the origin is exactly 0.0 without integrating.
    """
    x = np.asarray(point, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError("expected a single point of shape (n,)")
    values, errors = potential_many(field, x[None, :], config)
    return float(values[0]), float(errors[0])


def _fd_steps(pts):
    return _FD_SCALE * np.maximum(1.0, np.abs(pts))


def _fd_scale_at(centers):
    return _FD_SCALE * np.maximum(1.0, np.abs(centers))


def _check_clearance(field, shifted):
    if field.domain.radius is not None:
        norms = np.linalg.norm(shifted.reshape(-1, field.dimension), axis=1)
        if norms.max() > field.domain.radius * (1.0 + 1e-9):
            raise DomainError(
                "insufficient clearance to the ball boundary for finite differences"
            )


def _gradient_with_errors(field, pts, cfg):
    m, n = pts.shape
    steps = _fd_steps(pts)
    offsets = np.zeros((m, 2 * n, n))
    idx = np.arange(n)
    offsets[:, 2 * idx, idx] = steps
    offsets[:, 2 * idx + 1, idx] = -steps
    shifted = pts[:, None, :] + offsets
    _check_clearance(field, shifted)
    values, errors = potential_many(field, shifted.reshape(m * 2 * n, n), cfg)
    values = values.reshape(m, 2 * n)
    errors = errors.reshape(m, 2 * n)
    grads = (values[:, 0::2] - values[:, 1::2]) / (2.0 * steps)
    grad_errors = (errors[:, 0::2] + errors[:, 1::2]) / (2.0 * steps)
    return grads, grad_errors


def gradient_potential_many(field: VectorField, points, config: QuadratureConfig | None = None):
    """Gradient of the potential at each row of ``points`` (central FD route)."""
    cfg = config if config is not None else DEFAULT_QUADRATURE
    pts = _as_points(field, points)
    return _gradient_with_errors(field, pts, cfg)[0]


def gradient_potential(field: VectorField, point, config: QuadratureConfig | None = None):
    x = np.asarray(point, dtype=float)
    return gradient_potential_many(field, x[None, :], config)[0]


def gradient_potential_integral_many(
    field: VectorField, points, config: QuadratureConfig | None = None
):
    """Second, independent gradient route: differentiate under the integral.

    For each point x the integrand over t is the vector
    X(t x) + t * J(t x)^T x, with the Jacobian columns dX/dx_i estimated
    by central differences at each Gauss node.  Those differences carry
    rounding noise of order eps * |X| / step, which the quadrature can
    never resolve below; the per-point noise estimate is handed to the
    integrator as its acceptance floor.
    """
    cfg = config if config is not None else DEFAULT_QUADRATURE
    pts = _as_points(field, points)
    m, n = pts.shape
    out = np.zeros((m, n))
    norms = np.linalg.norm(pts, axis=1)
    active = np.flatnonzero(norms >= ORIGIN_RADIUS)
    eps = np.finfo(float).eps
    # One quadrature component per gradient entry; keep batches bounded.
    per_point = max(1, _MAX_COMPONENTS // max(n, 1))
    for chunk in _chunks(active.size, per_point):
        base = pts[active[chunk]]
        b = base.shape[0]
        field_peak = np.zeros(b)
        abs_sum = np.abs(base).sum(axis=1)

        def noise_floor(abs_sum=abs_sum, peaks=field_peak):
            per_point_noise = 4.0 * (eps / _FD_SCALE) * abs_sum * peaks
            return np.repeat(per_point_noise, n)

        def integrand(ts, base=base, b=b, peaks=field_peak):
            q = ts.size
            centers = ts[:, None, None] * base[None, :, :]  # (q, b, n)
            steps = _fd_scale_at(centers)
            probes = np.empty((q, b, 2 * n + 1, n))
            probes[:, :, 0, :] = centers
            idx = np.arange(n)
            probes[:, :, 1 + 2 * idx, :] = centers[:, :, None, :]
            probes[:, :, 2 + 2 * idx, :] = centers[:, :, None, :]
            for i in range(n):
                probes[:, :, 1 + 2 * i, i] += steps[:, :, i]
                probes[:, :, 2 + 2 * i, i] -= steps[:, :, i]
            _check_clearance(field, probes)
            vals = field.evaluate_many(probes.reshape(-1, n)).reshape(q, b, 2 * n + 1, n)
            np.maximum(peaks, np.abs(vals).max(axis=(0, 2, 3)), out=peaks)
            center_vals = vals[:, :, 0, :]
            # d_i has shape (q, b, n): the derivative of X along coordinate i.
            out_qbn = np.empty((q, b, n))
            for i in range(n):
                d_i = (vals[:, :, 1 + 2 * i, :] - vals[:, :, 2 + 2 * i, :]) / (
                    2.0 * steps[:, :, i][:, :, None]
                )
                out_qbn[:, :, i] = np.einsum("qbn,bn->qb", d_i, base)
            g = center_vals + ts[:, None, None] * out_qbn
            return g.reshape(q, b * n)

        val, _ = integrate_unit(integrand, cfg, noise_floor=noise_floor)
        out[active[chunk]] = val.reshape(b, n)
    return out


def gradient_potential_integral(field: VectorField, point, config: QuadratureConfig | None = None):
    x = np.asarray(point, dtype=float)
    return gradient_potential_integral_many(field, x[None, :], config)[0]


# ---------------------------------------------------------------------------
# Assembled decompositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionSample:
    """The split at a single point, with diagnostic residuals.

    ``conservative + sphere_invariant`` equals the field value exactly by
    construction; ``orthogonality_residual`` is <u, x> and
    ``radial_equality_residual`` is <X, x> - <grad H, x>.
    ``estimated_error`` propagates the quadrature error estimates of the
    potential and its finite-difference gradient into the radial
    diagnostics (it does not include FD truncation).
    """

    point: np.ndarray
    potential: float
    conservative: np.ndarray
    sphere_invariant: np.ndarray
    orthogonality_residual: float
    radial_equality_residual: float
    estimated_error: float


@dataclass(frozen=True)
class DecompositionSet:
    """Vectorized decomposition over a batch of points."""

    points: np.ndarray
    field_values: np.ndarray
    potentials: np.ndarray
    potential_errors: np.ndarray
    conservative: np.ndarray
    sphere_invariant: np.ndarray
    orthogonality_residuals: np.ndarray
    radial_equality_residuals: np.ndarray
    estimated_errors: np.ndarray

    def sample(self, i: int) -> DecompositionSample:
        return DecompositionSample(
            point=self.points[i],
            potential=float(self.potentials[i]),
            conservative=self.conservative[i],
            sphere_invariant=self.sphere_invariant[i],
            orthogonality_residual=float(self.orthogonality_residuals[i]),
            radial_equality_residual=float(self.radial_equality_residuals[i]),
            estimated_error=float(self.estimated_errors[i]),
        )


def decompose_many(field: VectorField, points, config: QuadratureConfig | None = None):
    cfg = config if config is not None else DEFAULT_QUADRATURE
    pts = _as_points(field, points)
    values = field.evaluate_many(pts)
    potentials, pot_errors = potential_many(field, pts, cfg)
    grads, grad_errors = _gradient_with_errors(field, pts, cfg)
    residual = values - grads
    orth = np.einsum("ij,ij->i", residual, pts)
    radial_eq = np.einsum("ij,ij->i", values, pts) - np.einsum("ij,ij->i", grads, pts)
    est = pot_errors + np.einsum("ij,ij->i", np.abs(pts), grad_errors)
    return DecompositionSet(
        points=pts,
        field_values=values,
        potentials=potentials,
        potential_errors=pot_errors,
        conservative=grads,
        sphere_invariant=residual,
        orthogonality_residuals=orth,
        radial_equality_residuals=radial_eq,
        estimated_errors=est,
    )


def decompose(field: VectorField, point, config: QuadratureConfig | None = None):
    x = np.asarray(point, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError("expected a single point of shape (n,)")
    return decompose_many(field, x[None, :], config).sample(0)


class ConservativePart(VectorField):
    """The conservative part of a field, as a field itself.

    Each evaluation runs the finite-difference-of-potential route, so
    values carry that route's numerical error.
    """

    def __init__(self, source: VectorField, config: QuadratureConfig | None = None):
        super().__init__(
            source.dimension, f"conservative_part({source.label})", source.domain
        )
        self.source = source
        self.config = config if config is not None else DEFAULT_QUADRATURE

    def _evaluate_many(self, points):
        return gradient_potential_many(self.source, points, self.config)


class SphereInvariantPart(VectorField):
    """The sphere-invariant remainder of a field, as a field itself."""

    def __init__(self, source: VectorField, config: QuadratureConfig | None = None):
        super().__init__(
            source.dimension, f"sphere_invariant_part({source.label})", source.domain
        )
        self.source = source
        self.config = config if config is not None else DEFAULT_QUADRATURE

    def _evaluate_many(self, points):
        return self.source.evaluate_many(points) - gradient_potential_many(
            self.source, points, self.config
        )


@dataclass(frozen=True)
class VerificationReport:
    """Worst normalized residuals of the split over a point sample.

    Every residual is divided by (1 + |x|) (1 + |X(x)|) at its point.
    ``max_idempotence`` re-splits the conservative part (its own
    sphere-invariant part should vanish); ``max_residual_potential`` is
    the potential of the sphere-invariant part (should vanish too).
    """

    point_count: int
    threshold: float
    max_orthogonality: float
    max_radial_equality: float
    max_idempotence: float
    max_residual_potential: float
    passed: bool

    def as_dict(self):
        return {
            "point_count": self.point_count,
            "threshold": self.threshold,
            "max_orthogonality": self.max_orthogonality,
            "max_radial_equality": self.max_radial_equality,
            "max_idempotence": self.max_idempotence,
            "max_residual_potential": self.max_residual_potential,
            "passed": self.passed,
        }


def verify_decomposition(
    field: VectorField,
    points,
    config: QuadratureConfig | None = None,
    threshold: float = 1e-6,
) -> VerificationReport:
    cfg = config if config is not None else DEFAULT_QUADRATURE
    pts = _as_points(field, points)
    split = decompose_many(field, pts, cfg)
    scale = (1.0 + np.linalg.norm(pts, axis=1)) * (
        1.0 + np.linalg.norm(split.field_values, axis=1)
    )
    max_orth = float(np.max(np.abs(split.orthogonality_residuals) / scale))
    max_radial = float(np.max(np.abs(split.radial_equality_residuals) / scale))

    conservative = ConservativePart(field, cfg)
    grad_of_grad = gradient_potential_many(conservative, pts, cfg)
    idem = np.linalg.norm(grad_of_grad - split.conservative, axis=1)
    max_idem = float(np.max(idem / scale))

    residual_field = SphereInvariantPart(field, cfg)
    residual_potentials, _ = potential_many(residual_field, pts, cfg)
    max_res_pot = float(np.max(np.abs(residual_potentials) / scale))

    passed = max(max_orth, max_radial, max_idem, max_res_pot) <= threshold
    return VerificationReport(
        point_count=pts.shape[0],
        threshold=threshold,
        max_orthogonality=max_orth,
        max_radial_equality=max_radial,
        max_idempotence=max_idem,
        max_residual_potential=max_res_pot,
        passed=passed,
    )
