"""Closed-form decay bounds for off-diagonal singular values of f(A).

For a quasiseparable matrix whose shifted and scaled spectrum is enclosed
by a region of logarithmic capacity rho, outer conformal radius r_outer,
and boundary rotation total_rotation, the singular values of any
off-diagonal block of f(A) decay geometrically. This module evaluates the
bound curves themselves, the geometry factor they share, the QR entry
bounds for Krylov and Horner matrices that drive the proofs, and the exact
Krylov-times-Horner reconstruction of an off-diagonal polynomial block.

Everything here is pure evaluation: no matrix function is computed, only
upper estimates that the experiments module compares against measured
singular values.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dense import as_square_matrix, numerical_range_boundary, truncated_svd
from .errors import InvalidGeometryError, InvalidInputError

# Crouzeix-Palencia constant: kappa-free variant multiplies gamma by this
# instead of the squared eigenvector condition number.
CROUZEIX_CONSTANT = 11.08

_GRID_POINTS = 512
_RADIUS_GRID_POINTS = 256
_MODULUS_SAMPLES = 1024
_MODULUS_SAFETY = 1.01
_ENTIRE_LOG_CAP = 30.0


@dataclass(frozen=True)
class Enclosure:
    """Spectral enclosure (rho, r_outer, total_rotation) with its level curves.

    rho is the logarithmic capacity of the enclosing region, r_outer the
    largest conformal level at which the mapped curve stays inside the unit
    disc, total_rotation the total rotation of the region's boundary, and
    delta_of(r) the maximum modulus attained on the image of the circle of
    radius r under the exterior Riemann map.
    """

    rho: float
    r_outer: float
    total_rotation: float
    kind: str
    delta_of: object = field(compare=False)

    def __post_init__(self):
        if not (0.0 < self.rho < self.r_outer):
            raise InvalidGeometryError(
                f"need 0 < rho < r_outer, got rho={self.rho}, r_outer={self.r_outer}"
            )
        if not (self.total_rotation > 0.0):
            raise InvalidInputError(
                f"total_rotation must be positive, got {self.total_rotation}"
            )


def enclosure_interval(a):
    """Enclosure of a real interval [-a, a] with 0 < a < 1.

    Capacity a/2; the level curves are ellipses with foci at -a, a and
    maximum modulus r + a^2/(4r); the outer level r_outer solves
    r + a^2/(4r) = 1.
    """
    if not (0.0 < a < 1.0):
        raise InvalidInputError(f"interval half-width must be in (0, 1), got {a}")
    outer = 0.5 * (1.0 + math.sqrt(1.0 - a * a))
    return Enclosure(
        rho=0.5 * a,
        r_outer=outer,
        total_rotation=2.0 * math.pi,
        kind="interval",
        delta_of=lambda r: r + a * a / (4.0 * r),
    )


def enclosure_disc(norm_ratio):
    """Enclosure of a disc of radius norm_ratio about the origin.

    The exterior Riemann map is the identity, so delta_of(r) = r and
    r_outer = 1. Worst case fallback: norm_ratio = ||A - z0 I|| / R.
    """
    if not (0.0 < norm_ratio < 1.0):
        raise InvalidInputError(f"norm ratio must be in (0, 1), got {norm_ratio}")
    return Enclosure(
        rho=norm_ratio,
        r_outer=1.0,
        total_rotation=2.0 * math.pi,
        kind="disc",
        delta_of=lambda r: r,
    )


def enclosure_hull_disc(center, radius):
    """Enclosure of a disc of given center and radius inside the unit disc.

    Capacity equals the radius, level curves are concentric circles, and
    the outer level is 1 - |center|. Requires radius < 1 - |center| so that
    the level-curve range is nonempty at unit scale.
    """
    center = complex(center)
    if not (radius > 0.0):
        raise InvalidInputError(f"disc radius must be positive, got {radius}")
    if radius >= 1.0 - abs(center):
        raise InvalidGeometryError(
            f"disc of radius {radius} about {center} does not fit strictly "
            "inside the unit disc; rescale the matrix first"
        )
    offset = abs(center)
    return Enclosure(
        rho=radius,
        r_outer=1.0 - offset,
        total_rotation=2.0 * math.pi,
        kind="hull-disc",
        delta_of=lambda r: offset + r,
    )


def _circumcenter(a, b, c):
    d = 2.0 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag) + c.real * (a.imag - b.imag))
    if abs(d) < 1e-14 * (abs(a) + abs(b) + abs(c) + 1.0) ** 2:
        return None
    aa, bb, cc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (aa * (b.imag - c.imag) + bb * (c.imag - a.imag) + cc * (a.imag - b.imag)) / d
    uy = (aa * (c.real - b.real) + bb * (a.real - c.real) + cc * (b.real - a.real)) / d
    return complex(ux, uy)


def _disc_from_boundary(pts):
    if not pts:
        return 0.0 + 0.0j, 0.0
    if len(pts) == 1:
        return pts[0], 0.0
    if len(pts) == 2:
        c = 0.5 * (pts[0] + pts[1])
        return c, abs(pts[0] - c)
    c = _circumcenter(*pts)
    if c is None:
        # collinear support: widest pair wins
        pairs = [(pts[i], pts[j]) for i in range(3) for j in range(i + 1, 3)]
        a, b = max(pairs, key=lambda p: abs(p[0] - p[1]))
        c = 0.5 * (a + b)
        return c, abs(a - c)
    return c, abs(pts[0] - c)


def _min_enclosing_disc(points):
    # Welzl's algorithm with deterministic insertion order
    center, radius = _disc_from_boundary([])

    def contains(c, r, p):
        return abs(p - c) <= r * (1.0 + 1e-12) + 1e-15

    def solve(i, boundary):
        nonlocal center, radius
        if i == len(points) or len(boundary) == 3:
            return _disc_from_boundary(boundary)
        c, r = solve(i + 1, boundary)
        if contains(c, r, points[i]):
            return c, r
        return solve(i + 1, boundary + [points[i]])

    return solve(0, [])


def enclosure_from_numerical_range(a, n_angles=64):
    """Enclosure from the smallest disc containing the numerical range.

    Samples the numerical-range boundary of the matrix (assumed already
    shifted and scaled so the range fits strictly inside the unit disc),
    computes its minimum enclosing disc, and wraps it as a hull-disc
    enclosure. Conservative: capacity of the disc dominates that of the
    hull.
    """
    pts = [complex(z) for z in numerical_range_boundary(as_square_matrix(a), n_angles)]
    center, radius = _min_enclosing_disc(pts)
    if radius <= 0.0:
        raise InvalidGeometryError("numerical range degenerates to a point")
    return enclosure_hull_disc(center, radius)


@dataclass(frozen=True)
class FunctionMeta:
    """Analytic data of f about a center: modulus growth and reach.

    inner_radius is the scale of the matrix argument (the shifted matrix is
    enclosed at that radius); admissible_r_max is the largest radius at
    which f stays holomorphic about the center; max_modulus_at(R) samples
    the maximum modulus on the circle of radius R.
    """

    center: complex
    inner_radius: float
    admissible_r_max: float
    max_modulus_at: object = field(compare=False)


def function_meta(fn, center=0.0, inner_radius=1.0, exclude=(), samples=_MODULUS_SAMPLES,
                  safety=_MODULUS_SAFETY):
    """Build FunctionMeta for a registered scalar function.

    The maximum modulus is estimated from equispaced circle samples times a
    small safety factor; this can in principle undershoot between samples,
    which is accepted and documented. Raises when the holomorphy radius
    about the center does not exceed the inner radius.
    """
    if not (inner_radius > 0.0):
        raise InvalidInputError(f"inner radius must be positive, got {inner_radius}")
    center = complex(center)
    reach = fn.holomorphy_radius(center, exclude)
    if not (reach > inner_radius):
        raise InvalidGeometryError(
            f"function {fn.name!r} is holomorphic only up to radius {reach:.6g} "
            f"about {center}, which does not exceed the argument scale {inner_radius:.6g}"
        )

    def max_modulus_at(big_r):
        angles = 2.0 * np.pi * np.arange(samples) / samples
        ring = center + big_r * np.exp(1j * angles)
        with np.errstate(all="ignore"):
            vals = np.abs(fn(ring))
        vals = np.where(np.isfinite(vals), vals, np.inf)
        return float(np.max(vals)) * safety

    return FunctionMeta(
        center=center,
        inner_radius=float(inner_radius),
        admissible_r_max=float(reach),
        max_modulus_at=max_modulus_at,
    )


def geometry_factor(e, big_r):
    """Evaluate the geometry factor shared by the decay bounds.

    total_rotation^2 / (pi^2 (R-1)(1 - rho/r_outer) sqrt(1 - (rho/(R r_outer))^2))
    times the minimum over r in (rho, r_outer) of
    1 / (delta (1 - delta^2)(r/rho - 1) sqrt(1 - rho^2/r^2)), where
    delta = max(1/R, delta_of(r)). The inner minimum is taken on a
    512-point geometric grid, refined once around the grid minimizer.
    """
    if not (big_r > 1.0):
        raise InvalidInputError(f"geometry factor needs R > 1, got {big_r}")
    rho, outer = e.rho, e.r_outer

    def inner(r):
        with np.errstate(all="ignore"):
            delta = np.maximum(1.0 / big_r, e.delta_of(r))
            vals = 1.0 / (delta * (1.0 - delta**2) * (r / rho - 1.0)
                          * np.sqrt(1.0 - (rho / r) ** 2))
        return np.where(np.isfinite(vals) & (delta < 1.0), vals, np.inf)

    def grid(lo, hi):
        # half-offset keeps both endpoints strictly excluded
        steps = (np.arange(_GRID_POINTS) + 0.5) / _GRID_POINTS
        return lo * (hi / lo) ** steps

    rs = grid(rho, outer)
    vals = inner(rs)
    best = int(np.argmin(vals))
    lo = rs[max(best - 1, 0)]
    hi = rs[min(best + 1, _GRID_POINTS - 1)]
    rs2 = grid(lo, hi)
    minimum = float(min(np.min(vals), np.min(inner(rs2))))
    if not math.isfinite(minimum):
        raise InvalidGeometryError("geometry factor minimization found no finite value")

    prefactor = e.total_rotation**2 / (
        math.pi**2
        * (big_r - 1.0)
        * (1.0 - rho / outer)
        * math.sqrt(1.0 - (rho / (big_r * outer)) ** 2)
    )
    return prefactor * minimum


@dataclass(frozen=True)
class DecayBound:
    """Exponential bound sigma_l <= gamma * exp(-(alpha+alpha')(l - shift)/k).

    pole_shift is t*k for t poles inside the outer disc; the bound is
    clamped to gamma for l <= pole_shift.
    """

    gamma: float
    alpha: float
    alpha_prime: float
    qsrank: int
    pole_shift: int

    def bound(self, l):
        if l <= self.pole_shift:
            return self.gamma
        rate = (self.alpha + self.alpha_prime) * (l - self.pole_shift) / self.qsrank
        return self.gamma * math.exp(-rate)

    def curve(self, l_values):
        return [self.bound(int(l)) for l in l_values]


def offdiag_decay_bound(e, fm, k, kappa_max, norm_shifted, t=0, jordan_shift=0,
                        crouzeix_c=None, radius=None):
    """Decay bound for the singular values of an off-diagonal block of f(A).

    The matrix, shifted by the function center and scaled by
    fm.inner_radius, must be enclosed (together with all trailing
    submatrices) by e; k is the quasiseparable rank, kappa_max the worst
    eigenvector condition number among trailing submatrices, norm_shifted
    the 2-norm of the shifted (unscaled) matrix, and radius the modulus
    radius R at which f is sampled (fm.inner_radius < radius). t counts
    simple poles strictly inside the radius-R disc, which flattens the
    first t*k singular values. jordan_shift, when positive, is the largest
    Jordan block size minus one and relaxes the bound accordingly.
    Providing crouzeix_c switches to the numerical-range variant: the
    kappa_max^2 factor is replaced by the constant itself.
    """
    if k < 1:
        raise InvalidInputError(f"quasiseparable rank must be >= 1, got {k}")
    if t < 0 or jordan_shift < 0:
        raise InvalidInputError("pole count and Jordan shift must be >= 0")
    if crouzeix_c is None:
        if kappa_max < 1.0:
            raise InvalidInputError(f"kappa_max must be >= 1, got {kappa_max}")
        cond_factor = kappa_max**2
    else:
        if not (crouzeix_c > 0.0):
            raise InvalidInputError(f"crouzeix constant must be positive, got {crouzeix_c}")
        cond_factor = crouzeix_c
    if norm_shifted < 0.0:
        raise InvalidInputError(f"norm must be >= 0, got {norm_shifted}")
    if radius is None:
        raise InvalidInputError("an explicit modulus radius is required; "
                                "use optimize_bound_radius to choose one")
    if not (radius > fm.inner_radius):
        raise InvalidGeometryError(
            f"modulus radius {radius} must exceed the argument scale {fm.inner_radius}"
        )
    if radius > fm.admissible_r_max:
        raise InvalidGeometryError(
            f"modulus radius {radius} exceeds the holomorphy reach {fm.admissible_r_max}"
        )
    if radius * e.r_outer <= e.rho * fm.inner_radius:
        raise InvalidGeometryError("outer modulus level does not clear the capacity level")

    ratio = radius / fm.inner_radius
    alpha = math.log(e.r_outer / e.rho)
    alpha_prime = math.log(ratio)
    gamma = (
        fm.max_modulus_at(radius)
        * cond_factor
        * norm_shifted
        * geometry_factor(e, ratio)
        * (k * e.rho)
        / (radius * e.r_outer - e.rho * fm.inner_radius)
    )
    if jordan_shift > 0:
        gamma *= math.e * math.exp(alpha * jordan_shift)
    return DecayBound(gamma=gamma, alpha=alpha, alpha_prime=alpha_prime,
                      qsrank=k, pole_shift=t * k)


def _radius_grid(fm):
    lo = fm.inner_radius * (1.0 + 1e-6)
    hi = fm.admissible_r_max
    if not math.isfinite(hi):
        hi = fm.inner_radius * math.exp(_ENTIRE_LOG_CAP)
    if not (hi > lo):
        raise InvalidGeometryError(
            f"no admissible radius: holomorphy reach {fm.admissible_r_max} "
            f"barely exceeds the argument scale {fm.inner_radius}"
        )
    steps = (np.arange(_RADIUS_GRID_POINTS) + 1.0) / _RADIUS_GRID_POINTS
    return lo * (hi / lo) ** steps


def _grid_decay_bounds(fm, e, k, kappa_max, norm_shifted, t, jordan_shift, crouzeix_c):
    pairs = []
    for r in _radius_grid(fm):
        try:
            db = offdiag_decay_bound(e, fm, k, kappa_max, norm_shifted, t=t,
                                     jordan_shift=jordan_shift,
                                     crouzeix_c=crouzeix_c, radius=float(r))
        except (InvalidGeometryError, OverflowError):
            continue
        pairs.append((float(r), db))
    if not pairs:
        raise InvalidGeometryError("no radius on the grid produced a valid bound")
    return pairs


def optimize_bound_radius(fm, e, l, k=1, kappa_max=1.0, norm_shifted=1.0, t=0,
                          jordan_shift=0, crouzeix_c=None):
    """Pick the modulus radius minimizing the decay bound at index l.

    Scans a 256-point logarithmic grid over (inner_radius*(1+1e-6),
    admissible_r_max]; for entire functions the grid is capped at
    inner_radius * e^30 to avoid overflow. Radii where the bound overflows
    or the modulus is unbounded are skipped. Returns (radius, bound value).
    The argmin does not depend on the multiplicative constants, so the
    defaults are fine when only the radius is wanted.
    """
    pairs = _grid_decay_bounds(fm, e, k, kappa_max, norm_shifted, t,
                               jordan_shift, crouzeix_c)
    best_r, best_val = None, math.inf
    for r, db in pairs:
        val = db.bound(l)
        if math.isfinite(val) and val < best_val:
            best_r, best_val = r, float(val)
    if best_r is None:
        raise InvalidGeometryError("no radius on the grid produced a finite bound")
    return best_r, best_val


def optimize_bound_curve(fm, e, l_values, k=1, kappa_max=1.0, norm_shifted=1.0,
                         t=0, jordan_shift=0, crouzeix_c=None):
    """Per-index optimized bound values over a shared radius grid.

    Equivalent to calling optimize_bound_radius for each l but evaluates
    the grid of DecayBound curves once. Returns a list of (radius, value)
    pairs aligned with l_values.
    """
    pairs = _grid_decay_bounds(fm, e, k, kappa_max, norm_shifted, t,
                               jordan_shift, crouzeix_c)
    out = []
    for l in l_values:
        best_r, best_val = None, math.inf
        for r, db in pairs:
            val = db.bound(l)
            if math.isfinite(val) and val < best_val:
                best_r, best_val = r, float(val)
        if best_r is None:
            raise InvalidGeometryError(
                f"no radius on the grid produced a finite bound at l={l}"
            )
        out.append((best_r, best_val))
    return out


def krylov_matrix(a, b, n):
    """Krylov matrix [b, Ab, ..., A^{n-1} b] with n columns."""
    a = as_square_matrix(a)
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if b.shape[0] != a.shape[0]:
        raise InvalidInputError(
            f"vector of length {b.shape[0]} does not match matrix order {a.shape[0]}"
        )
    if n < 1:
        raise InvalidInputError(f"column count must be >= 1, got {n}")
    out = np.empty((a.shape[0], n), dtype=np.complex128)
    out[:, 0] = b
    for j in range(1, n):
        out[:, j] = a @ out[:, j - 1]
    return out


def horner_matrix(a, b, coeffs):
    """Horner-shift matrix of the polynomial sum_{n=1..s} coeffs[n-1] A^n b.

    Column j (1-based) holds sum_{n=0}^{j-1} coeffs[s-j+n] A^n b, so the
    degree grows rightward and A times the last column is the polynomial
    applied to b.
    """
    a = as_square_matrix(a)
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if b.shape[0] != a.shape[0]:
        raise InvalidInputError(
            f"vector of length {b.shape[0]} does not match matrix order {a.shape[0]}"
        )
    coeffs = [complex(c) for c in coeffs]
    s = len(coeffs)
    if s < 1:
        raise InvalidInputError("need at least one coefficient")
    out = np.empty((a.shape[0], s), dtype=np.complex128)
    out[:, 0] = coeffs[s - 1] * b
    for j in range(1, s):
        out[:, j] = a @ out[:, j - 1] + coeffs[s - j - 1] * b
    return out


def krylov_qr_entry_bound(e, kappa, b_norm, r, i, j):
    """Bound |R_ij| of the QR factor of a Krylov matrix, zero-based (i, j).

    c(r) * kappa * (rho/r)^i * delta(r)^j, with c(r) =
    total_rotation / (delta(r) pi (1 - rho/r)) * b_norm, valid for any
    level r strictly between rho and r_outer. Zero-based indexing is the
    conservative reading: the row exponent matches the projection argument
    exactly and the column exponent gives away one factor of delta.
    """
    if not (e.rho < r < e.r_outer):
        raise InvalidInputError(
            f"level r={r} must lie strictly inside ({e.rho}, {e.r_outer})"
        )
    if kappa < 1.0:
        raise InvalidInputError(f"kappa must be >= 1, got {kappa}")
    if b_norm < 0.0 or i < 0 or j < 0:
        raise InvalidInputError("b_norm, i, j must be nonnegative")
    delta = float(e.delta_of(r))
    c = e.total_rotation / (delta * math.pi * (1.0 - e.rho / r)) * b_norm
    return c * kappa * (e.rho / r) ** i * delta**j


def horner_qr_entry_bound(e, kappa, b_norm, gamma_hat, rho_hat, s, i, j):
    """Bound |R_ij| of the QR factor of a Horner matrix.

    The row index i is zero-based, the column index j one-based (j = s is
    the full-polynomial column). Needs coefficient decay
    |coeffs[n-1]| <= gamma_hat * rho_hat^n with rho_hat in (0, 1).
    Evaluates c * kappa * (rho/r_outer)^i * rho_hat^(i + s - j) with
    c = rho_hat gamma_hat total_rotation /
    (pi (1 - rho_hat)(1 - rho/r_outer)) * b_norm.
    """
    if not (0.0 < rho_hat < 1.0):
        raise InvalidInputError(f"rho_hat must be in (0, 1), got {rho_hat}")
    if kappa < 1.0:
        raise InvalidInputError(f"kappa must be >= 1, got {kappa}")
    if s < 1:
        raise InvalidInputError(f"polynomial length must be >= 1, got {s}")
    if not (1 <= j <= s):
        raise InvalidInputError(f"column index must lie in 1..{s}, got {j}")
    if b_norm < 0.0 or gamma_hat < 0.0 or i < 0:
        raise InvalidInputError("b_norm, gamma_hat, i must be nonnegative")
    c = (rho_hat * gamma_hat * e.total_rotation * b_norm
         / (math.pi * (1.0 - rho_hat) * (1.0 - e.rho / e.r_outer)))
    return c * kappa * (e.rho / e.r_outer) ** i * rho_hat ** (i + (s - j))


def outer_product_singular_bound(e, kappa1, kappa2, b1_norm, b2_norm, gamma_hat,
                                 big_r, l):
    """Bound sigma_l of a Krylov-times-Horner outer product, zero-based l.

    Needs coefficient decay |coeffs[n-1]| <= gamma_hat * R^{-n} with R > 1
    and both factors enclosed by e at unit scale. Evaluates
    gamma * exp(-(alpha+alpha')(l+1)) with alpha = log(r_outer/rho),
    alpha' = log(R), gamma = gamma_hat kappa1 kappa2 b1_norm b2_norm
    times the geometry factor at R.
    """
    if not (big_r > 1.0):
        raise InvalidInputError(f"coefficient radius must exceed 1, got {big_r}")
    if kappa1 < 1.0 or kappa2 < 1.0:
        raise InvalidInputError("condition numbers must be >= 1")
    if b1_norm < 0.0 or b2_norm < 0.0 or gamma_hat < 0.0 or l < 0:
        raise InvalidInputError("norms, gamma_hat, l must be nonnegative")
    alpha = math.log(e.r_outer / e.rho)
    alpha_prime = math.log(big_r)
    gamma = gamma_hat * kappa1 * kappa2 * b1_norm * b2_norm * geometry_factor(e, big_r)
    return gamma * math.exp(-(alpha + alpha_prime) * (l + 1))


def reversed_product_tail_bound(c, n, alpha, beta, l):
    """Bound sigma_l of the reversed-factor tail product, zero-based l.

    For X = U Pi_n V* (Pi_n flips the n columns) whose QR factors R_U, R_V
    obey the one-based entry bound |R_ij| <= c e^{-alpha i} e^{-beta j}:
    evaluates gamma * exp(-alpha (l+1)) with
    gamma = c^2 n e^{-(n+1) beta} / (1 - e^{-2 alpha}).
    """
    if c < 0.0:
        raise InvalidInputError(f"entry constant must be >= 0, got {c}")
    if n < 1:
        raise InvalidInputError(f"flip order must be >= 1, got {n}")
    if not (alpha > 0.0 and beta > 0.0):
        raise InvalidInputError("decay rates alpha, beta must be positive")
    if l < 0:
        raise InvalidInputError(f"index must be >= 0, got {l}")
    gamma = c * c * n * math.exp(-(n + 1) * beta) / (1.0 - math.exp(-2.0 * alpha))
    return gamma * math.exp(-alpha * (l + 1))


def composition_singular_bound(mode, l, k, gamma=None, alpha=None, sigmas=None):
    """Closed-form singular-value bounds for composed low-rank structures.

    mode "dyadSum": sigma_l of an infinite sum of rank-k terms with norm
    decay gamma e^{-alpha j} (j = 0, 1, ...):
    gamma/(1 - e^{-alpha}) * exp(-alpha (l-k)/k).
    mode "rankKSum": sigma_l of a sum of k matrices each obeying
    sigma_j <= gamma e^{-alpha j}: same exponent with constant
    k gamma/(1 - e^{-alpha}).
    mode "rankShift": sigma_l of A + B with rank(B) <= k, given the
    singular values of A (1-based, treated as complete): sigma_{l-k}(A),
    infinite when l <= k, zero past the listed spectrum.
    """
    if mode in ("dyadSum", "rankKSum"):
        if gamma is None or alpha is None:
            raise InvalidInputError(f"mode {mode!r} needs gamma and alpha")
        if gamma < 0.0 or not (alpha > 0.0):
            raise InvalidInputError("need gamma >= 0 and alpha > 0")
        if k < 1:
            raise InvalidInputError(f"rank parameter must be >= 1, got {k}")
        constant = gamma / (1.0 - math.exp(-alpha))
        if mode == "rankKSum":
            constant *= k
        return constant * math.exp(-alpha * (l - k) / k)
    if mode == "rankShift":
        if sigmas is None:
            raise InvalidInputError("mode 'rankShift' needs the sigmas of A")
        if k < 0:
            raise InvalidInputError(f"rank parameter must be >= 0, got {k}")
        if l < 1:
            raise InvalidInputError(f"singular value index is 1-based, got {l}")
        idx = l - k
        if idx < 1:
            return math.inf
        if idx > len(sigmas):
            return 0.0
        return float(sigmas[idx - 1])
    raise InvalidInputError(
        f"unknown mode {mode!r}; expected 'dyadSum', 'rankKSum', or 'rankShift'"
    )


def reconstruct_offdiag_block(a, split, coeffs, k=None):
    """Lower-left block of sum_{n=1..s} coeffs[n-1] A^n via Krylov x Horner.

    Writes the lower-left block of A as a sum of SVD dyads and assembles,
    for each dyad, the Krylov matrix of the trailing diagonal block against
    the column-flipped Horner matrix of A transposed. The result equals the
    corresponding block of the matrix polynomial exactly (an algebraic
    identity, independent of any decay assumption). Declaring k caps the
    accepted rank of the lower-left block; a larger measured rank raises.
    """
    a = as_square_matrix(a)
    m = a.shape[0]
    if not (1 <= split < m):
        raise InvalidInputError(f"split {split} must lie in [1, {m - 1}]")
    coeffs = [complex(c) for c in coeffs]
    if not coeffs:
        raise InvalidInputError("need at least one coefficient")
    s = len(coeffs)

    corner = a[split:, :split]
    svd = truncated_svd(corner, 1e-13)
    if k is not None and svd.rank > k:
        raise InvalidInputError(
            f"lower-left block has rank {svd.rank}, exceeding the declared {k}"
        )
    trailing = a[split:, split:]
    a_t = a.T

    block = np.zeros((m - split, split), dtype=np.complex128)
    for i in range(svd.rank):
        u = svd.values[i] * svd.left[:, i]
        padded = np.zeros(m, dtype=np.complex128)
        padded[:split] = np.conj(svd.right[:, i])
        kry = krylov_matrix(trailing, u, s)
        horn = horner_matrix(a_t, padded, coeffs)
        block += kry @ horn[:split, ::-1].T
    return block


def bound_curve_csv(db, l_max, sigmas=None):
    """CSV rendering of a bound curve: columns l,bound[,sigma_l]."""
    if l_max < 1:
        raise InvalidInputError(f"l_max must be >= 1, got {l_max}")
    header = "l,bound,sigma_l" if sigmas is not None else "l,bound"
    lines = [header]
    for l in range(1, l_max + 1):
        row = f"{l},{db.bound(l):.17g}"
        if sigmas is not None:
            val = float(sigmas[l - 1]) if l - 1 < len(sigmas) else 0.0
            row += f",{val:.17g}"
        lines.append(row)
    return "\n".join(lines) + "\n"
