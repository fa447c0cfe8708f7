"""Base manifolds M and products M x R.

Two representations share one evaluation contract:

* ``chart``   -- points are n-vectors in a coordinate chart, the metric is a
  closed-form matrix function G(x) (optionally with closed-form derivatives,
  otherwise central differences supply them).
* ``quadric`` -- points are (n+1)-vectors in a flat (pseudo-)Euclidean space,
  constrained to <p,p>_flat = level.  Tangent inner products use the flat
  signature metric; extrinsic second derivatives paired against tangent
  normals realize the Levi-Civita connection.

The product M x R appends one coordinate (the height t) and a +-1 metric
block: +1 for the Riemannian product, -1 for the Lorentzian one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, GeometryError, SpecError

RIEMANNIAN = 1
LORENTZIAN = -1

DEFAULT_FD_STEP = 1e-4
DEFAULT_GEO_STEP = 1e-3


@dataclass(frozen=True)
class AmbientSpace:
    """A Riemannian n-manifold, chart-based or quadric-embedded."""

    kind: str                      # "chart" | "quadric"
    dim: int                       # manifold dimension n
    name: str = ""
    # chart representation
    metric_fn: Optional[Callable] = None        # x -> (n,n) symmetric
    metric_grad_fn: Optional[Callable] = None   # x -> (n,n,n), dG[i,j,l] = d_l g_ij
    domain_predicate: Optional[Callable] = None  # x -> bool
    # quadric representation
    flat_signature: Optional[np.ndarray] = None  # (+-1,...) length n+1
    level: float = 0.0

    def __post_init__(self):
        if self.kind not in ("chart", "quadric"):
            raise SpecError(f"unknown ambient kind {self.kind!r}")
        if self.dim < 2:
            raise SpecError("ambient dimension must be >= 2")

    @property
    def rep_dim(self) -> int:
        """Length of a point vector in the active representation."""
        return self.dim if self.kind == "chart" else self.dim + 1

    @property
    def flat_dim(self) -> int:
        if self.kind != "quadric":
            raise GeometryError("flat_dim is defined for quadric spaces only")
        return self.dim + 1

    def flat_metric(self) -> np.ndarray:
        return np.diag(self.flat_signature.astype(float))

    def in_domain(self, x) -> bool:
        if self.kind == "quadric":
            return abs(float(np.asarray(x) @ self.flat_metric() @ np.asarray(x))
                       - self.level) <= 1e-8
        if self.domain_predicate is None:
            return True
        return bool(self.domain_predicate(np.asarray(x, dtype=float)))

    def tangent_metric(self, p) -> np.ndarray:
        """Inner-product matrix for tangent components at p."""
        if self.kind == "quadric":
            return self.flat_metric()
        return metric_at(self, p)


@dataclass(frozen=True)
class AmbientProduct:
    """M x R with Riemannian (+1) or Lorentzian (-1) time block."""

    base: AmbientSpace
    time_sign: int = RIEMANNIAN

    def __post_init__(self):
        if self.time_sign not in (RIEMANNIAN, LORENTZIAN):
            raise SpecError("time_sign must be +1 (riemannian) or -1 (lorentzian)")

    @property
    def rep_dim(self) -> int:
        return self.base.rep_dim + 1

    @property
    def name(self) -> str:
        cross = "xR" if self.time_sign == RIEMANNIAN else "xR_L"
        return self.base.name + cross

    def lorentzian(self) -> "AmbientProduct":
        return AmbientProduct(self.base, LORENTZIAN)

    def vertical(self) -> np.ndarray:
        """Components of d_t in the product representation."""
        e = np.zeros(self.rep_dim)
        e[-1] = 1.0
        return e

    def tangent_metric(self, q) -> np.ndarray:
        return product_metric_at(self, q)


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector attached to a point of M or M x R."""

    base_point: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        if len(self.base_point) != len(self.components):
            raise GeometryError("component length must match the point representation")


@dataclass(frozen=True)
class ChristoffelTensor:
    """Gamma^k_{ij} at a chart point, symmetric in (i,j) by construction."""

    point: np.ndarray
    entries: np.ndarray  # shape (n, n, n), indexed [k, i, j]


# ---------------------------------------------------------------------------
# space constructors
# ---------------------------------------------------------------------------

def _halfspace_metric(x):
    n = len(x)
    return np.eye(n) / x[-1] ** 2


def _halfspace_metric_grad(x):
    n = len(x)
    dG = np.zeros((n, n, n))
    dG[:, :, n - 1] = -2.0 * np.eye(n) / x[-1] ** 3
    return dG


def _nil3_metric(x):
    # dx^2 + dy^2 + (dz - x dy)^2
    xx = x[0]
    return np.array([[1.0, 0.0, 0.0],
                     [0.0, 1.0 + xx * xx, -xx],
                     [0.0, -xx, 1.0]])


def _nil3_metric_grad(x):
    xx = x[0]
    dG = np.zeros((3, 3, 3))
    dG[1, 1, 0] = 2.0 * xx
    dG[1, 2, 0] = dG[2, 1, 0] = -1.0
    return dG


def _sol3_metric(x):
    z = x[2]
    return np.diag([np.exp(2 * z), np.exp(-2 * z), 1.0])


def _sol3_metric_grad(x):
    z = x[2]
    dG = np.zeros((3, 3, 3))
    dG[0, 0, 2] = 2.0 * np.exp(2 * z)
    dG[1, 1, 2] = -2.0 * np.exp(-2 * z)
    return dG


def _berger_metric(delta):
    # Hopf torus chart (tau, beta, gamma) on tau in (0, pi/2):
    # round metric dtau^2 + cos^2 dbeta^2 + sin^2 dgamma^2, Hopf field
    # V = d_beta + d_gamma, and g_delta = g_round + (delta^2-1) <.,V><.,V>.
    m = delta * delta - 1.0

    def G(x):
        c2 = np.cos(x[0]) ** 2
        s2 = np.sin(x[0]) ** 2
        return np.array([[1.0, 0.0, 0.0],
                         [0.0, c2 + m * c2 * c2, m * c2 * s2],
                         [0.0, m * c2 * s2, s2 + m * s2 * s2]])

    def dG(x):
        t = x[0]
        c, s = np.cos(t), np.sin(t)
        dc2 = -2 * c * s        # d cos^2
        ds2 = 2 * s * c         # d sin^2
        out = np.zeros((3, 3, 3))
        out[1, 1, 0] = dc2 + m * 2 * c * c * dc2
        out[2, 2, 0] = ds2 + m * 2 * s * s * ds2
        out[1, 2, 0] = out[2, 1, 0] = m * (dc2 * s * s + c * c * ds2)
        return out

    return G, dG


def make_space(kind: str, **params) -> AmbientSpace:
    """Build one of the supported base manifolds.

    Kinds: euclidean(n), sphere_quadric(n), hyperbolic_quadric(n),
    hyperbolic_halfspace(n), nil3, sol3, berger(delta).
    """
    if kind == "euclidean":
        n = int(params.get("n", 2))
        if n < 2:
            raise SpecError("euclidean: n >= 2 required")
        eye = np.eye(n)
        return AmbientSpace("chart", n, name=f"R{n}",
                            metric_fn=lambda x, _I=eye: _I,
                            metric_grad_fn=lambda x, _n=n: np.zeros((_n, _n, _n)),
                            domain_predicate=lambda x: True)
    if kind == "sphere_quadric":
        n = int(params.get("n", 2))
        if n < 2:
            raise SpecError("sphere_quadric: n >= 2 required")
        return AmbientSpace("quadric", n, name=f"S{n}",
                            flat_signature=np.ones(n + 1), level=1.0)
    if kind == "hyperbolic_quadric":
        n = int(params.get("n", 2))
        if n < 2:
            raise SpecError("hyperbolic_quadric: n >= 2 required")
        sig = np.ones(n + 1)
        sig[-1] = -1.0
        return AmbientSpace("quadric", n, name=f"H{n}",
                            flat_signature=sig, level=-1.0)
    if kind == "hyperbolic_halfspace":
        n = int(params.get("n", 2))
        if n < 2:
            raise SpecError("hyperbolic_halfspace: n >= 2 required")
        return AmbientSpace("chart", n, name=f"H{n}_halfspace",
                            metric_fn=_halfspace_metric,
                            metric_grad_fn=_halfspace_metric_grad,
                            domain_predicate=lambda x: x[-1] > 0.0)
    if kind == "nil3":
        return AmbientSpace("chart", 3, name="Nil3",
                            metric_fn=_nil3_metric,
                            metric_grad_fn=_nil3_metric_grad,
                            domain_predicate=lambda x: True)
    if kind == "sol3":
        return AmbientSpace("chart", 3, name="Sol3",
                            metric_fn=_sol3_metric,
                            metric_grad_fn=_sol3_metric_grad,
                            domain_predicate=lambda x: True)
    if kind == "berger":
        delta = float(params.get("delta", 0.8))
        if delta <= 0:
            raise SpecError("berger: delta > 0 required")
        G, dG = _berger_metric(delta)
        margin = 1e-3
        return AmbientSpace("chart", 3, name=f"BergerS3(delta={delta:g})",
                            metric_fn=G, metric_grad_fn=dG,
                            domain_predicate=lambda x, _m=margin:
                                _m < x[0] < np.pi / 2 - _m)
    raise SpecError(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# metric / connection / field operators (chart representation)
# ---------------------------------------------------------------------------

def metric_at(space: AmbientSpace, p) -> np.ndarray:
    """G(p), symmetric positive definite. Chart spaces only."""
    if space.kind != "chart":
        raise GeometryError("metric_at is for chart spaces; quadrics use the flat metric")
    p = np.asarray(p, dtype=float)
    if not space.in_domain(p):
        raise DomainError(f"point {p} outside chart domain of {space.name}")
    G = np.asarray(space.metric_fn(p), dtype=float)
    return 0.5 * (G + G.T)


def _check_margin(space: AmbientSpace, p, margin: float):
    if space.domain_predicate is None:
        return
    for i in range(space.dim):
        for sgn in (-1.0, 1.0):
            q = np.array(p, dtype=float)
            q[i] += sgn * margin
            if not space.domain_predicate(q):
                raise DomainError(
                    f"point {p} within {margin:g} of the chart boundary of {space.name}")


def metric_grad_at(space: AmbientSpace, p, step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """dG[i,j,l] = d g_ij / d x_l, closed form if available else central FD."""
    p = np.asarray(p, dtype=float)
    if space.metric_grad_fn is not None:
        return np.asarray(space.metric_grad_fn(p), dtype=float)
    _check_margin(space, p, 2 * step)
    n = space.dim
    dG = np.zeros((n, n, n))
    for l in range(n):
        e = np.zeros(n)
        e[l] = step
        dG[:, :, l] = (space.metric_fn(p + e) - space.metric_fn(p - e)) / (2 * step)
    return dG


def christoffel_at(space: AmbientSpace, p, step: float = DEFAULT_FD_STEP) -> ChristoffelTensor:
    """Levi-Civita Gamma^k_{ij} of a chart metric at p."""
    if space.kind != "chart":
        raise GeometryError("christoffel_at is for chart spaces")
    p = np.asarray(p, dtype=float)
    G = metric_at(space, p)
    dG = metric_grad_at(space, p, step)
    try:
        Gi = np.linalg.inv(G)
    except np.linalg.LinAlgError as exc:
        raise GeometryError(f"singular metric at {p}") from exc
    # Gamma^k_ij = (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij),  dG[a,b,c] = d_c g_ab
    term = (np.einsum("jli->lij", dG)      # d_i g_jl
            + np.einsum("ilj->lij", dG)    # d_j g_il
            - np.einsum("ijl->lij", dG))   # d_l g_ij
    gam = 0.5 * np.einsum("kl,lij->kij", Gi, term)
    gam = 0.5 * (gam + gam.transpose(0, 2, 1))
    return ChristoffelTensor(point=p, entries=gam)


def gradient_at(space: AmbientSpace, u: Callable, p, step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Base-manifold gradient components G^{-1} du at a chart point."""
    if space.kind != "chart":
        raise GeometryError("gradient_at is for chart spaces")
    p = np.asarray(p, dtype=float)
    _check_margin(space, p, 2 * step)
    n = space.dim
    du = np.zeros(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        du[i] = (u(p + e) - u(p - e)) / (2 * step)
    if not np.all(np.isfinite(du)):
        raise GeometryError(f"non-finite field values near {p}")
    return np.linalg.solve(metric_at(space, p), du)


def laplace_beltrami(space: AmbientSpace, u: Callable, p,
                     step: float = DEFAULT_FD_STEP) -> float:
    """(1/sqrt det G) d_i ( sqrt det G  G^{ij} d_j u ) by central differences."""
    if space.kind != "chart":
        raise GeometryError("laplace_beltrami is for chart spaces")
    p = np.asarray(p, dtype=float)
    _check_margin(space, p, 2 * step)
    n = space.dim

    def flux(x, i):
        G = metric_at(space, x)
        sq = np.sqrt(np.linalg.det(G))
        du = np.zeros(n)
        for j in range(n):
            e = np.zeros(n)
            e[j] = step
            du[j] = (u(x + e) - u(x - e)) / (2 * step)
        return sq * np.linalg.solve(G, du)[i]

    total = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        total += (flux(p + e, i) - flux(p - e, i)) / (2 * step)
    val = total / np.sqrt(np.linalg.det(metric_at(space, p)))
    if not np.isfinite(val):
        raise GeometryError(f"non-finite Laplacian at {p}")
    return float(val)


# ---------------------------------------------------------------------------
# geodesic flow
# ---------------------------------------------------------------------------

def geodesic_flow(space: AmbientSpace, p, v, length: float,
                  step: float = DEFAULT_GEO_STEP):
    """Flow (p, v) along the unit-speed geodesic for the given arc length.

    Chart spaces integrate x'' = -Gamma(x)(x',x') by RK4 at fixed step;
    quadric spaces integrate the projected flat equation
    p'' = -(<p',p'>/level) p and reproject each step.
    Returns (point, velocity); velocity stays unit within tolerance.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    Gp = space.tangent_metric(p)
    speed0 = float(v @ Gp @ v)
    if abs(speed0 - 1.0) > 1e-8:
        raise GeometryError("geodesic_flow requires a unit initial velocity")
    if length == 0.0:
        return p.copy(), v.copy()
    nsteps = max(1, int(np.ceil(abs(length) / step)))
    h = length / nsteps

    if space.kind == "chart":
        def acc(x, w):
            gam = christoffel_at(space, x).entries
            return -np.einsum("kij,i,j->k", gam, w, w)
    else:
        flat = space.flat_metric()
        lev = space.level

        def acc(x, w):
            return -(float(w @ flat @ w) / lev) * x

    x, w = p.copy(), v.copy()
    for _ in range(nsteps):
        k1x, k1v = w, acc(x, w)
        k2x, k2v = w + 0.5 * h * k1v, acc(x + 0.5 * h * k1x, w + 0.5 * h * k1v)
        k3x, k3v = w + 0.5 * h * k2v, acc(x + 0.5 * h * k2x, w + 0.5 * h * k2v)
        k4x, k4v = w + h * k3v, acc(x + h * k3x, w + h * k3v)
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        w = w + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        if space.kind == "quadric":
            lev = space.level
            flat = space.flat_metric()
            x = x * np.sqrt(abs(lev) / abs(float(x @ flat @ x)))
        elif not space.in_domain(x):
            raise DomainError(f"geodesic left the chart domain of {space.name} at {x}")
    return x, w


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def product_metric_at(prod: AmbientProduct, q) -> np.ndarray:
    """Block-diagonal product metric (base metric or flat signature) + time_sign."""
    q = np.asarray(q, dtype=float)
    d = prod.rep_dim
    out = np.zeros((d, d))
    if prod.base.kind == "chart":
        out[:-1, :-1] = metric_at(prod.base, q[:-1])
    else:
        out[:-1, :-1] = prod.base.flat_metric()
    out[-1, -1] = float(prod.time_sign)
    return out


def lorentz_pair(prod: AmbientProduct, q, X, Y) -> float:
    """<X,Y>_L = <X,Y> - 2<X,d_t><Y,d_t> at a product point."""
    G = product_metric_at(AmbientProduct(prod.base, RIEMANNIAN), q)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return float(X @ G @ Y - 2.0 * X[-1] * Y[-1])
