"""Pointwise geometry of parametrized hypersurfaces.

Everything is computed from a two-jet of the immersion at a parameter point:
induced metric, unit normal (null space of J^T G), second fundamental form
(with Christoffel correction in charts, extrinsic flat pairing on quadrics),
shape operator A = g^{-1} b, non-normalized mean curvature H = trace A, the
angle function theta = <N, d_t>, and the height gradient in surface
coordinates.  The same core serves hypersurfaces of the product M x R and
hypersurfaces of M itself (parallel-family leaves, horizontal sections).

Sign conventions: A X = -nabla_X N, so the unit sphere in R^3 with outward
normal has H = -2.  phi = -(1 - theta^2)^{-1/2} < 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .ambient import (AmbientProduct, AmbientSpace, LORENTZIAN, RIEMANNIAN,
                      christoffel_at, gradient_at, laplace_beltrami,
                      metric_at, product_metric_at)
from .errors import DomainError, GeometryError, HorizontalPointError

DEFAULT_JET_STEP = 1e-4
HESS_FROM_JAC_STEP = 1e-6
RANK_TOL = 1e-10
HORIZONTAL_TOL = 1e-12


@dataclass
class Immersion:
    """A parametrized hypersurface of M x R (or of M itself).

    ``eval`` maps a parameter point (m-vector) to a point in the ambient
    representation; ``jacobian``/``hessian`` are optional closed forms.
    ``orient`` supplies a reference normal direction fixing the sign of the
    computed unit normal.  ``section_axis`` marks a parameter axis such that
    the height depends on that parameter alone (horizontal sections are then
    parameter slices).
    """

    ambient: Union[AmbientProduct, AmbientSpace]
    param_dim: int
    eval: Callable
    jacobian: Optional[Callable] = None
    hessian: Optional[Callable] = None
    domain: Optional[Callable] = None
    orient: Optional[Callable] = None      # (u, point) -> reference normal
    base_param: Optional[np.ndarray] = None
    section_axis: Optional[int] = None
    default_ranges: Optional[list] = None  # [(lo, hi)] per parameter axis
    name: str = ""
    doc: str = ""

    @property
    def rep_dim(self) -> int:
        return self.ambient.rep_dim

    @property
    def is_product(self) -> bool:
        return isinstance(self.ambient, AmbientProduct)


@dataclass
class ImmersionJet:
    u: np.ndarray
    value: np.ndarray
    J: np.ndarray    # (rep_dim, m), columns dPsi/du_i
    H2: np.ndarray   # (m, m, rep_dim), symmetric in (i, j)


def jet(surf: Immersion, u, step: float = DEFAULT_JET_STEP) -> ImmersionJet:
    """Two-jet of the immersion at u.

    Closed forms are used when provided.  With only a closed-form jacobian,
    second derivatives come from central differences of the jacobian (step
    1e-6); with neither, first and second derivatives use standard
    second-order stencils of ``eval`` at the given step.
    """
    u = np.asarray(u, dtype=float)
    m = surf.param_dim
    if surf.domain is not None:
        for i in range(m):
            for sgn in (-1.0, 1.0):
                q = u.copy()
                q[i] += sgn * 2 * step
                if not surf.domain(q):
                    raise DomainError(f"parameter {u} within 2h of the domain boundary")
    value = np.asarray(surf.eval(u), dtype=float)
    if not np.all(np.isfinite(value)):
        raise GeometryError(f"non-finite immersion value at {u}")
    d = len(value)

    if surf.jacobian is not None:
        J = np.asarray(surf.jacobian(u), dtype=float)
    else:
        J = np.zeros((d, m))
        for i in range(m):
            e = np.zeros(m)
            e[i] = step
            J[:, i] = (np.asarray(surf.eval(u + e)) - np.asarray(surf.eval(u - e))) / (2 * step)

    if surf.hessian is not None:
        H2 = np.asarray(surf.hessian(u), dtype=float)
    elif surf.jacobian is not None:
        h = HESS_FROM_JAC_STEP
        H2 = np.zeros((m, m, d))
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            H2[i, :, :] = ((np.asarray(surf.jacobian(u + e), dtype=float)
                            - np.asarray(surf.jacobian(u - e), dtype=float)) / (2 * h)).T
    else:
        H2 = np.zeros((m, m, d))
        for i in range(m):
            e = np.zeros(m)
            e[i] = step
            H2[i, i] = (np.asarray(surf.eval(u + e)) - 2 * value
                        + np.asarray(surf.eval(u - e))) / step ** 2
        for i in range(m):
            for j in range(i + 1, m):
                ei = np.zeros(m)
                ei[i] = step
                ej = np.zeros(m)
                ej[j] = step
                H2[i, j] = (np.asarray(surf.eval(u + ei + ej))
                            - np.asarray(surf.eval(u + ei - ej))
                            - np.asarray(surf.eval(u - ei + ej))
                            + np.asarray(surf.eval(u - ei - ej))) / (4 * step * step)
                H2[j, i] = H2[i, j]
    H2 = 0.5 * (H2 + H2.transpose(1, 0, 2))
    if not (np.all(np.isfinite(J)) and np.all(np.isfinite(H2))):
        raise GeometryError(f"non-finite derivatives at {u}")
    return ImmersionJet(u=u, value=value, J=J, H2=H2)


# ---------------------------------------------------------------------------
# ambient plumbing shared by the Riemannian and Lorentzian paths
# ---------------------------------------------------------------------------

def _ambient_pieces(amb, point, time_sign=None):
    """(G, christoffels-or-None, quadric-constraint-row-or-None) at a point."""
    if isinstance(amb, AmbientProduct):
        ts = amb.time_sign if time_sign is None else time_sign
        base = amb.base
        d = amb.rep_dim
        G = np.zeros((d, d))
        if base.kind == "chart":
            G[:-1, :-1] = metric_at(base, point[:-1])
            G[-1, -1] = float(ts)
            gam = np.zeros((d, d, d))
            gam[:-1, :-1, :-1] = christoffel_at(base, point[:-1]).entries
            return G, gam, None
        G[:-1, :-1] = base.flat_metric()
        G[-1, -1] = float(ts)
        row = np.zeros(d)
        row[:-1] = base.flat_metric() @ point[:-1]
        return G, None, row
    # hypersurface of M itself
    base = amb
    if base.kind == "chart":
        G = metric_at(base, point)
        gam = christoffel_at(base, point).entries
        return G, gam, None
    G = base.flat_metric()
    row = G @ point
    return G, None, row


def _unit_normal(J, G, constraint_row, orient_ref=None):
    """Solve the 1-dimensional null space of [J^T G; constraint] and normalize."""
    rows = [J.T @ G]
    if constraint_row is not None:
        rows.append(constraint_row[None, :])
    M = np.vstack(rows)
    _, sv, Vt = np.linalg.svd(M)
    d = M.shape[1]
    null_dim = d - np.sum(sv > sv[0] * 1e-10) if sv[0] > 0 else d
    if null_dim != 1:
        raise GeometryError(f"degenerate normal: null space dimension {null_dim}")
    N = Vt[-1]
    nrm2 = float(N @ G @ N)
    if nrm2 <= 0:
        raise GeometryError("normal direction has non-positive length")
    N = N / np.sqrt(nrm2)
    if orient_ref is not None:
        s = float(N @ G @ np.asarray(orient_ref, dtype=float))
        if s < 0:
            N = -N
    else:
        k = int(np.argmax(np.abs(N)))
        if N[k] < 0:
            N = -N
    return N


@dataclass
class HypersurfaceData:
    """Metric, normal and curvature of a hypersurface at one jet."""

    u: np.ndarray
    value: np.ndarray
    J: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    N: np.ndarray
    b: np.ndarray
    A: np.ndarray
    H: float


def hypersurface_data(surf: Immersion, jt: ImmersionJet,
                      orient_ref=None) -> HypersurfaceData:
    """First and second fundamental data of a hypersurface at a jet."""
    G, gam, row = _ambient_pieces(surf.ambient, jt.value)
    J = jt.J
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] < RANK_TOL:
        raise GeometryError(f"immersion jacobian rank-deficient at {jt.u}")
    g = J.T @ G @ J
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise GeometryError(f"induced metric not invertible at {jt.u}") from exc
    ref = orient_ref
    if ref is None and surf.orient is not None:
        ref = surf.orient(jt.u, jt.value)
    N = _unit_normal(J, G, row, ref)
    m = surf.param_dim
    if gam is not None:
        corr = np.einsum("kab,ai,bj->ijk", gam, J, J)
        vecs = jt.H2 + corr
    else:
        vecs = jt.H2
    b = np.einsum("ijk,k->ij", vecs, G @ N)
    b = 0.5 * (b + b.T)
    A = g_inv @ b
    return HypersurfaceData(u=jt.u, value=jt.value, J=J, g=g, g_inv=g_inv,
                            N=N, b=b, A=A, H=float(np.trace(A)))


@dataclass
class FundamentalData(HypersurfaceData):
    """Hypersurface data of a surface in M x R, plus height-function fields.

    ``grad_xi`` and ``T`` hold surface-coordinate components; ``phi`` is
    None at horizontal points (where it is undefined).
    """

    theta: float = 0.0
    grad_xi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    grad_xi_sq: float = 0.0
    phi: Optional[float] = None
    T: Optional[np.ndarray] = None


def fundamental_data(surf: Immersion, jt: ImmersionJet) -> FundamentalData:
    if not surf.is_product:
        raise GeometryError("fundamental_data requires a hypersurface of M x R")
    if surf.ambient.time_sign != RIEMANNIAN:
        raise GeometryError("immersions carry the Riemannian product; "
                            "Lorentzian data comes from lorentz_data")
    core = hypersurface_data(surf, jt)
    dxi = jt.J[-1, :]                       # d(height)/du_i
    w = core.g_inv @ dxi
    wsq = float(dxi @ w)
    theta = float(core.N[-1])               # <N, d_t>, product metric block-diagonal
    horizontal = 1.0 - theta * theta <= HORIZONTAL_TOL
    phi = None if horizontal else -1.0 / np.sqrt(1.0 - theta * theta)
    T = None if wsq <= HORIZONTAL_TOL else w / np.sqrt(wsq)
    return FundamentalData(u=core.u, value=core.value, J=core.J, g=core.g,
                           g_inv=core.g_inv, N=core.N, b=core.b, A=core.A,
                           H=core.H, theta=theta, grad_xi=w, grad_xi_sq=wsq,
                           phi=phi, T=T)


def asymptotic_residual(fd: FundamentalData) -> float:
    """<A grad xi, grad xi>; zero characterizes the helicoid condition."""
    return float(fd.grad_xi @ fd.b @ fd.grad_xi)


def principal_data(fd: FundamentalData, tol: float = 1e-10):
    """(lambda, residual) of grad xi as a candidate principal direction."""
    if fd.grad_xi_sq < tol:
        raise HorizontalPointError("principal check is vacuous at a horizontal point")
    w = fd.grad_xi
    lam = float(w @ fd.b @ w) / fd.grad_xi_sq
    r = fd.A @ w - lam * w
    residual = float(np.sqrt(r @ fd.g @ r))
    return lam, residual


def section_mean_curvature(fd: FundamentalData) -> float:
    """H of the horizontal section through this point: phi (H - <AT,T>)."""
    if fd.phi is None or fd.T is None:
        raise HorizontalPointError("section curvature undefined at a horizontal point")
    att = float(fd.T @ fd.b @ fd.T)
    return fd.phi * (fd.H - att)


# ---------------------------------------------------------------------------
# Lorentzian data
# ---------------------------------------------------------------------------

def involution(X) -> np.ndarray:
    """Phi(X) = X - 2 <X, d_t> d_t in product components."""
    Y = np.array(X, dtype=float)
    Y[-1] = -Y[-1]
    return Y


@dataclass
class LorentzData:
    causal: float                  # 2 theta^2 - 1
    mu: Optional[float]
    N_L: Optional[np.ndarray]
    g_L: Optional[np.ndarray]
    A_L: Optional[np.ndarray]
    H_L_direct: Optional[float]
    H_L_identity: Optional[float]


def lorentz_data(surf: Immersion, jt: ImmersionJet, fd: FundamentalData,
                 tol: float = 1e-10) -> LorentzData:
    """Lorentzian normal, shape operator and mean curvature at a spacelike point.

    H_L_direct repeats the extrinsic computation with the Lorentzian product
    metric and H_L = -trace A_L; H_L_identity evaluates
    mu (1 - mu^2) <AT,T> - mu H.
    """
    causal = 2.0 * fd.theta ** 2 - 1.0
    if causal <= tol:
        return LorentzData(causal=causal, mu=None, N_L=None, g_L=None,
                           A_L=None, H_L_direct=None, H_L_identity=None)
    mu = -1.0 / np.sqrt(causal)
    N_L = mu * involution(fd.N)
    G_L, gam, _row = _ambient_pieces(surf.ambient, jt.value, time_sign=LORENTZIAN)
    g_L = jt.J.T @ G_L @ jt.J
    if gam is not None:
        corr = np.einsum("kab,ai,bj->ijk", gam, jt.J, jt.J)
        vecs = jt.H2 + corr
    else:
        vecs = jt.H2
    b_L = np.einsum("ijk,k->ij", vecs, G_L @ N_L)
    b_L = 0.5 * (b_L + b_L.T)
    A_L = np.linalg.solve(g_L, b_L)
    H_L_direct = -float(np.trace(A_L))
    att = float(fd.T @ fd.b @ fd.T)
    H_L_identity = mu * (1.0 - mu * mu) * att - mu * fd.H
    return LorentzData(causal=causal, mu=mu, N_L=N_L, g_L=g_L, A_L=A_L,
                       H_L_direct=H_L_direct, H_L_identity=H_L_identity)


# ---------------------------------------------------------------------------
# graphs over domains of M
# ---------------------------------------------------------------------------

@dataclass
class GraphResiduals:
    minimal_residual: float
    harmonic_residual: float
    homothety_residual: float
    section_H: float


def graph_residuals(space: AmbientSpace, u: Callable, p,
                    step: float = DEFAULT_JET_STEP,
                    grad_tol: float = 1e-8) -> GraphResiduals:
    """Minimality / harmonicity / horizontal-homothety residuals of graph(u).

    All gradients and Laplacians are taken with the base metric of ``space``
    by central differences:
      minimal   = Lap u - (|grad u| / (1 + |grad u|^2)) <grad u, grad |grad u|>
      harmonic  = Lap u
      homothety = <grad u, grad |grad u|>
      section_H = Lap u / |grad u| - homothety / |grad u|^2
    """
    p = np.asarray(p, dtype=float)

    def grad_norm(x):
        return float(np.sqrt(gradient_at(space, u, x, step)
                             @ metric_at(space, x)
                             @ gradient_at(space, u, x, step)))

    lap = laplace_beltrami(space, u, p, step)
    gu = gradient_at(space, u, p, step)
    G = metric_at(space, p)
    nrm = float(np.sqrt(gu @ G @ gu))
    if nrm < grad_tol:
        raise GeometryError("graph residuals need a nonvanishing gradient at p")
    gnrm = gradient_at(space, grad_norm, p, step)
    homothety = float(gu @ G @ gnrm)
    minimal = lap - (nrm / (1.0 + nrm * nrm)) * homothety
    section_H = lap / nrm - homothety / (nrm * nrm)
    return GraphResiduals(minimal_residual=minimal, harmonic_residual=lap,
                          homothety_residual=homothety, section_H=section_H)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def grid_points(ranges, counts):
    """Row-major Cartesian grid over per-axis (lo, hi) ranges."""
    axes = [np.linspace(lo, hi, int(c)) for (lo, hi), c in zip(ranges, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1), [len(a) for a in axes]
