"""Explicit vertical helicoids and the pitched-twisting machinery.

Every catalog entry builds an ``Immersion`` with closed-form jacobian (and a
closed-form or jacobian-differenced hessian), a smooth orientation reference,
and documented default parameter ranges, so verification sweeps run at
closed-form accuracy.  Twisting surfaces are swept by one-parameter isometry
groups stored as generators; block rotations carry exact closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import ambient as amb
from .ambient import AmbientProduct, AmbientSpace, make_space
from .calculus import (FundamentalData, Immersion, ImmersionJet,
                       asymptotic_residual, fundamental_data, grid_points,
                       jet, lorentz_data, section_mean_curvature)
from .errors import GeometryError, SpecError
from .reports import CheckResult, VerificationReport


# ---------------------------------------------------------------------------
# orientation helpers
# ---------------------------------------------------------------------------

def generalized_cross(vectors: np.ndarray) -> np.ndarray:
    """Vector orthogonal (Euclidean) to d-1 given d-vectors, via cofactors."""
    M = np.asarray(vectors, dtype=float)          # (d-1, d)
    d = M.shape[1]
    out = np.zeros(d)
    cols = list(range(d))
    for i in range(d):
        minor = M[:, cols[:i] + cols[i + 1:]]
        out[i] = (-1.0) ** i * np.linalg.det(minor)
    return out


def attach_default_orientation(surf: Immersion):
    """Smooth cross-product orientation, global sign making theta >= 0 at base_param."""
    quadric = (surf.ambient.base.kind == "quadric" if surf.is_product
               else surf.ambient.kind == "quadric")

    def ref(u, point, _sign=[1.0]):
        rows = [jet(surf, u).J.T] if surf.jacobian is None else [np.asarray(surf.jacobian(u), dtype=float).T]
        if quadric:
            pos = np.array(point, dtype=float)
            if surf.is_product:
                pos[-1] = 0.0
            rows.append(pos[None, :])
        return _sign[0] * generalized_cross(np.vstack(rows))

    sign = 1.0
    if surf.is_product and surf.base_param is not None:
        surf.orient = lambda u, p: ref(u, p)
        fd = fundamental_data(surf, jet(surf, surf.base_param))
        if fd.theta < -1e-12:
            sign = -1.0
    s = sign
    surf.orient = lambda u, p: s * ref(u, p)
    return surf


# ---------------------------------------------------------------------------
# one-parameter isometry groups
# ---------------------------------------------------------------------------

def expm_fixed(A: np.ndarray, order: int = 20) -> np.ndarray:
    """Scaling-and-squaring matrix exponential with a fixed Taylor order."""
    A = np.asarray(A, dtype=float)
    nrm = np.linalg.norm(A, 1)
    s = max(0, int(np.ceil(np.log2(nrm))) + 1) if nrm > 0 else 0
    B = A / 2 ** s
    term = np.eye(A.shape[0])
    out = np.eye(A.shape[0])
    for k in range(1, order + 1):
        term = term @ B / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@dataclass
class IsometryGroupAction:
    """One-parameter group Gamma_s of isometries of M.

    ``matrix_exponential`` actions act linearly on the flat embedding
    (quadric) or on Euclidean chart coordinates: Gamma_s = e^{s K}.
    ``chart_flow`` actions supply closed-form flow maps.
    """

    representation: str = "matrix_exponential"
    generator: Optional[np.ndarray] = None
    closed_form: Optional[Callable] = None       # s -> matrix
    flow: Optional[Callable] = None              # (s, x) -> x
    flow_velocity: Optional[Callable] = None     # (s, x) -> dx/ds

    def matrix(self, s: float) -> np.ndarray:
        if self.closed_form is not None:
            return self.closed_form(s)
        return expm_fixed(s * self.generator)

    def apply(self, s: float, p):
        if self.representation == "matrix_exponential":
            return self.matrix(s) @ np.asarray(p, dtype=float)
        return self.flow(s, np.asarray(p, dtype=float))

    def velocity(self, s: float, p):
        """d/ds Gamma_s(p) at fixed p."""
        if self.representation == "matrix_exponential":
            return self.generator @ self.matrix(s) @ np.asarray(p, dtype=float)
        if self.flow_velocity is not None:
            return self.flow_velocity(s, np.asarray(p, dtype=float))
        h = 1e-6
        return (self.flow(s + h, p) - self.flow(s - h, p)) / (2 * h)

    def push(self, s: float, v):
        """Pushforward of a tangent vector (linear actions)."""
        if self.representation != "matrix_exponential":
            raise GeometryError("pushforward requires a linear action")
        return self.matrix(s) @ np.asarray(v, dtype=float)

    def isometry_defect(self, metric: np.ndarray, rng, samples: int = 20) -> float:
        """max |<Gx,Gy> - <x,y>| over random vectors and parameters."""
        worst = 0.0
        d = metric.shape[0]
        for _ in range(samples):
            s = float(rng.uniform(-2, 2))
            x = rng.standard_normal(d)
            y = rng.standard_normal(d)
            G = self.matrix(s)
            worst = max(worst, abs((G @ x) @ metric @ (G @ y) - x @ metric @ y))
        return worst


def block_rotation_generator(dim: int, k: float, fixed_tail: int) -> np.ndarray:
    """Generator of speed-k rotations in consecutive coordinate pairs.

    The last ``fixed_tail`` coordinates are left fixed (they absorb an odd
    spatial coordinate and, in the Lorentz model, the time coordinate).
    """
    K = np.zeros((dim, dim))
    nrot = (dim - fixed_tail) // 2
    if 2 * nrot + fixed_tail != dim:
        raise SpecError("block rotation: dimension/tail mismatch")
    for b in range(nrot):
        i = 2 * b
        K[i, i + 1] = -k
        K[i + 1, i] = k
    return K


def block_rotation_closed_form(dim: int, k: float, fixed_tail: int) -> Callable:
    nrot = (dim - fixed_tail) // 2

    def mat(s):
        c, sn = np.cos(k * s), np.sin(k * s)
        G = np.eye(dim)
        for b in range(nrot):
            i = 2 * b
            G[i, i] = c
            G[i, i + 1] = -sn
            G[i + 1, i] = sn
            G[i + 1, i + 1] = c
        return G

    return mat


def rotation_action(dim: int, k: float, fixed_tail: int) -> IsometryGroupAction:
    return IsometryGroupAction(
        representation="matrix_exponential",
        generator=block_rotation_generator(dim, k, fixed_tail),
        closed_form=block_rotation_closed_form(dim, k, fixed_tail))


def symplectic_J(n: int) -> np.ndarray:
    """The (2n+2)x(2n+2) block matrix [[0, -Id], [Id, 0]]."""
    m = n + 1
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = -np.eye(m)
    J[m:, :m] = np.eye(m)
    return J


def symplectic_rotation_action(n: int, k: float) -> IsometryGroupAction:
    J = symplectic_J(n)
    m = n + 1

    def mat(s):
        c, sn = np.cos(k * s), np.sin(k * s)
        G = np.zeros((2 * m, 2 * m))
        G[:m, :m] = c * np.eye(m)
        G[m:, m:] = c * np.eye(m)
        G[:m, m:] = -sn * np.eye(m)
        G[m:, :m] = sn * np.eye(m)
        return G

    return IsometryGroupAction(representation="matrix_exponential",
                               generator=k * J, closed_form=mat)


# ---------------------------------------------------------------------------
# pitched twistings
# ---------------------------------------------------------------------------

@dataclass
class TwistingSurface:
    """The a-pitched twisting {(Gamma_s(f0(p)), a s)} of a base hypersurface."""

    base: Immersion                 # hypersurface of M (codimension 1 in M)
    base_normal: Callable           # p (params) -> eta at f0(p), rep coords of M
    action: IsometryGroupAction
    pitch: float
    immersion: Immersion = field(init=False)

    def __post_init__(self):
        if self.pitch <= 0:
            raise SpecError("pitch a > 0 required")
        if self.base.is_product:
            raise GeometryError("twisting base must be a hypersurface of M itself")
        if self.action.representation == "matrix_exponential":
            ok = (self.base.ambient.kind == "quadric"
                  or self.base.ambient.name.startswith("R"))
            if not ok:
                raise GeometryError("matrix actions need a quadric or Euclidean base")
        self.immersion = self._build_immersion()

    def orbit_velocity(self, p, s: float):
        """alpha_p'(s) = (d/ds Gamma_s)(f0(p))."""
        return self.action.velocity(s, self.base.eval(np.asarray(p, dtype=float)))

    def normal_at(self, p, s: float):
        """eta_s = Gamma_{s*} eta at alpha_p(s)."""
        return self.action.push(s, self.base_normal(np.asarray(p, dtype=float)))

    def _build_immersion(self) -> Immersion:
        base, act, a = self.base, self.action, self.pitch
        m = base.param_dim + 1
        M = base.ambient
        prod = AmbientProduct(M)
        d = prod.rep_dim
        basedim = M.rep_dim
        K = act.generator

        def ev(u):
            out = np.zeros(d)
            out[:basedim] = act.apply(u[-1], base.eval(u[:-1]))
            out[-1] = a * u[-1]
            return out

        def jac(u):
            p, s = u[:-1], u[-1]
            G = act.matrix(s)
            f0 = np.asarray(base.eval(p), dtype=float)
            Jb = (np.asarray(base.jacobian(p), dtype=float)
                  if base.jacobian is not None else _fd_jac(base.eval, p))
            J = np.zeros((d, m))
            J[:basedim, :-1] = G @ Jb
            J[:basedim, -1] = K @ G @ f0
            J[-1, -1] = a
            return J

        def hess(u):
            p, s = u[:-1], u[-1]
            G = act.matrix(s)
            f0 = np.asarray(base.eval(p), dtype=float)
            Jb = (np.asarray(base.jacobian(p), dtype=float)
                  if base.jacobian is not None else _fd_jac(base.eval, p))
            if base.hessian is not None:
                Hb = np.asarray(base.hessian(p), dtype=float)
            else:
                Hb = _fd_hess_from_jac(base, p)
            H2 = np.zeros((m, m, d))
            mb = m - 1
            H2[:mb, :mb, :basedim] = np.einsum("ab,ijb->ija", G, Hb)
            for i in range(mb):
                H2[i, mb, :basedim] = K @ G @ Jb[:, i]
                H2[mb, i, :basedim] = H2[i, mb, :basedim]
            H2[mb, mb, :basedim] = K @ K @ G @ f0
            return H2

        def orient(u, point):
            p, s = u[:-1], u[-1]
            eta_s = self.normal_at(p, s)
            nu = self._nu(p, s)
            ref = np.zeros(d)
            ref[:basedim] = -a * eta_s
            ref[-1] = nu
            return ref

        ranges = (list(base.default_ranges) if base.default_ranges else
                  [(-1.0, 1.0)] * base.param_dim) + [(0.0, 1.0)]
        bp = np.zeros(m)
        if base.base_param is not None:
            bp[:-1] = base.base_param
        return Immersion(prod, m, ev, jacobian=jac, hessian=hess,
                         domain=(None if base.domain is None
                                 else lambda u: base.domain(u[:-1])),
                         orient=orient, base_param=bp, section_axis=m - 1,
                         default_ranges=ranges,
                         name=f"twisting({base.name}, a={a:g})")

    def _nu(self, p, s: float) -> float:
        alpha = self.orbit_velocity(p, s)
        eta_s = self.normal_at(p, s)
        pt = self.action.apply(s, self.base.eval(np.asarray(p, dtype=float)))
        Gm = self.base.ambient.tangent_metric(pt)
        return float(alpha @ Gm @ eta_s)


def _fd_jac(f, p, h=1e-6):
    p = np.asarray(p, dtype=float)
    cols = []
    for i in range(len(p)):
        e = np.zeros(len(p))
        e[i] = h
        cols.append((np.asarray(f(p + e)) - np.asarray(f(p - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def _fd_hess_from_jac(surf, p, h=1e-6):
    p = np.asarray(p, dtype=float)
    m = len(p)
    jfun = surf.jacobian if surf.jacobian is not None else (lambda q: _fd_jac(surf.eval, q))
    J0 = np.asarray(jfun(p), dtype=float)
    H = np.zeros((m, m, J0.shape[0]))
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        H[i, :, :] = ((np.asarray(jfun(p + e), dtype=float)
                       - np.asarray(jfun(p - e), dtype=float)) / (2 * h)).T
    return 0.5 * (H + H.transpose(1, 0, 2))


def pitched_twisting(base: Immersion, base_normal: Callable,
                     action: IsometryGroupAction, pitch: float) -> TwistingSurface:
    """Sweep a hypersurface of M by a one-parameter isometry group."""
    return TwistingSurface(base=base, base_normal=base_normal,
                           action=action, pitch=pitch)


def nu_function(tw: TwistingSurface, p, s: float) -> float:
    """<alpha_p'(s), eta_s> in M's metric: the normal orbit speed."""
    return tw._nu(np.asarray(p, dtype=float), float(s))


def twisting_theta_check(tw: TwistingSurface, samples, h: float = 1e-5) -> dict:
    """Angle-function identity, nu-horizontality and the spacelike set.

    Per sample: |theta| vs |nu|/sqrt(a^2+nu^2) (orientation-normalized),
    <grad nu, d_t> = (d nu)^T g^{-1} (d xi) with d nu by central differences
    over the parameters, and membership of the measured spacelike set
    {|nu| > a} with min(2 theta^2 - 1) over it.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise GeometryError("twisting_theta_check needs a nonempty sample set")
    surf = tw.immersion
    a = tw.pitch
    m = surf.param_dim
    max_theta_gap = 0.0
    max_horiz = 0.0
    max_dnu_ds = 0.0
    spacelike_causal = []
    for u in samples:
        fd = fundamental_data(surf, jet(surf, u))
        nu = nu_function(tw, u[:-1], u[-1])
        pred = abs(nu) / math.hypot(a, nu)
        max_theta_gap = max(max_theta_gap, abs(abs(fd.theta) - pred))
        dnu = np.zeros(m)
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            up, um = u + e, u - e
            dnu[i] = (nu_function(tw, up[:-1], up[-1])
                      - nu_function(tw, um[:-1], um[-1])) / (2 * h)
        dxi = jet(surf, u).J[-1, :]
        horiz = float(dnu @ fd.g_inv @ dxi)
        max_horiz = max(max_horiz, abs(horiz))
        max_dnu_ds = max(max_dnu_ds, abs(dnu[-1]))
        if abs(nu) > a:
            spacelike_causal.append(2 * fd.theta ** 2 - 1)
    return {
        "max_theta_vs_nu": max_theta_gap,
        "max_grad_nu_vertical": max_horiz,
        "max_dnu_ds": max_dnu_ds,
        "spacelike_count": len(spacelike_causal),
        "min_causal_on_spacelike": (min(spacelike_causal) if spacelike_causal else None),
    }


# ---------------------------------------------------------------------------
# graph surfaces
# ---------------------------------------------------------------------------

@dataclass
class GraphSurface:
    """The vertical graph {(x, u(x))} over a chart domain of M."""

    space: AmbientSpace
    u: Callable
    grad_u: Optional[Callable] = None     # x -> du (partials, not raised)
    hess_u: Optional[Callable] = None     # x -> (n, n)
    domain: Optional[Callable] = None
    name: str = "graph"
    immersion: Immersion = field(init=False)

    def __post_init__(self):
        if self.space.kind != "chart":
            raise GeometryError("graph surfaces live over chart spaces")
        n = self.space.dim
        prod = AmbientProduct(self.space)

        def ev(x):
            return np.append(np.asarray(x, dtype=float), self.u(np.asarray(x, dtype=float)))

        jac = None
        hess = None
        if self.grad_u is not None:
            def jac(x):
                J = np.zeros((n + 1, n))
                J[:n, :n] = np.eye(n)
                J[n, :] = self.grad_u(np.asarray(x, dtype=float))
                return J
        if self.hess_u is not None:
            def hess(x):
                H = np.zeros((n, n, n + 1))
                H[:, :, n] = self.hess_u(np.asarray(x, dtype=float))
                return H

        def orient(x, point):
            # (-grad u, 1) / sqrt(1 + |grad u|^2): the upward unit normal
            x = np.asarray(point[:-1], dtype=float)
            du = (self.grad_u(x) if self.grad_u is not None
                  else _fd_jac(lambda q: np.array([self.u(q)]), x)[0])
            gu = np.linalg.solve(amb.metric_at(self.space, x), du)
            ref = np.zeros(n + 1)
            ref[:n] = -gu
            ref[n] = 1.0
            return ref

        dom = self.domain if self.domain is not None else self.space.domain_predicate
        self.immersion = Immersion(prod, n, ev, jacobian=jac, hessian=hess,
                                   domain=dom, orient=orient,
                                   name=self.name)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _sphere_angles(n: int):
    """Unit sphere S^{n-1} in R^n by angles, with first and second derivatives."""
    # q(omega): standard spherical coordinates, omega in R^{n-1}
    def q(w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.ones(n)
        for i in range(n - 1):
            out[i] *= np.cos(w[i])
            out[i + 1:] *= 1.0
            out[i + 1:] = out[i + 1:]
        # build multiplicatively: x_i = cos(w_i) prod_{j<i} sin(w_j), x_{n-1} = prod sin
        vals = np.zeros(n)
        prod = 1.0
        for i in range(n - 1):
            vals[i] = prod * np.cos(w[i])
            prod *= np.sin(w[i])
        vals[n - 1] = prod
        return vals
    return q


def _stereographic(n: int):
    """Conformal parametrization of S^n by R^n with closed-form jacobian."""
    def ev(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = 1.0 + x @ x
        return np.append(2 * x, x @ x - 1.0) / w

    def jac(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = 1.0 + x @ x
        J = np.zeros((n + 1, n))
        for i in range(n):
            J[:n, i] = -4.0 * x[i] * x / w ** 2
            J[i, i] += 2.0 / w
            J[n, i] = 4.0 * x[i] / w ** 2
        return J

    return ev, jac


def _circle():
    def ev(x):
        x = float(np.atleast_1d(x)[0])
        return np.array([np.cos(x), np.sin(x)])

    def jac(x):
        x = float(np.atleast_1d(x)[0])
        return np.array([[-np.sin(x)], [np.cos(x)]])

    return ev, jac


@dataclass
class GalleryEntry:
    kind: str
    family: str                     # "helicoid" grouping used by the CLI
    signature: dict                 # parameter name -> default
    doc: str
    builder: Callable               # params -> Immersion
    default_counts: Optional[list] = None


GALLERY: dict = {}


def _register(kind, signature, doc, builder, counts=None):
    GALLERY[kind] = GalleryEntry(kind=kind, family="helicoid",
                                 signature=signature, doc=doc,
                                 builder=builder, default_counts=counts)


def make_helicoid(kind: str, **params) -> Immersion:
    """Build a catalog surface; unknown kinds and bad parameters raise SpecError."""
    if kind not in GALLERY:
        raise SpecError(f"unknown helicoid kind {kind!r}")
    entry = GALLERY[kind]
    merged = dict(entry.signature)
    for key, val in params.items():
        if key not in merged:
            raise SpecError(f"{kind}: unknown parameter {key!r}")
        merged[key] = val
    surf = entry.builder(**merged)
    surf.meta = {"kind": kind, "params": merged, "doc": entry.doc}
    return surf


# --- individual builders ----------------------------------------------------

def _build_r3_helicoid(a):
    a = float(a)
    if a <= 0:
        raise SpecError("r3_helicoid: a > 0")
    prod = AmbientProduct(make_space("euclidean", n=2))

    def ev(u):
        x, y = u
        return np.array([x * np.cos(y), x * np.sin(y), a * y])

    def jac(u):
        x, y = u
        return np.array([[np.cos(y), -x * np.sin(y)],
                         [np.sin(y), x * np.cos(y)],
                         [0.0, a]])

    def hess(u):
        x, y = u
        H = np.zeros((2, 2, 3))
        H[0, 1] = H[1, 0] = [-np.sin(y), np.cos(y), 0.0]
        H[1, 1] = [-x * np.cos(y), -x * np.sin(y), 0.0]
        return H

    def orient(u, pt):
        x, y = u
        return np.array([a * np.sin(y), -a * np.cos(y), x]) / math.hypot(x, a)

    return Immersion(prod, 2, ev, jacobian=jac, hessian=hess, orient=orient,
                     base_param=np.array([1.0, 0.0]),
                     section_axis=1,
                     default_ranges=[(-2.0, 2.0), (0.0, 2 * np.pi)],
                     name=f"r3_helicoid(a={a:g})")


def _build_s2xr(a):
    a = float(a)
    if a <= 0:
        raise SpecError("s2xr: a > 0")
    prod = AmbientProduct(make_space("sphere_quadric", n=2))

    def ev(u):
        x, y = u
        return np.array([np.cos(x) * np.cos(y), np.cos(x) * np.sin(y), np.sin(x), a * y])

    def jac(u):
        x, y = u
        return np.array([[-np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y)],
                         [-np.sin(x) * np.sin(y), np.cos(x) * np.cos(y)],
                         [np.cos(x), 0.0],
                         [0.0, a]])

    def hess(u):
        x, y = u
        H = np.zeros((2, 2, 4))
        H[0, 0] = [-np.cos(x) * np.cos(y), -np.cos(x) * np.sin(y), -np.sin(x), 0]
        H[0, 1] = H[1, 0] = [np.sin(x) * np.sin(y), -np.sin(x) * np.cos(y), 0, 0]
        H[1, 1] = [-np.cos(x) * np.cos(y), -np.cos(x) * np.sin(y), 0, 0]
        return H

    surf = Immersion(prod, 2, ev, jacobian=jac, hessian=hess,
                     base_param=np.array([0.5, 0.0]), section_axis=1,
                     default_ranges=[(-1.2, 1.2), (0.0, 2 * np.pi)],
                     name=f"s2xr_helicoid(a={a:g})")
    return attach_default_orientation(surf)


def _build_h2xr(a):
    a = float(a)
    if a <= 0:
        raise SpecError("h2xr: a > 0")
    prod = AmbientProduct(make_space("hyperbolic_quadric", n=2))

    def ev(u):
        x, y = u
        return np.array([np.sinh(x) * np.cos(y), np.sinh(x) * np.sin(y), np.cosh(x), a * y])

    def jac(u):
        x, y = u
        return np.array([[np.cosh(x) * np.cos(y), -np.sinh(x) * np.sin(y)],
                         [np.cosh(x) * np.sin(y), np.sinh(x) * np.cos(y)],
                         [np.sinh(x), 0.0],
                         [0.0, a]])

    def hess(u):
        x, y = u
        H = np.zeros((2, 2, 4))
        H[0, 0] = [np.sinh(x) * np.cos(y), np.sinh(x) * np.sin(y), np.cosh(x), 0]
        H[0, 1] = H[1, 0] = [-np.cosh(x) * np.sin(y), np.cosh(x) * np.cos(y), 0, 0]
        H[1, 1] = [-np.sinh(x) * np.cos(y), -np.sinh(x) * np.sin(y), 0, 0]
        return H

    surf = Immersion(prod, 2, ev, jacobian=jac, hessian=hess,
                     base_param=np.array([1.0, 0.0]), section_axis=1,
                     default_ranges=[(-1.5, 1.5), (0.0, 2 * np.pi)],
                     name=f"h2xr_helicoid(a={a:g})")
    return attach_default_orientation(surf)


def _plane_base(n):
    """Totally geodesic hyperplane {x_2 = 0} of R^n through the origin."""
    space = make_space("euclidean", n=n)
    idx = [0] + list(range(2, n))

    def ev(w):
        out = np.zeros(n)
        out[idx] = np.asarray(w, dtype=float)
        return out

    def jac(w):
        J = np.zeros((n, n - 1))
        for c, i in enumerate(idx):
            J[i, c] = 1.0
        return J

    def hess(w):
        return np.zeros((n - 1, n - 1, n))

    base = Immersion(space, n - 1, ev, jacobian=jac, hessian=hess,
                     base_param=np.zeros(n - 1),
                     default_ranges=[(-2.0, 2.0)] * (n - 1),
                     name=f"hyperplane(R{n})")
    eta = np.zeros(n)
    eta[1] = -1.0
    return base, (lambda w, _e=eta: _e)


def _build_twisted_plane(a, k):
    a, k = float(a), float(k)
    if a <= 0 or k <= 0:
        raise SpecError("twisted_plane: a, k > 0")
    base, eta = _plane_base(3)
    tw = pitched_twisting(base, eta, rotation_action(3, k, fixed_tail=1), a)
    surf = tw.immersion
    surf.default_ranges = [(-2.0, 2.0), (-1.0, 1.0), (0.0, np.pi)]
    surf.base_param = np.array([1.0, 0.0, 0.0])
    surf.name = f"twisted_plane(a={a:g},k={k:g})"
    surf.meta = {"twisting": tw}
    return surf


def _build_qcn_totally_geodesic(c, n, a, k):
    c, n, a, k = int(c), int(n), float(a), float(k)
    if c not in (-1, 0, 1):
        raise SpecError("qcn_totally_geodesic: c in {-1, 0, 1}")
    if not (2 <= n <= 7):
        raise SpecError("qcn_totally_geodesic: 2 <= n <= 7")
    if a <= 0 or k <= 0:
        raise SpecError("qcn_totally_geodesic: a, k > 0")
    if c == 0:
        base, eta = _plane_base(n)
        act = rotation_action(n, k, fixed_tail=n % 2)
        name = f"qcn_totally_geodesic(c=0,n={n})"
    elif c == -1:
        space = make_space("hyperbolic_quadric", n=n)

        def ev(w):
            w = np.asarray(w, dtype=float)
            out = np.zeros(n + 1)
            out[0] = w[0]
            out[2:n] = w[1:]
            out[n] = np.sqrt(1.0 + w @ w)
            return out

        def jac(w):
            w = np.asarray(w, dtype=float)
            J = np.zeros((n + 1, n - 1))
            J[0, 0] = 1.0
            for i in range(1, n - 1):
                J[i + 1, i] = 1.0
            J[n, :] = w / np.sqrt(1.0 + w @ w)
            return J

        def hess(w):
            w = np.asarray(w, dtype=float)
            r = np.sqrt(1.0 + w @ w)
            H = np.zeros((n - 1, n - 1, n + 1))
            H[:, :, n] = np.eye(n - 1) / r - np.outer(w, w) / r ** 3
            return H

        base = Immersion(space, n - 1, ev, jacobian=jac, hessian=hess,
                         base_param=np.zeros(n - 1),
                         default_ranges=[(-1.5, 1.5)] * (n - 1),
                         name=f"tg_hyperplane(H{n})")
        eta_vec = np.zeros(n + 1)
        eta_vec[1] = 1.0
        eta = lambda w, _e=eta_vec: _e
        # rotations on spatial pairs; odd n leaves one spatial coord + time fixed
        act = rotation_action(n + 1, k, fixed_tail=1 + (n % 2))
        name = f"qcn_totally_geodesic(c=-1,n={n})"
    else:
        space = make_space("sphere_quadric", n=n)
        qmap = _sphere_angles(n)

        def ev(w):
            q = qmap(np.asarray(w, dtype=float))
            out = np.zeros(n + 1)
            out[0] = q[0]
            out[2:] = q[1:]
            return out

        base = Immersion(space, n - 1, ev,
                         base_param=np.full(n - 1, 0.7),
                         default_ranges=[(0.3, np.pi - 0.3)] * (n - 2) + [(0.0, 2 * np.pi)],
                         name=f"tg_sphere(S{n})")
        eta_vec = np.zeros(n + 1)
        eta_vec[1] = 1.0
        eta = lambda w, _e=eta_vec: _e
        act = rotation_action(n + 1, k, fixed_tail=(n + 1) % 2)
        name = f"qcn_totally_geodesic(c=1,n={n})"
    tw = pitched_twisting(base, eta, act, a)
    surf = tw.immersion
    surf.name = name + f"(a={a:g},k={k:g})"
    surf.base_param = np.append(base.base_param, 0.0)
    if c == 0:
        surf.base_param[0] = 1.0
    surf.default_ranges = list(base.default_ranges) + [(0.0, 1.0)]
    surf.meta = {"twisting": tw}
    return surf


def _build_twisted_helicoid_rn(n, a, k):
    n, a, k = int(n), float(a), float(k)
    if not (3 <= n <= 7):
        raise SpecError("twisted_helicoid_rn: 3 <= n <= 7")
    if a <= 0 or k <= 0:
        raise SpecError("twisted_helicoid_rn: a, k > 0")
    prod = AmbientProduct(make_space("euclidean", n=n))
    m = n  # parameters (x_1 .. x_{n-1}, s)

    def phase(u):
        return float(np.sum(u[1:m - 1]) + k * u[m - 1])

    def ev(u):
        u = np.asarray(u, dtype=float)
        ph = phase(u)
        out = np.zeros(n + 1)
        out[0] = u[0] * np.cos(ph)
        out[1] = u[0] * np.sin(ph)
        out[2:n] = u[1:m - 1]
        out[n] = a * u[m - 1]
        return out

    def jac(u):
        u = np.asarray(u, dtype=float)
        ph = phase(u)
        c, s = np.cos(ph), np.sin(ph)
        J = np.zeros((n + 1, m))
        J[0, 0] = c
        J[1, 0] = s
        for j in range(1, m - 1):
            J[0, j] = -u[0] * s
            J[1, j] = u[0] * c
            J[j + 1, j] = 1.0
        J[0, m - 1] = -k * u[0] * s
        J[1, m - 1] = k * u[0] * c
        J[n, m - 1] = a
        return J

    def hess(u):
        u = np.asarray(u, dtype=float)
        ph = phase(u)
        c, s = np.cos(ph), np.sin(ph)
        H = np.zeros((m, m, n + 1))
        w = np.zeros(m)            # d(phase)/du
        w[1:m - 1] = 1.0
        w[m - 1] = k
        for i in range(m):
            for j in range(m):
                wij = w[i] * w[j]
                H[i, j, 0] = -u[0] * c * wij
                H[i, j, 1] = -u[0] * s * wij
        for j in range(1, m):
            H[0, j, 0] = H[j, 0, 0] = -s * w[j]
            H[0, j, 1] = H[j, 0, 1] = c * w[j]
        return H

    surf = Immersion(prod, m, ev, jacobian=jac, hessian=hess,
                     base_param=np.array([1.0] + [0.0] * (m - 1)),
                     section_axis=m - 1,
                     default_ranges=[(-2.0, 2.0)] + [(-1.0, 1.0)] * (m - 2) + [(0.0, 1.5)],
                     name=f"twisted_helicoid_rn(n={n},a={a:g},k={k:g})")
    return attach_default_orientation(surf)


def _build_twisted_clifford_s3(a, k):
    a, k = float(a), float(k)
    if a <= 0 or k <= 0:
        raise SpecError("twisted_clifford_s3: a, k > 0")
    prod = AmbientProduct(make_space("sphere_quadric", n=3))

    def ev(u):
        x, y, s = u
        return np.array([np.cos(x + k * s) * np.cos(y), np.sin(x + k * s) * np.cos(y),
                         np.cos(x) * np.sin(y), np.sin(x) * np.sin(y), a * s])

    def jac(u):
        x, y, s = u
        cx, sx = np.cos(x + k * s), np.sin(x + k * s)
        c0, s0 = np.cos(x), np.sin(x)
        cy, sy = np.cos(y), np.sin(y)
        return np.array([
            [-sx * cy, -cx * sy, -k * sx * cy],
            [cx * cy, -sx * sy, k * cx * cy],
            [-s0 * sy, c0 * cy, 0.0],
            [c0 * sy, s0 * cy, 0.0],
            [0.0, 0.0, a]])

    def hess(u):
        x, y, s = u
        cx, sx = np.cos(x + k * s), np.sin(x + k * s)
        c0, s0 = np.cos(x), np.sin(x)
        cy, sy = np.cos(y), np.sin(y)
        H = np.zeros((3, 3, 5))
        H[0, 0] = [-cx * cy, -sx * cy, -c0 * sy, -s0 * sy, 0]
        H[0, 1] = H[1, 0] = [sx * sy, -cx * sy, -s0 * cy, c0 * cy, 0]
        H[0, 2] = H[2, 0] = [-k * cx * cy, -k * sx * cy, 0, 0, 0]
        H[1, 1] = [-cx * cy, -sx * cy, -c0 * sy, -s0 * sy, 0]
        H[1, 2] = H[2, 1] = [k * sx * sy, -k * cx * sy, 0, 0, 0]
        H[2, 2] = [-k * k * cx * cy, -k * k * sx * cy, 0, 0, 0]
        return H

    def orient(u, pt):
        x, y, s = u
        cx, sx = np.cos(x + k * s), np.sin(x + k * s)
        c0, s0 = np.cos(x), np.sin(x)
        cy, sy = np.cos(y), np.sin(y)
        q = k * cy * sy
        return np.array([a * sy * sx, -a * sy * cx, -a * s0 * cy, a * c0 * cy, q]) \
            / math.hypot(a, q)

    return Immersion(prod, 3, ev, jacobian=jac, hessian=hess, orient=orient,
                     base_param=np.array([0.0, 0.6, 0.0]), section_axis=2,
                     default_ranges=[(0.0, 2 * np.pi), (0.05, np.pi / 4), (0.0, 1.0)],
                     name=f"twisted_clifford_s3(a={a:g},k={k:g})")


def _clifford_base(n):
    """The Clifford torus S^n(1/sqrt2) x S^n(1/sqrt2) in S^{2n+1}."""
    space = make_space("sphere_quadric", n=2 * n + 1)
    if n == 1:
        phi_ev, phi_jac = _circle()
        psi_ev, psi_jac = _circle()
    else:
        phi_ev, phi_jac = _stereographic(n)
        psi_ev, psi_jac = _stereographic(n)
    m1 = n + 1

    def ev(w):
        w = np.asarray(w, dtype=float)
        return np.concatenate([phi_ev(w[:n]), psi_ev(w[n:])]) / np.sqrt(2.0)

    def jac(w):
        w = np.asarray(w, dtype=float)
        J = np.zeros((2 * m1, 2 * n))
        J[:m1, :n] = phi_jac(w[:n]) / np.sqrt(2.0)
        J[m1:, n:] = psi_jac(w[n:]) / np.sqrt(2.0)
        return J

    base = Immersion(space, 2 * n, ev, jacobian=jac,
                     base_param=(np.array([0.3, 1.1]) if n == 1
                                 else np.full(2 * n, 0.4)),
                     default_ranges=([(0.0, 2 * np.pi)] * 2 if n == 1
                                     else [(-1.2, 1.2)] * (2 * n)),
                     name=f"clifford_torus(S{2*n+1})")

    def eta(w):
        w = np.asarray(w, dtype=float)
        return np.concatenate([phi_ev(w[:n]), -psi_ev(w[n:])]) / np.sqrt(2.0)

    return base, eta


def _build_twisted_clifford_s2n1(n, a, k):
    n, a, k = int(n), float(a), float(k)
    if not (1 <= n <= 3):
        raise SpecError("twisted_clifford_s2n1: 1 <= n <= 3")
    if a <= 0 or k <= 0:
        raise SpecError("twisted_clifford_s2n1: a, k > 0")
    base, eta = _clifford_base(n)
    tw = pitched_twisting(base, eta, symplectic_rotation_action(n, k), a)
    surf = tw.immersion
    surf.name = f"twisted_clifford_s2n1(n={n},a={a:g},k={k:g})"
    surf.meta = {"twisting": tw}
    return surf


def _build_twisted_cone_r2n2(n, a, k):
    n, a, k = int(n), float(a), float(k)
    if not (1 <= n <= 3):
        raise SpecError("twisted_cone_r2n2: 1 <= n <= 3")
    if a <= 0 or k <= 0:
        raise SpecError("twisted_cone_r2n2: a, k > 0")
    space = make_space("euclidean", n=2 * n + 2)
    torus, torus_eta = _clifford_base(n)

    def ev(w):
        # cone coordinates (torus params, radius r)
        return w[-1] * torus.eval(w[:-1])

    def jac(w):
        J = np.zeros((2 * n + 2, 2 * n + 1))
        J[:, :-1] = w[-1] * torus.jacobian(w[:-1])
        J[:, -1] = torus.eval(w[:-1])
        return J

    base = Immersion(space, 2 * n + 1, ev, jacobian=jac,
                     base_param=np.append(torus.base_param, 1.0),
                     default_ranges=list(torus.default_ranges) + [(0.5, 2.0)],
                     name=f"clifford_cone(R{2*n+2})")
    eta = lambda w: torus_eta(w[:-1])
    tw = pitched_twisting(base, eta, symplectic_rotation_action(n, k), a)
    surf = tw.immersion
    surf.name = f"twisted_cone_r2n2(n={n},a={a:g},k={k:g})"
    surf.meta = {"twisting": tw}
    return surf


def _build_twisted_hyperbolic_h3(a, k):
    a, k = float(a), float(k)
    if a <= 0 or k <= 0:
        raise SpecError("twisted_hyperbolic_h3: a, k > 0")
    prod = AmbientProduct(make_space("hyperbolic_quadric", n=3))

    def ev(u):
        x, y, s = u
        ph = y + k * s
        return np.array([np.sinh(x) * np.cos(ph), np.sinh(x) * np.sin(ph),
                         np.cosh(x) * np.sinh(y), np.cosh(x) * np.cosh(y), a * s])

    def jac(u):
        x, y, s = u
        ph = y + k * s
        cp, sp = np.cos(ph), np.sin(ph)
        shx, chx = np.sinh(x), np.cosh(x)
        shy, chy = np.sinh(y), np.cosh(y)
        return np.array([
            [chx * cp, -shx * sp, -k * shx * sp],
            [chx * sp, shx * cp, k * shx * cp],
            [shx * shy, chx * chy, 0.0],
            [shx * chy, chx * shy, 0.0],
            [0.0, 0.0, a]])

    def hess(u):
        x, y, s = u
        ph = y + k * s
        cp, sp = np.cos(ph), np.sin(ph)
        shx, chx = np.sinh(x), np.cosh(x)
        shy, chy = np.sinh(y), np.cosh(y)
        H = np.zeros((3, 3, 5))
        H[0, 0] = [shx * cp, shx * sp, chx * shy, chx * chy, 0]
        H[0, 1] = H[1, 0] = [-chx * sp, chx * cp, shx * chy, shx * shy, 0]
        H[0, 2] = H[2, 0] = [-k * chx * sp, k * chx * cp, 0, 0, 0]
        H[1, 1] = [-shx * cp, -shx * sp, chx * shy, chx * chy, 0]
        H[1, 2] = H[2, 1] = [-k * shx * cp, -k * shx * sp, 0, 0, 0]
        H[2, 2] = [-k * k * shx * cp, -k * k * shx * sp, 0, 0, 0]
        return H

    def orient(u, pt):
        x, y, s = u
        ph = y + k * s
        shx, chx = np.sinh(x), np.cosh(x)
        lam = 1.0 / np.sqrt(chx ** 2 + shx ** 2 + (k * chx * shx) ** 2)
        return lam * np.array([chx * np.sin(ph), -chx * np.cos(ph),
                               shx * np.cosh(y), shx * np.sinh(y),
                               k * shx * chx])

    return Immersion(prod, 3, ev, jacobian=jac, hessian=hess, orient=orient,
                     base_param=np.array([1.0, 0.0, 0.0]), section_axis=2,
                     default_ranges=[(-1.5, 1.5), (-1.0, 1.0), (0.0, 1.0)],
                     name=f"twisted_hyperbolic_h3(a={a:g},k={k:g})")


def _build_berger_helicoid(alpha, a, delta):
    alpha, a, delta = float(alpha), float(a), float(delta)
    if delta <= 0:
        raise SpecError("berger_helicoid: delta > 0")
    if a == 0:
        raise SpecError("berger_helicoid: a != 0")
    space = make_space("berger", delta=delta)
    prod = AmbientProduct(space)
    # Hopf chart (tau, beta, gamma): the base helicoid is (s,tau) ->
    # (tau, alpha s, s); the vertical twisting adds the Hopf rotation by u.
    A = np.array([[0.0, 1.0, 0.0],
                  [alpha, 0.0, 1.0],
                  [1.0, 0.0, 1.0],
                  [0.0, 0.0, a]])   # columns: d/ds, d/dtau, d/du

    def ev(u):
        return A @ np.asarray(u, dtype=float)

    def jac(u):
        return A

    def hess(u):
        return np.zeros((3, 3, 4))

    surf = Immersion(prod, 3, ev, jacobian=jac, hessian=hess,
                     domain=lambda u: 0.05 < u[1] < np.pi / 2 - 0.05,
                     base_param=np.array([0.0, 0.7, 0.0]), section_axis=2,
                     default_ranges=[(-1.0, 1.0), (0.2, 1.3), (-1.0, 1.0)],
                     name=f"berger_helicoid(alpha={alpha:g},a={a:g},delta={delta:g})")
    return attach_default_orientation(surf)


def paper_omega(tau, alpha, a, delta):
    """Reference omega(tau) printed alongside Berger reports for manual comparison."""
    c2 = np.cos(tau) ** 2
    return np.sqrt(c2 ** 2 * ((1 - delta ** 2) * delta ** 2 * (alpha + 1) ** 2 * a ** 2 - alpha ** 2)
                   + c2 * (delta ** 2 * (alpha + 1) * (delta ** 2 * (alpha + 1) - 2) * a ** 2 + alpha ** 2)
                   + delta ** 2 * a ** 2)


def _graph_surface_for(space_tag, a):
    a = float(a)
    if space_tag == "hyp":
        space = make_space("hyperbolic_halfspace", n=3)
        u = lambda x: a * x[0]
        du = lambda x: np.array([a, 0.0, 0.0])
        d2u = lambda x: np.zeros((3, 3))
        ranges = [(-1.0, 1.0), (-1.0, 1.0), (0.5, 2.0)]
    elif space_tag == "nil":
        space = make_space("nil3")
        u = lambda x: a * (x[2] - x[0] * x[1] / 2.0)
        du = lambda x: np.array([-a * x[1] / 2.0, -a * x[0] / 2.0, a])
        d2u = lambda x: np.array([[0.0, -a / 2.0, 0.0],
                                  [-a / 2.0, 0.0, 0.0],
                                  [0.0, 0.0, 0.0]])
        ranges = [(-1.0, 1.0)] * 3
    elif space_tag == "sol":
        space = make_space("sol3")
        u = lambda x: a * x[2]
        du = lambda x: np.array([0.0, 0.0, a])
        d2u = lambda x: np.zeros((3, 3))
        ranges = [(-1.0, 1.0)] * 3
    else:
        raise SpecError(f"ou_graph: unknown space {space_tag!r}")
    return space, u, du, d2u, ranges


def _build_ou_graph(space, a):
    amb_space, u, du, d2u, ranges = _graph_surface_for(space, a)
    gs = GraphSurface(amb_space, u, grad_u=du, hess_u=d2u,
                      name=f"ou_graph({space},a={float(a):g})")
    surf = gs.immersion
    surf.default_ranges = ranges
    surf.base_param = np.array([(lo + hi) / 2.0 for lo, hi in ranges])
    surf.meta = {"graph": gs, "field": u, "space": amb_space}
    return surf


def _build_arctan_graph(n, a1, b):
    n, a1, b = int(n), float(a1), float(b)
    if n < 3:
        raise SpecError("arctan_graph: n >= 3")
    coeffs = np.full(n - 2, a1)
    space = make_space("euclidean", n=n)

    def u(x):
        return float(coeffs @ x[:n - 2] + b * np.arctan2(x[n - 1], x[n - 2]))

    def du(x):
        r2 = x[n - 2] ** 2 + x[n - 1] ** 2
        out = np.zeros(n)
        out[:n - 2] = coeffs
        out[n - 2] = -b * x[n - 1] / r2
        out[n - 1] = b * x[n - 2] / r2
        return out

    def d2u(x):
        p, q = x[n - 2], x[n - 1]
        r4 = (p * p + q * q) ** 2
        H = np.zeros((n, n))
        H[n - 2, n - 2] = 2 * b * p * q / r4
        H[n - 2, n - 1] = H[n - 1, n - 2] = b * (q * q - p * p) / r4
        H[n - 1, n - 1] = -2 * b * p * q / r4
        return H

    gs = GraphSurface(space, u, grad_u=du, hess_u=d2u,
                      domain=lambda x: x[n - 2] > 0.0,
                      name=f"arctan_graph(n={n},b={b:g})")
    surf = gs.immersion
    surf.default_ranges = [(-1.0, 1.0)] * (n - 2) + [(0.5, 2.0), (-1.0, 1.0)]
    surf.base_param = np.array([0.0] * (n - 2) + [1.0, 0.0])
    surf.meta = {"graph": gs, "field": u, "space": space}
    return surf


_register("r3_helicoid", {"a": 1.0},
          "standard vertical helicoid of pitch a in R^2 x R; "
          "horizontal sections are straight lines",
          _build_r3_helicoid, counts=[20, 20])
_register("s2xr", {"a": 1.0},
          "spherical helicoid swept over great circles in S^2 x R",
          _build_s2xr, counts=[20, 20])
_register("h2xr", {"a": 1.0},
          "hyperbolic helicoid swept over geodesics in H^2 x R (Lorentz model)",
          _build_h2xr, counts=[20, 20])
_register("twisted_plane", {"a": 1.0, "k": 2.0},
          "vertical twisting of a plane of R^3 by a one-parameter rotation group",
          _build_twisted_plane, counts=[20, 20, 20])
_register("twisted_helicoid_rn", {"n": 3, "a": 1.0, "k": 2.0},
          "twisted helicoid in R^n x R whose horizontal sections are "
          "(n-1)-dimensional helicoids",
          _build_twisted_helicoid_rn, counts=[20, 20, 20])
_register("twisted_clifford_s3", {"a": 1.0, "k": 3.0},
          "twisting of a flat minimal torus of S^3 (congruent to the Clifford torus)",
          _build_twisted_clifford_s3, counts=[20, 20, 20])
_register("twisted_clifford_s2n1", {"n": 1, "a": 1.0, "k": 4.0},
          "twisting of the Clifford torus S^n(1/sqrt2) x S^n(1/sqrt2) in S^{2n+1} x R",
          _build_twisted_clifford_s2n1, counts=[12, 12, 12])
_register("twisted_cone_r2n2", {"n": 1, "a": 1.0, "k": 4.0},
          "twisting of the cone over the Clifford torus in R^{2n+2} x R",
          _build_twisted_cone_r2n2, counts=[8, 8, 6, 6])
_register("twisted_hyperbolic_h3", {"a": 1.0, "k": 3.0},
          "twisting of the hyperbolic helicoid of H^3 in H^3 x R",
          _build_twisted_hyperbolic_h3, counts=[20, 20, 20])
_register("berger_helicoid", {"alpha": 2.0, "a": 1.0, "delta": 0.8},
          "vertical helicoid over a minimal helicoid of a Berger sphere "
          "(Hopf-fiber rescaled metric, Hopf torus chart)",
          _build_berger_helicoid, counts=[12, 12, 12])
_register("qcn_totally_geodesic", {"c": -1, "n": 3, "a": 1.0, "k": 2.0},
          "twisting of a totally geodesic hypersurface of the space form "
          "with curvature c (block-rotation group)",
          _build_qcn_totally_geodesic, counts=[14, 14, 10])
_register("ou_graph", {"space": "sol", "a": 0.5},
          "entire minimal graph of a harmonic, horizontally homothetic function "
          "(half-space hyperbolic / Nil / Sol metrics)",
          _build_ou_graph, counts=[10, 10, 10])
_register("arctan_graph", {"n": 3, "a1": 0.3, "b": 0.7},
          "graph of a linear + arctangent harmonic, horizontally homothetic "
          "function on a Euclidean half-domain",
          _build_arctan_graph, counts=[10, 10, 10])


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def _theta_field_residual(surf, u, fd, h=1e-5):
    """|d theta + (b grad xi)| componentwise: the identity grad theta = -A grad xi."""
    m = surf.param_dim
    dth = np.zeros(m)
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        thp = fundamental_data(surf, jet(surf, u + e)).theta
        thm = fundamental_data(surf, jet(surf, u - e)).theta
        dth[i] = (thp - thm) / (2 * h)
    # grad theta has components g^{-1} d theta; -A grad xi pairs as -(b grad xi)
    target = -(fd.b @ fd.grad_xi)
    diff = dth - target
    return float(np.sqrt(abs(diff @ fd.g_inv @ diff)))


def _helix_theta_drift(surf, u0, arc=0.2, nsteps=40):
    """theta variation along the grad-xi trajectory from u0 (RK4 in parameters)."""
    def vel(u):
        fd = fundamental_data(surf, jet(surf, u))
        return fd.grad_xi

    u = np.array(u0, dtype=float)
    h = arc / nsteps
    theta0 = fundamental_data(surf, jet(surf, u)).theta
    drift = 0.0
    for _ in range(nsteps):
        k1 = vel(u)
        k2 = vel(u + 0.5 * h * k1)
        k3 = vel(u + 0.5 * h * k2)
        k4 = vel(u + h * k3)
        u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = max(drift, abs(fundamental_data(surf, jet(surf, u)).theta - theta0))
    return drift


def default_grid(surf: Immersion, counts=None):
    ranges = surf.default_ranges
    if ranges is None:
        raise SpecError(f"surface {surf.name} has no documented default ranges")
    if counts is None:
        counts = [20] * surf.param_dim
    if len(counts) != surf.param_dim:
        raise SpecError("grid counts must match the parameter dimension")
    if any(c < 2 for c in counts):
        raise SpecError("grid needs >= 2 samples per axis")
    # keep strictly inside the documented ranges (FD stencils, open domains)
    shrunk = []
    for lo, hi in ranges:
        pad = 1e-3 * (hi - lo)
        shrunk.append((lo + pad, hi - pad))
    return grid_points(shrunk, counts)[0]


def verify_helicoid(surf: Immersion, grid=None, tol: dict = None,
                    seed: int = 0) -> VerificationReport:
    """Check the vertical-helicoid conditions on a sample grid.

    Residual checks: |H|, |<A grad xi, grad xi>|, |H of horizontal sections|,
    the fundamental identities |grad xi|^2 + theta^2 = 1 and
    grad theta = -A grad xi, |H_L| over the measured spacelike subset, and
    constancy of theta along grad-xi trajectories (vertical helices).
    """
    tol = dict(tol or {})
    tol.setdefault("H", 1e-8)
    tol.setdefault("asymptotic", 1e-8)
    tol.setdefault("section_H", 1e-8)
    tol.setdefault("unit_identity", 1e-10)
    tol.setdefault("grad_theta", 5e-7)
    tol.setdefault("H_L", 1e-6)
    tol.setdefault("helix", 1e-6)
    if grid is None:
        grid = default_grid(surf, (GALLERY[surf.meta["kind"]].default_counts
                                   if surf.meta.get("kind") in GALLERY else None))
    grid = np.atleast_2d(np.asarray(grid, dtype=float))

    worst = {k: 0.0 for k in ("H", "asymptotic", "section_H", "unit_identity",
                              "grad_theta", "H_L")}
    spacelike = 0
    horizontal = 0
    rng = np.random.default_rng(seed)
    theta_probe = rng.choice(len(grid), size=min(4, len(grid)), replace=False)
    for idx, u in enumerate(grid):
        jt = jet(surf, u)
        fd = fundamental_data(surf, jt)
        if 1.0 - fd.theta ** 2 <= 1e-12:
            horizontal += 1
            continue
        worst["H"] = max(worst["H"], abs(fd.H))
        worst["asymptotic"] = max(worst["asymptotic"], abs(asymptotic_residual(fd)))
        worst["section_H"] = max(worst["section_H"], abs(section_mean_curvature(fd)))
        worst["unit_identity"] = max(worst["unit_identity"],
                                     abs(fd.grad_xi_sq + fd.theta ** 2 - 1.0))
        if idx in theta_probe:
            worst["grad_theta"] = max(worst["grad_theta"],
                                      _theta_field_residual(surf, u, fd))
        ld = lorentz_data(surf, jt, fd)
        if ld.H_L_direct is not None:
            spacelike += 1
            worst["H_L"] = max(worst["H_L"], abs(ld.H_L_direct))
    helix = _helix_theta_drift(surf, grid[len(grid) // 2])

    checks = [CheckResult("mean_curvature", worst["H"], tol["H"], len(grid)),
              CheckResult("asymptotic_direction", worst["asymptotic"],
                          tol["asymptotic"], len(grid)),
              CheckResult("section_mean_curvature", worst["section_H"],
                          tol["section_H"], len(grid)),
              CheckResult("unit_identity", worst["unit_identity"],
                          tol["unit_identity"], len(grid)),
              CheckResult("grad_theta_identity", worst["grad_theta"],
                          tol["grad_theta"], len(theta_probe)),
              CheckResult("helix_theta_drift", helix, tol["helix"], 1)]
    if spacelike:
        checks.append(CheckResult("lorentz_mean_curvature", worst["H_L"],
                                  tol["H_L"], spacelike))
    env = {"grid_size": int(len(grid)), "seed": int(seed),
           "spacelike_samples": int(spacelike),
           "horizontal_excluded": int(horizontal)}
    if surf.meta.get("kind") == "berger_helicoid":
        pr = surf.meta["params"]
        taus = np.unique(grid[:, 1])[:3]
        env["omega_reference"] = {f"tau={t:.6g}": float(paper_omega(
            t, pr["alpha"], pr["a"], pr["delta"])) for t in taus}
    return VerificationReport(surface=surf.name, checks=checks, environment=env)
