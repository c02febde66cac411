"""Symplectic potentials and Hessian metric jets on Delzant polytopes.

Conventions used throughout the package:

    g(x)  = (1/2) * ( sum_k lambda_k(x) log lambda_k(x) + h(x) )
    G(x)  = Hess g(x)
          = (1/2) * sum_k u_k u_k^T / lambda_k(x)  +  (1/2) Hess h(x)

with lambda_k(x) = <u_k, x> - b_k the defining forms of the polytope and
h a polynomial with rational coefficients that keeps G positive definite
on the interior.  With h = 0 this is the canonical (Guillemin) potential
of the polytope; on the unit interval it gives G = 1/(2x(1-x)) and on
the standard simplex G(1/3, 1/3) = [[3, 3/2], [3/2, 3]].

The inverse metric G^{-1} extends continuously by zero to the vertices,
and 1/det G factors as delta(x) * prod_k lambda_k(x) with delta smooth
and positive up to the boundary; the probe helpers below measure both
facts numerically along rays into a vertex.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite, OutsideDomain, ParseError
from .polynomial import Polynomial, polynomial_from_json
from .polytope import DelzantPolytope, VertexData, polytope_from_json


class SymplecticPotential:
    """Canonical potential of a polytope plus a polynomial perturbation."""

    def __init__(self, polytope: DelzantPolytope, h: Polynomial | None = None):
        self.polytope = polytope
        self.h = h if h is not None else Polynomial.zero(polytope.n)
        if self.h.nvars != polytope.n:
            raise ValueError(
                f"h has {self.h.nvars} variables, polytope dimension is {polytope.n}"
            )
        self._h_cache: dict[tuple[int, ...], Polynomial] = {(): self.h}

    @classmethod
    def guillemin(cls, polytope: DelzantPolytope) -> "SymplecticPotential":
        return cls(polytope, None)

    @property
    def n(self) -> int:
        return self.polytope.n

    def _h_derivative(self, indices: tuple[int, ...]) -> Polynomial:
        key = tuple(sorted(indices))
        poly = self._h_cache.get(key)
        if poly is None:
            poly = self._h_cache[key[:-1]] if key[:-1] in self._h_cache else None
            if poly is None:
                poly = self._h_derivative(key[:-1])
            poly = poly.diff(key[-1])
            self._h_cache[key] = poly
        return poly

    def h_tensor(self, order: int, x: np.ndarray) -> np.ndarray:
        """Symmetric tensor of order-`order` partial derivatives of h at x."""
        n = self.n
        if order == 0:
            return np.array(self.h(x))
        out = np.zeros((n,) * order)
        for combo in itertools.combinations_with_replacement(range(n), order):
            val = self._h_derivative(combo)(x)
            for perm in set(itertools.permutations(combo)):
                out[perm] = val
        return out

    def lambdas(self, x: np.ndarray) -> np.ndarray:
        return self.polytope.lambdas(x)

    def to_json(self) -> dict:
        return {"polytope": self.polytope.to_json(), "h": self.h.to_json()}

    def __repr__(self):
        tag = "guillemin" if self.h.is_zero else f"h degree {self.h.degree}"
        return f"SymplecticPotential({self.polytope!r}, {tag})"


@dataclass(frozen=True)
class PotentialJet:
    """Derivatives of g at an interior point, up to the requested order."""

    x: np.ndarray
    order: int
    value: float
    grad: np.ndarray | None
    hess: np.ndarray | None
    d3: np.ndarray | None
    d4: np.ndarray | None


def potential_jet(pot: SymplecticPotential, x, order: int = 2) -> PotentialJet:
    """Evaluate g and its derivatives (order <= 4) at an interior point.

    The canonical part differentiates in closed form:
        grad  += (1/2) sum u_k (log lambda_k + 1)
        hess  += (1/2) sum u_k u_k / lambda_k
        d3    -= (1/2) sum u_k^{(3)} / lambda_k^2
        d4    += sum u_k^{(4)} / lambda_k^3
    Raises OutsideDomain as soon as some lambda_k <= 0.
    """
    if not 0 <= order <= 4:
        raise ValueError("jet order must be between 0 and 4")
    x = np.asarray(x, dtype=float)
    p = pot.polytope
    lam = p.lambdas(x)
    bad = np.nonzero(lam <= 0)[0]
    if bad.size:
        raise OutsideDomain(x, bad[0], lam[bad[0]])
    u = p.normals_float

    value = 0.5 * (float(np.sum(lam * np.log(lam))) + pot.h(x))
    grad = hess = d3 = d4 = None
    if order >= 1:
        grad = 0.5 * (u.T @ (np.log(lam) + 1.0) + pot.h_tensor(1, x))
    if order >= 2:
        hess = 0.5 * (np.einsum("ki,kj,k->ij", u, u, 1.0 / lam) + pot.h_tensor(2, x))
        hess = 0.5 * (hess + hess.T)
    if order >= 3:
        d3 = 0.5 * (
            -np.einsum("ki,kj,kl,k->ijl", u, u, u, lam**-2.0) + pot.h_tensor(3, x)
        )
    if order >= 4:
        d4 = 0.5 * (
            2.0 * np.einsum("ki,kj,kl,km,k->ijlm", u, u, u, u, lam**-3.0)
            + pot.h_tensor(4, x)
        )
    return PotentialJet(x=x, order=order, value=value, grad=grad, hess=hess, d3=d3, d4=d4)


def _cofactor_matrix(g: np.ndarray) -> np.ndarray:
    """Cofactor matrix from explicit minors (independent of the inverse)."""
    n = g.shape[0]
    if n == 1:
        return np.array([[1.0]])
    if n == 2:
        return np.array([[g[1, 1], -g[1, 0]], [-g[0, 1], g[0, 0]]])
    cof = np.empty_like(g)
    idx = np.arange(n)
    for i in range(n):
        for j in range(n):
            minor = g[np.ix_(idx != i, idx != j)]
            cof[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return cof


@dataclass(frozen=True)
class MetricJet:
    """G, its inverse, determinant, cofactors, and optional derivatives.

    dG[l] is the l-th partial derivative of G; d2G[m, l] the second
    partial.  cof comes from explicit minors, so det_G * G_inv = cof^T
    is a genuine cross-check rather than an identity by construction.
    """

    x: np.ndarray
    G: np.ndarray
    G_inv: np.ndarray
    det_G: float
    cof: np.ndarray
    dG: np.ndarray | None
    d2G: np.ndarray | None


def metric_jet(pot: SymplecticPotential, x, with_derivatives: bool = False) -> MetricJet:
    """Hessian metric data at an interior point.

    Positive definiteness is certified by a Cholesky factorisation;
    failure raises NotPositiveDefinite carrying the offending eigenvalue.
    """
    jet = potential_jet(pot, x, order=4 if with_derivatives else 2)
    g = jet.hess
    n = g.shape[0]
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        eig = float(np.linalg.eigvalsh(g)[0])
        raise NotPositiveDefinite(np.asarray(x, dtype=float), eig) from None
    det_g = float(np.prod(np.diag(chol)) ** 2)
    g_inv = np.linalg.solve(g, np.eye(n))
    # One Newton refinement step keeps G*G_inv - I near the rounding floor.
    g_inv = g_inv @ (2.0 * np.eye(n) - g @ g_inv)
    g_inv = 0.5 * (g_inv + g_inv.T)
    return MetricJet(
        x=jet.x,
        G=g,
        G_inv=g_inv,
        det_G=det_g,
        cof=_cofactor_matrix(g),
        dG=jet.d3,
        d2G=jet.d4,
    )


# ---------------------------------------------------------------------------
# boundary behaviour diagnostics

@dataclass(frozen=True)
class DetFactorizationReport:
    """delta(x) = 1 / (det G * prod_k lambda_k) sampled over points."""

    deltas: np.ndarray
    min_delta: float
    max_delta: float
    ratio: float
    passed: bool


def det_factorization_check(
    pot: SymplecticPotential, points, max_ratio: float = 1e3
) -> DetFactorizationReport:
    """Sample delta and require positivity with bounded variation."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    deltas = np.empty(len(pts))
    for i, x in enumerate(pts):
        jet = metric_jet(pot, x)
        lam = pot.lambdas(x)
        deltas[i] = 1.0 / (jet.det_G * float(np.prod(lam)))
    lo, hi = float(deltas.min()), float(deltas.max())
    ratio = hi / lo if lo > 0 else float("inf")
    return DetFactorizationReport(
        deltas=deltas,
        min_delta=lo,
        max_delta=hi,
        ratio=ratio,
        passed=lo > 0 and ratio <= max_ratio,
    )


@dataclass(frozen=True)
class VanishingProbe:
    """max-norm of G^{-1} along x = v + t*d for a geometric ladder of t."""

    ts: np.ndarray
    norms: np.ndarray
    slope: float
    tolerance: float
    passed: bool


def vertex_vanishing_probe(
    pot: SymplecticPotential,
    vertex,
    ray,
    ts,
    tolerance: float = 1e-4,
    min_slope: float = 0.9,
) -> VanishingProbe:
    """Check that G^{-1} vanishes at least linearly along a ray into a vertex.

    `vertex` may be a VertexData or an exact coordinate tuple; `ray` must
    point into the interior for every sampled t.
    """
    if isinstance(vertex, VertexData):
        v = vertex.as_float()
    else:
        v = np.array([float(c) for c in vertex], dtype=float)
    d = np.asarray(ray, dtype=float)
    ts = np.asarray(ts, dtype=float)
    norms = np.empty_like(ts)
    for i, t in enumerate(ts):
        jet = metric_jet(pot, v + t * d)
        norms[i] = float(np.max(np.abs(jet.G_inv)))
    slope = float(np.polyfit(np.log(ts), np.log(norms), 1)[0])
    decreasing = bool(np.all(np.diff(norms) <= norms[:-1] * 1e-9 + 1e-300))
    passed = decreasing and norms[-1] <= tolerance and slope >= min_slope
    return VanishingProbe(
        ts=ts, norms=norms, slope=slope, tolerance=tolerance, passed=passed
    )


@dataclass(frozen=True)
class CofactorGrowthReport:
    """cof(G)_{ij} * x_1...x_n along a ray into the origin vertex."""

    ts: np.ndarray
    products: np.ndarray
    final_max: float
    tolerance: float
    passed: bool


def cofactor_growth_check(
    pot: SymplecticPotential, ray, ts, tolerance: float = 1e-6
) -> CofactorGrowthReport:
    """Verify cof(G)_{ij} = o(1/(x_1...x_n)) into the origin vertex.

    Requires a polytope normalised at the vertex: the first n forms must
    be the coordinate half spaces {x_i >= 0}, so the incident lambdas
    are the coordinates themselves.
    """
    p = pot.polytope
    n = p.n
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for i in range(n):
        if p.forms[i].u != basis[i] or p.forms[i].b != 0:
            raise ValueError(
                "cofactor growth check needs a polytope normalised at the "
                "origin vertex (first n forms = coordinate half spaces)"
            )
    d = np.asarray(ray, dtype=float)
    ts = np.asarray(ts, dtype=float)
    products = np.empty((len(ts), n, n))
    for m, t in enumerate(ts):
        x = t * d
        jet = metric_jet(pot, x)
        products[m] = jet.cof * float(np.prod(x))
    mags = np.abs(products)
    final_max = float(mags[-1].max())
    tail = mags[len(ts) // 2 :]
    trend = bool(np.all(np.diff(tail, axis=0) <= tail[:-1] * 1e-6 + 1e-15))
    return CofactorGrowthReport(
        ts=ts,
        products=products,
        final_max=final_max,
        tolerance=tolerance,
        passed=trend and final_max <= tolerance,
    )


# ---------------------------------------------------------------------------
# serialization

def potential_from_json(doc) -> SymplecticPotential:
    """Parse {"polytope": {...}, "h": {"monomials": [...]}}."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "polytope" not in doc:
        raise ParseError("potential document must contain 'polytope'")
    polytope = polytope_from_json(doc["polytope"])
    h = polynomial_from_json(doc.get("h"), polytope.n)
    return SymplecticPotential(polytope, h)


def potential_to_json(pot: SymplecticPotential) -> dict:
    return pot.to_json()
