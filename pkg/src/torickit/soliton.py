"""Fano normalisation, soliton vectors, and the Einstein verdict pipeline.

For a Delzant polytope whose normal fan is Fano, the anticanonical model
puts every facet at lattice distance one from the origin:
lambda_k(x) = <u_k, x> + 1.  On that model the soliton vector is the
unique minimiser of the strictly convex functional

    F(a) = integral over the polytope of exp(<a, x>) dx,

equivalently the unique a with weighted barycenter zero.  The final
verdict pipeline replays the geometric argument numerically: if
q(x) = a^T G^{-1}(x) a is affine, vanishes at all vertices, and the
vertices affinely span, then q is identically zero, so the soliton
field vanishes and the metric is Einstein.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import exact, sampling
from .curvature import AffineFit, affine_fit
from .errors import MaxIterations, NotFano, QuadratureNotConverged, ToricError
from .polytope import (
    AffineForm,
    DelzantPolytope,
    affine_span_rank,
    check_delzant,
)
from .potential import SymplecticPotential, metric_jet

QUADRATURE_ORDER = 20
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 100


# ---------------------------------------------------------------------------
# triangulation (exact)

def _face_simplices(coords, incidences, nforms, vidx, dim):
    """Pulling triangulation of one face, as tuples of vertex indices.

    The face is the convex hull of the vertices listed in `vidx`; it is
    coned from its lexicographically smallest vertex over its own
    facets, recursively.
    """
    if len(vidx) == dim + 1:
        return [tuple(vidx)]
    apex = min(vidx, key=lambda i: coords[i])
    simplices = []
    seen = set()
    for k in range(nforms):
        if k in incidences[apex]:
            continue
        sub = [i for i in vidx if k in incidences[i]]
        if len(sub) < dim:
            continue
        if exact.affine_rank([coords[i] for i in sub]) != dim - 1:
            continue
        key = frozenset(sub)
        if key in seen:
            continue
        seen.add(key)
        for s in _face_simplices(coords, incidences, nforms, sorted(sub), dim - 1):
            simplices.append(s + (apex,))
    return simplices


def triangulate(p: DelzantPolytope):
    """Exact simplices covering the polytope, coned from the lex-smallest
    vertex; each simplex is a tuple of n+1 exact coordinate tuples."""
    coords = [v.coordinates for v in p.vertices]
    incidences = [v.incident_facets for v in p.vertices]
    index_simplices = _face_simplices(
        coords,
        incidences,
        len(p.forms),
        sorted(range(len(coords)), key=lambda i: coords[i]),
        p.n,
    )
    return tuple(tuple(coords[i] for i in s) for s in index_simplices)


def _simplex_volume(simplex) -> Fraction:
    base = simplex[0]
    rows = [[c - b for c, b in zip(v, base)] for v in simplex[1:]]
    n = len(rows)
    return abs(exact.det(rows)) / Fraction(factorial(n))


def exact_volume(p: DelzantPolytope) -> Fraction:
    """Rational volume, summed over the exact triangulation."""
    return sum((_simplex_volume(s) for s in triangulate(p)), Fraction(0))


# ---------------------------------------------------------------------------
# quadrature

@lru_cache(maxsize=None)
def _duffy_rule(n: int, order: int):
    """Tensor Gauss-Legendre rule collapsed onto the reference simplex."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    xi = 0.5 * (nodes + 1.0)
    wi = 0.5 * weights
    grids = np.meshgrid(*([xi] * n), indexing="ij")
    wgrids = np.meshgrid(*([wi] * n), indexing="ij")
    pts = np.empty((order**n, n))
    w = np.ones(order**n)
    remaining = np.ones(order**n)
    for i in range(n):
        gi = grids[i].ravel()
        pts[:, i] = gi * remaining
        w *= wgrids[i].ravel() * (1.0 - gi) ** (n - 1 - i)
        remaining = remaining * (1.0 - gi)
    return pts, w


def _simplex_nodes(simplex, order: int):
    """Mapped quadrature nodes and weights for one exact simplex."""
    n = len(simplex) - 1
    v0 = np.array([float(c) for c in simplex[0]])
    edges = np.array(
        [[float(c - b) for c, b in zip(v, simplex[0])] for v in simplex[1:]]
    ).T
    s, w = _duffy_rule(n, order)
    jac = abs(float(np.linalg.det(edges)))
    return v0[None, :] + s @ edges.T, w * jac


def _bisect_simplex(simplex):
    """Split across the longest edge (ties broken lexicographically)."""
    best = None
    for i, j in itertools.combinations(range(len(simplex)), 2):
        d = [a - b for a, b in zip(simplex[i], simplex[j])]
        length = sum(c * c for c in d)
        if best is None or length > best[0]:
            best = (length, i, j)
    _, i, j = best
    mid = tuple((a + b) / 2 for a, b in zip(simplex[i], simplex[j]))
    left = tuple(mid if k == i else v for k, v in enumerate(simplex))
    right = tuple(mid if k == j else v for k, v in enumerate(simplex))
    return left, right


class FanoPolytope:
    """Anticanonical Delzant model: every offset is -1, origin interior."""

    def __init__(self, base: DelzantPolytope):
        self.base = base
        self._node_cache: dict[bool, list] = {}

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def vertices(self):
        return self.base.vertices

    def _nodes(self, refined: bool):
        got = self._node_cache.get(refined)
        if got is None:
            simplices = triangulate(self.base)
            if refined:
                simplices = tuple(
                    child for s in simplices for child in _bisect_simplex(s)
                )
            got = [_simplex_nodes(s, QUADRATURE_ORDER) for s in simplices]
            self._node_cache[refined] = got
        return got

    def to_json(self) -> dict:
        return self.base.to_json()

    def __repr__(self):
        return f"FanoPolytope({self.base!r})"


def fano_normalize(p: DelzantPolytope) -> FanoPolytope:
    """Anticanonical model with the same normals and offsets all -1.

    Raises NotFano when the model is not Delzant (for example three
    facets meeting at a candidate vertex) or the facet-vertex incidence
    combinatorics differ from those of p.
    """
    forms = [AffineForm(u=f.u, b=Fraction(-1)) for f in p.forms]
    try:
        model = DelzantPolytope.from_forms(forms, p.n)
    except ToricError as e:
        raise NotFano(f"anticanonical model degenerates: {e}") from e
    report = check_delzant(model)
    if not report.is_delzant:
        bad = report.failing()[0]
        raise NotFano(
            f"anticanonical vertex {tuple(map(str, bad.coordinates))} has "
            f"{bad.facet_count} facets, {bad.edge_count} edges, "
            f"edge determinant {bad.edge_det}"
        )
    original = {v.incident_facets for v in p.vertices}
    normalized = {v.incident_facets for v in model.vertices}
    if original != normalized:
        raise NotFano("anticanonical model changes the facet incidence combinatorics")
    return FanoPolytope(model)


# ---------------------------------------------------------------------------
# integrals and the soliton vector

def _moments(fp: FanoPolytope, a: np.ndarray, order: int, refined: bool):
    """(integral e^{<a,x>}, integral x e, integral x x^T e) up to `order`."""
    m0_parts, m1_parts, m2_parts = [], [], []
    for pts, w in fp._nodes(refined):
        ew = np.exp(pts @ a) * w
        m0_parts.append(ew.sum())
        if order >= 1:
            m1_parts.append(pts.T @ ew)
        if order >= 2:
            m2_parts.append(np.einsum("qi,qj,q->ij", pts, pts, ew))
    m0 = float(np.sum(m0_parts))
    m1 = np.sum(m1_parts, axis=0) if order >= 1 else None
    m2 = np.sum(m2_parts, axis=0) if order >= 2 else None
    return m0, m1, m2


def polytope_integral(fp: FanoPolytope, a, integrand: str = "1", rtol: float = 1e-9):
    """Integral of {1, x, x x^T}[integrand] * e^{<a, x>} over the polytope.

    A second estimate on uniformly bisected simplices serves as the
    error control; disagreement beyond rtol raises QuadratureNotConverged.
    """
    if isinstance(fp, DelzantPolytope):
        fp = FanoPolytope(fp)
    a = np.zeros(fp.n) if a is None else np.asarray(a, dtype=float)
    order = {"1": 0, "x": 1, "xx": 2}.get(integrand)
    if order is None:
        raise ValueError(f"unknown integrand {integrand!r}")
    base = _moments(fp, a, order, refined=False)[order]
    check = _moments(fp, a, order, refined=True)[order]
    err = float(np.max(np.abs(np.asarray(base) - np.asarray(check))))
    scale = max(1.0, float(np.max(np.abs(np.asarray(base)))))
    if err > rtol * scale:
        raise QuadratureNotConverged(
            f"refinement changed the integral by {err:.3e} (rtol {rtol:.1e})"
        )
    return base


@dataclass(frozen=True)
class SolitonData:
    a: np.ndarray
    gradient_residual: float
    iterations: int

    def to_json(self) -> dict:
        return {
            "a": [float(c) for c in self.a],
            "gradient_residual": float(self.gradient_residual),
            "iterations": int(self.iterations),
        }


def soliton_vector(
    fp: FanoPolytope, tol: float = NEWTON_TOL, max_iterations: int = NEWTON_MAX_ITER
) -> SolitonData:
    """Damped Newton minimisation of F(a) = integral e^{<a,x>} dx.

    The gradient is the weighted barycenter integral x e^{<a,x>}, the
    Hessian integral x x^T e^{<a,x>} is positive definite, so Newton
    steps with Armijo backtracking converge from a = 0.
    """
    a = np.zeros(fp.n)
    f0, grad, hess = _moments(fp, a, 2, refined=False)
    for iteration in range(max_iterations):
        residual = float(np.linalg.norm(grad))
        if residual <= tol:
            return SolitonData(a=a, gradient_residual=residual, iterations=iteration)
        direction = np.linalg.solve(hess, -grad)
        slope = float(grad @ direction)
        step = 1.0
        while step > 1e-14:
            trial = a + step * direction
            f_trial = _moments(fp, trial, 0, refined=False)[0]
            if f_trial <= f0 + 1e-4 * step * slope:
                break
            step *= 0.5
        a = a + step * direction
        f0, grad, hess = _moments(fp, a, 2, refined=False)
    raise MaxIterations(
        f"Newton solver stalled at residual {float(np.linalg.norm(grad)):.3e} "
        f"after {max_iterations} iterations"
    )


# ---------------------------------------------------------------------------
# verdict pipeline

class Conclusion(Enum):
    EINSTEIN = "Einstein"
    HYPOTHESIS_FAILS = "HypothesisFails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EinsteinVerdict:
    conclusion: Conclusion
    fit: AffineFit
    vertex_values: np.ndarray
    rank: int
    certificates: dict

    def to_json(self) -> dict:
        return {
            "conclusion": self.conclusion.value,
            "affine_fit": {
                "constant": self.fit.constant,
                "gradient": [float(c) for c in self.fit.gradient],
                "max_residual": self.fit.max_residual,
                "n_samples": self.fit.n_samples,
            },
            "vertex_values": [float(v) for v in self.vertex_values],
            "rank": int(self.rank),
            "certificates": self.certificates,
        }


def einstein_verdict_from_samples(
    polytope: DelzantPolytope,
    points,
    values,
    affinity_tol: float | None = None,
    vertex_tol: float | None = None,
) -> EinsteinVerdict:
    """Run the verdict pipeline on precomputed samples of q = |grad f|^2.

    Steps: (1) affine fit of q; failure of affinity means the metric
    cannot satisfy the soliton hypothesis (HypothesisFails).  (2) the
    fitted affine function must vanish at every vertex.  (3) the
    vertices must affinely span.  (4) q itself must be as small as the
    zero affine function predicts.  Steps 2-4 cannot fail for genuine
    metric data, so their failure yields Inconclusive.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(values, dtype=float)
    spread = float(vals.max() - vals.min()) if len(vals) else 0.0
    scale = float(np.max(np.abs(vals))) if len(vals) else 0.0
    if affinity_tol is None:
        # floor keeps exactly-constant data from tripping on lstsq noise
        affinity_tol = max(1e-6 * spread, 1e-12 * max(1.0, scale))
    if vertex_tol is None:
        vertex_tol = 1e-6 * max(1.0, spread)

    fit = affine_fit(pts, vals)
    affine_ok = fit.max_residual <= affinity_tol

    vertex_values = np.array([fit(v.as_float()) for v in polytope.vertices])
    vertex_ok = bool(np.max(np.abs(vertex_values)) <= vertex_tol)

    rank = affine_span_rank([v.coordinates for v in polytope.vertices])
    rank_ok = rank == polytope.n

    coef_norm = float(np.hypot(fit.constant, np.linalg.norm(fit.gradient)))
    zero_bound = polytope.n * vertex_tol * (1.0 + coef_norm)
    max_q = float(np.max(np.abs(vals)))
    zero_ok = max_q <= zero_bound

    if not affine_ok:
        conclusion = Conclusion.HYPOTHESIS_FAILS
    elif vertex_ok and rank_ok and zero_ok:
        conclusion = Conclusion.EINSTEIN
    else:
        conclusion = Conclusion.INCONCLUSIVE

    certificates = {
        "affinity": {
            "max_residual": fit.max_residual,
            "tolerance": affinity_tol,
            "passed": bool(affine_ok),
        },
        "vertex_vanishing": {
            "max_abs_value": float(np.max(np.abs(vertex_values))),
            "tolerance": vertex_tol,
            "passed": vertex_ok,
        },
        "affine_span": {
            "rank": int(rank),
            "required": int(polytope.n),
            "passed": bool(rank_ok),
        },
        "zero_function": {
            "max_abs_q": max_q,
            "bound": zero_bound,
            "passed": bool(zero_ok),
        },
    }
    return EinsteinVerdict(
        conclusion=conclusion,
        fit=fit,
        vertex_values=vertex_values,
        rank=rank,
        certificates=certificates,
    )


def verify_einstein(
    pot: SymplecticPotential,
    a,
    grid: int = 20,
    margin: float | None = None,
    affinity_tol: float | None = None,
    vertex_tol: float | None = None,
) -> EinsteinVerdict:
    """Sample q(x) = a^T G^{-1}(x) a on an interior grid and decide whether
    the soliton field must vanish (Einstein), the affinity hypothesis
    fails, or the certificates disagree (Inconclusive)."""
    a = np.asarray(a, dtype=float)
    pts = sampling.interior_grid(pot.polytope, grid, margin)
    values = np.array([float(a @ metric_jet(pot, x).G_inv @ a) for x in pts])
    return einstein_verdict_from_samples(
        pot.polytope, pts, values, affinity_tol=affinity_tol, vertex_tol=vertex_tol
    )
