"""Interior sampling helpers: grids, random points, rays into vertices."""

from __future__ import annotations

import numpy as np

from .polytope import DelzantPolytope, VertexData

DEFAULT_MARGIN_FACTOR = 1e-3


def bounding_box(p: DelzantPolytope) -> tuple[np.ndarray, np.ndarray]:
    verts = p.vertex_floats
    return verts.min(axis=0), verts.max(axis=0)


def diameter(p: DelzantPolytope) -> float:
    verts = p.vertex_floats
    diffs = verts[:, None, :] - verts[None, :, :]
    return float(np.sqrt((diffs**2).sum(axis=2)).max())


def default_margin(p: DelzantPolytope) -> float:
    return DEFAULT_MARGIN_FACTOR * diameter(p)


def interior_distance(p: DelzantPolytope, x) -> np.ndarray | float:
    """Euclidean distance from x to the nearest bounding hyperplane."""
    lam = p.lambdas(x) / p.normal_lengths
    return lam.min(axis=-1)


def interior_grid(p: DelzantPolytope, per_axis: int, margin: float | None = None) -> np.ndarray:
    """Uniform lattice over the bounding box, kept where the distance to
    every facet is at least `margin` (default 1e-3 * diameter)."""
    if per_axis < 3:
        raise ValueError("grid resolution must be at least 3 per axis")
    if margin is None:
        margin = default_margin(p)
    lo, hi = bounding_box(p)
    axes = [np.linspace(lo[i] + margin, hi[i] - margin, per_axis) for i in range(p.n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    keep = interior_distance(p, pts) >= margin
    pts = pts[keep]
    if not len(pts):
        raise ValueError("margin leaves no interior grid points")
    return pts


def random_interior_points(
    p: DelzantPolytope,
    count: int,
    margin: float | None = None,
    rng: np.random.Generator | int | None = 0,
) -> np.ndarray:
    """Rejection-sampled uniform interior points with a distance margin."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if margin is None:
        margin = default_margin(p)
    lo, hi = bounding_box(p)
    out = np.empty((count, p.n))
    have = 0
    for _ in range(10_000):
        batch = rng.uniform(lo, hi, size=(max(4 * count, 64), p.n))
        good = batch[interior_distance(p, batch) >= margin]
        take = min(len(good), count - have)
        out[have : have + take] = good[:take]
        have += take
        if have == count:
            return out
    raise RuntimeError("rejection sampling failed to fill the request")


def geometric_ts(t0: float = 1e-2, count: int = 15) -> np.ndarray:
    """t0 * 2^-m for m = 0..count-1 (count capped at 21)."""
    if not 1 <= count <= 21:
        raise ValueError("count must be between 1 and 21")
    return t0 * 2.0 ** -np.arange(count)


def interior_rays(vertex: VertexData, count: int = 3) -> list[np.ndarray]:
    """Distinct directions pointing from a vertex into the interior.

    Built from positive combinations of the edge generators, so each ray
    enters the polytope for small enough step.
    """
    gens = [np.array(g, dtype=float) for g in vertex.edge_generators]
    if not gens:
        raise ValueError("vertex has no edge generators")
    base = np.sum(gens, axis=0)
    candidates = [base] + [base + g for g in gens] + [base + 2 * g for g in gens]
    k = 2
    while len(candidates) < count + len(gens):
        k += 1
        candidates += [base + k * g for g in gens]
    rays: list[np.ndarray] = []
    for c in candidates:
        if not any(np.array_equal(c, r) for r in rays):
            rays.append(c)
        if len(rays) == count:
            break
    return rays


def ray_points(vertex, ray, ts) -> np.ndarray:
    """x = v + t * d for each t."""
    if isinstance(vertex, VertexData):
        v = vertex.as_float()
    else:
        v = np.asarray(vertex, dtype=float)
    ts = np.asarray(ts, dtype=float)
    return v[None, :] + ts[:, None] * np.asarray(ray, dtype=float)[None, :]
