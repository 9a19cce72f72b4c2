"""Shape geometry: smooth closed 2D contours and triangulated 3D surfaces.

Kernel assembly needs positions, outward normals, curvature and quadrature
weights.  2D contours are 2pi-periodic maps; node sets are produced by
resampling the curve at constant speed (equal arc-length steps) so that the
periodic trapezoid rule has uniform weights w = L/N.  Uniform weights are
what make the discrete Gauss identity (column sums of the kernel matrix
equal to one) hold to spectral accuracy.

3D surfaces are subdivided icosahedra projected to a sphere (optionally
anisotropically scaled), with per-triangle centroids, outward normals and
areas for centroid collocation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence

import numpy as np
from scipy.spatial import ConvexHull


class ShapeError(ValueError):
    """Invalid or unusable shape description."""


# ---------------------------------------------------------------------------
# 2D contours
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Contour2D:
    """Closed positively-oriented C2 curve given by a 2pi-periodic map.

    ``gamma``, ``dgamma``, ``ddgamma`` are vectorized callables returning
    arrays of shape (2, len(t)).  ``params`` echoes the descriptor used to
    build the contour (lengths in dimensionless units).
    """

    kind: str
    params: Dict[str, float]
    gamma: Callable[[np.ndarray], np.ndarray]
    dgamma: Callable[[np.ndarray], np.ndarray]
    ddgamma: Callable[[np.ndarray], np.ndarray]

    def point(self, t):
        return np.asarray(self.gamma(np.atleast_1d(np.asarray(t, float))))

    def curvature(self, t):
        """Signed curvature at parameter t; positive for convex CCW curves."""
        t = np.atleast_1d(np.asarray(t, float))
        d1 = self.dgamma(t)
        d2 = self.ddgamma(t)
        speed = np.hypot(d1[0], d1[1])
        kappa = (d1[0] * d2[1] - d1[1] * d2[0]) / speed**3
        return kappa if kappa.size > 1 else float(kappa[0])

    def length(self, samples: int = 4096) -> float:
        """Arc length via FFT of the speed (spectrally accurate)."""
        u = 2.0 * np.pi * np.arange(samples) / samples
        d1 = self.dgamma(u)
        speed = np.hypot(d1[0], d1[1])
        return float(2.0 * np.pi * np.mean(speed))

    def scaled(self, s: float) -> "Contour2D":
        """Geometrically similar contour, all lengths multiplied by s."""
        return make_contour(scale_descriptor(self.descriptor(), s))

    def descriptor(self) -> Dict:
        d = {"kind": self.kind}
        d.update(self.params)
        return d


@dataclass(frozen=True)
class NodeSet2D:
    """Quadrature nodes on a contour: equal arc-length spacing, w = L/N."""

    points: np.ndarray      # (N, 2)
    normals: np.ndarray     # (N, 2) outward unit
    curvatures: np.ndarray  # (N,)
    weights: np.ndarray     # (N,) all equal to L/N
    length: float
    params: np.ndarray      # (N,) parameter values in the original map

    @property
    def n(self) -> int:
        return len(self.weights)


def _polar_contour(kind, params, radius, dradius, ddradius):
    """Build a contour r(t)·(cos t, sin t) from a polar radius function."""

    def gamma(t):
        r = radius(t)
        return np.array([r * np.cos(t), r * np.sin(t)])

    def dgamma(t):
        r, rp = radius(t), dradius(t)
        c, s = np.cos(t), np.sin(t)
        return np.array([rp * c - r * s, rp * s + r * c])

    def ddgamma(t):
        r, rp, rpp = radius(t), dradius(t), ddradius(t)
        c, s = np.cos(t), np.sin(t)
        return np.array([rpp * c - 2 * rp * s - r * c,
                         rpp * s + 2 * rp * c - r * s])

    return Contour2D(kind, params, gamma, dgamma, ddgamma)


def _superellipse_radius(a: float, b: float, p: int):
    """Polar radius of |x/a|^p + |y/b|^p = 1 with even p (analytic in t)."""

    def f_terms(t):
        c, s = np.cos(t), np.sin(t)
        f = (c / a) ** p + (s / b) ** p
        fp = p * (-(c ** (p - 1)) * s / a**p + (s ** (p - 1)) * c / b**p)
        fpp = p * ((p - 1) * (c ** (p - 2)) * s * s / a**p - (c**p) / a**p
                   + (p - 1) * (s ** (p - 2)) * c * c / b**p - (s**p) / b**p)
        return f, fp, fpp

    def radius(t):
        f, _, _ = f_terms(t)
        return f ** (-1.0 / p)

    def dradius(t):
        f, fp, _ = f_terms(t)
        return -(1.0 / p) * f ** (-1.0 / p - 1) * fp

    def ddradius(t):
        f, fp, fpp = f_terms(t)
        return ((1.0 / p) * (1.0 / p + 1) * f ** (-1.0 / p - 2) * fp * fp
                - (1.0 / p) * f ** (-1.0 / p - 1) * fpp)

    return radius, dradius, ddradius


_SUPERELLIPSE_ORDERS = tuple(range(4, 42, 2))


def _corner_radius_rel(p: int) -> float:
    """Min radius of curvature of the unit superellipse (relative units)."""
    t = np.linspace(0.0, np.pi / 2, 2048)
    radius, dradius, ddradius = _superellipse_radius(1.0, 1.0, p)
    c = _polar_contour("superellipse", {}, radius, dradius, ddradius)
    kap = c.curvature(t)
    return float(1.0 / np.max(kap))


def _pick_superellipse_order(rel_radius: float) -> int:
    table = [(_corner_radius_rel(p), p) for p in _SUPERELLIPSE_ORDERS]
    best = min(table, key=lambda rp: abs(rp[0] - rel_radius))
    return best[1]


def make_contour(descriptor: Dict) -> Contour2D:
    """Build a contour from a shape descriptor dict.

    Supported kinds and fields:
      {"kind": "circle", "r": 1.0}
      {"kind": "ellipse", "a": 2.0, "b": 1.0}
      {"kind": "kite", "skew": 0.35, "height": 1.2, "scale": 1.0}
      {"kind": "fourier-star", "base_radius": 1.0,
       "cos_coeffs": [...], "sin_coeffs": [...]}   # index k = 1, 2, ...
      {"kind": "rounded-rectangle", "width": 2.0, "height": 2.0,
       "corner_radius": 0.25}

    Corners are always smooth: the rounded-rectangle uses a superellipse
    profile whose corner radius of curvature best matches ``corner_radius``
    (reported back in params as ``actual_corner_radius``).  Raw polygons and
    zero rounding radius are rejected.
    """
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ShapeError("shape descriptor must be a dict with a 'kind' field")
    kind = descriptor["kind"]
    d = {k: v for k, v in descriptor.items() if k != "kind"}

    if kind == "circle":
        r = float(d.get("r", 1.0))
        if r <= 0:
            raise ShapeError("circle radius must be positive")

        def gamma(t):
            return np.array([r * np.cos(t), r * np.sin(t)])

        def dgamma(t):
            return np.array([-r * np.sin(t), r * np.cos(t)])

        def ddgamma(t):
            return np.array([-r * np.cos(t), -r * np.sin(t)])

        return Contour2D("circle", {"r": r}, gamma, dgamma, ddgamma)

    if kind == "ellipse":
        a, b = float(d.get("a", 2.0)), float(d.get("b", 1.0))
        if a <= 0 or b <= 0:
            raise ShapeError("ellipse semi-axes must be positive")

        def gamma(t):
            return np.array([a * np.cos(t), b * np.sin(t)])

        def dgamma(t):
            return np.array([-a * np.sin(t), b * np.cos(t)])

        def ddgamma(t):
            return np.array([-a * np.cos(t), -b * np.sin(t)])

        return Contour2D("ellipse", {"a": a, "b": b}, gamma, dgamma, ddgamma)

    if kind == "kite":
        skew = float(d.get("skew", 0.35))
        h = float(d.get("height", 1.2))
        s0 = float(d.get("scale", 1.0))
        if h <= 0 or s0 <= 0:
            raise ShapeError("kite height and scale must be positive")

        def gamma(t):
            return s0 * np.array([np.cos(t) + skew * (np.cos(2 * t) - 1.0),
                                  h * np.sin(t)])

        def dgamma(t):
            return s0 * np.array([-np.sin(t) - 2 * skew * np.sin(2 * t),
                                  h * np.cos(t)])

        def ddgamma(t):
            return s0 * np.array([-np.cos(t) - 4 * skew * np.cos(2 * t),
                                  -h * np.sin(t)])

        return Contour2D("kite", {"skew": skew, "height": h, "scale": s0},
                         gamma, dgamma, ddgamma)

    if kind == "fourier-star":
        r0 = float(d.get("base_radius", 1.0))
        ac = np.asarray(d.get("cos_coeffs", []), float)
        bs = np.asarray(d.get("sin_coeffs", []), float)
        if r0 <= 0:
            raise ShapeError("fourier-star base radius must be positive")
        kmax = max(len(ac), len(bs))
        a = np.zeros(kmax)
        b = np.zeros(kmax)
        a[: len(ac)] = ac
        b[: len(bs)] = bs
        k = np.arange(1, kmax + 1, dtype=float)
        if np.sum(np.abs(a)) + np.sum(np.abs(b)) >= 0.95:
            raise ShapeError("fourier-star coefficients too large: "
                             "radius may vanish")

        def radius(t):
            t = np.atleast_1d(t)
            ph = np.outer(t, k)
            return r0 * (1.0 + np.cos(ph) @ a + np.sin(ph) @ b)

        def dradius(t):
            t = np.atleast_1d(t)
            ph = np.outer(t, k)
            return r0 * (-np.sin(ph) @ (k * a) + np.cos(ph) @ (k * b))

        def ddradius(t):
            t = np.atleast_1d(t)
            ph = np.outer(t, k)
            return r0 * (-np.cos(ph) @ (k * k * a) - np.sin(ph) @ (k * k * b))

        params = {"base_radius": r0, "cos_coeffs": list(map(float, a)),
                  "sin_coeffs": list(map(float, b))}
        return _polar_contour("fourier-star", params, radius, dradius, ddradius)

    if kind == "rounded-rectangle":
        w = float(d.get("width", 2.0))
        h = float(d.get("height", 2.0))
        rad = d.get("corner_radius", None)
        if w <= 0 or h <= 0:
            raise ShapeError("rectangle sides must be positive")
        if rad is None or float(rad) <= 0:
            raise ShapeError("rectangle corners must be rounded: "
                             "corner_radius > 0 required")
        rad = float(rad)
        half = min(w, h) / 2.0
        rel = rad / half
        lo = _corner_radius_rel(_SUPERELLIPSE_ORDERS[-1])
        hi = 0.45
        if not (lo * 0.8 <= rel <= hi):
            raise ShapeError(
                f"corner radius {rad} not representable: need "
                f"{lo * 0.8 * half:.4g} <= radius <= {hi * half:.4g} "
                f"for sides {w} x {h}")
        p = _pick_superellipse_order(rel)
        a, b = w / 2.0, h / 2.0
        radius, dradius, ddradius = _superellipse_radius(a, b, p)
        params = {"width": w, "height": h, "corner_radius": rad,
                  "exponent": p,
                  "actual_corner_radius": _corner_radius_rel(p) * half}
        return _polar_contour("rounded-rectangle", params,
                              radius, dradius, ddradius)

    if kind in ("polygon", "rectangle", "square"):
        raise ShapeError(f"raw {kind} has corners; use rounded-rectangle "
                         "with corner_radius > 0")
    raise ShapeError(f"unknown shape kind {kind!r}")


def scale_descriptor(descriptor: Dict, s: float) -> Dict:
    """Scale every length-like field of a 2D shape descriptor by s."""
    if s <= 0:
        raise ShapeError("scale factor must be positive")
    d = dict(descriptor)
    kind = d.get("kind")
    length_fields = {
        "circle": ("r",),
        "ellipse": ("a", "b"),
        "kite": ("scale",),
        "fourier-star": ("base_radius",),
        "rounded-rectangle": ("width", "height", "corner_radius"),
    }
    if kind not in length_fields:
        raise ShapeError(f"cannot scale shape kind {kind!r}")
    for f in length_fields[kind]:
        d[f] = float(d.get(f, 1.0)) * s
    d.pop("exponent", None)
    d.pop("actual_corner_radius", None)
    return d


def _constant_speed_params(contour: Contour2D, N: int,
                           oversample: int = 4096):
    """Parameters u_j with equal arc-length spacing, plus the total length.

    The cumulative arc length s(u) is represented by the FFT of the speed
    (exact for band-limited speed, spectrally accurate otherwise) and
    inverted with Newton iterations.
    """
    M = max(oversample, 8 * N)
    u = 2.0 * np.pi * np.arange(M) / M
    d1 = contour.dgamma(u)
    speed = np.hypot(d1[0], d1[1])
    vh = np.fft.rfft(speed) / M
    L = 2.0 * np.pi * vh[0].real
    k = np.arange(1, len(vh))

    def s_of(uq):
        ph = np.exp(1j * np.outer(uq, k))
        return vh[0].real * uq + 2.0 * ((vh[1:] * (ph - 1.0) / (1j * k)).real).sum(axis=1)

    targets = L * np.arange(N) / N
    uj = targets / vh[0].real
    for _ in range(100):
        f = s_of(uj) - targets
        d1 = contour.dgamma(uj)
        sp = np.hypot(d1[0], d1[1])
        du = f / sp
        uj = uj - du
        if np.max(np.abs(du)) < 1e-14:
            break
    return uj, L


def sample(contour: Contour2D, N: int) -> NodeSet2D:
    """N nodes at equal arc-length spacing with uniform weights L/N."""
    if N < 16:
        raise ShapeError("need at least 16 nodes")
    if N % 2:
        raise ShapeError("node count must be even")
    uj, L = _constant_speed_params(contour, N)
    pts = contour.gamma(uj).T.copy()
    d1 = contour.dgamma(uj)
    speed = np.hypot(d1[0], d1[1])
    normals = np.stack([d1[1] / speed, -d1[0] / speed], axis=1)
    kap = np.asarray(contour.curvature(uj))
    weights = np.full(N, L / N)
    return NodeSet2D(points=pts, normals=normals, curvatures=kap,
                     weights=weights, length=L, params=uj)


# ---------------------------------------------------------------------------
# 3D meshes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceMesh3D:
    """Closed triangulated surface with per-triangle collocation data."""

    vertices: np.ndarray    # (V, 3)
    triangles: np.ndarray   # (T, 3) int indices, outward oriented
    centroids: np.ndarray   # (T, 3)
    normals: np.ndarray     # (T, 3) outward unit
    areas: np.ndarray       # (T,)

    @property
    def n(self) -> int:
        return len(self.triangles)

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())

    @property
    def signed_volume(self) -> float:
        return float((self.centroids * self.normals).sum(axis=1) @ self.areas / 3.0)


def _icosahedron():
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            verts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    V = np.array(verts)
    V /= np.linalg.norm(V[0])
    F = ConvexHull(V).simplices.copy()
    for i, f in enumerate(F):
        c = V[f].mean(axis=0)
        nr = np.cross(V[f[1]] - V[f[0]], V[f[2]] - V[f[0]])
        if np.dot(nr, c) < 0:
            F[i] = f[::-1]
    return V, F


def _subdivide(V, F):
    verts = [tuple(v) for v in V]
    index = {v: i for i, v in enumerate(verts)}

    def midpoint(i, j):
        key = tuple((np.asarray(verts[i]) + np.asarray(verts[j])) / 2.0)
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    F2 = []
    for (a, b, c) in F:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        F2 += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    return np.array(verts), np.array(F2, int)


def _mesh_from_vertices(V, F) -> SurfaceMesh3D:
    P0, P1, P2 = V[F[:, 0]], V[F[:, 1]], V[F[:, 2]]
    cen = (P0 + P1 + P2) / 3.0
    cr = np.cross(P1 - P0, P2 - P0)
    areas = 0.5 * np.linalg.norm(cr, axis=1)
    if np.any(areas <= 0):
        raise ShapeError("degenerate triangle in mesh")
    normals = cr / (2.0 * areas)[:, None]
    return SurfaceMesh3D(vertices=V, triangles=F, centroids=cen,
                         normals=normals, areas=areas)


def make_sphere_mesh(r: float, refinement: int) -> SurfaceMesh3D:
    """Subdivided icosahedron projected to radius r (20·4^refinement tris)."""
    if r <= 0:
        raise ShapeError("sphere radius must be positive")
    if refinement < 1:
        raise ShapeError("refinement must be >= 1")
    V, F = _icosahedron()
    for _ in range(refinement):
        V, F = _subdivide(V, F)
        V = V / np.linalg.norm(V, axis=1)[:, None]
    return _mesh_from_vertices(V * r, F)


def make_ellipsoid_mesh(a: float, b: float, c: float,
                        refinement: int) -> SurfaceMesh3D:
    """Icosphere stretched to semi-axes (a, b, c); normals recomputed."""
    if min(a, b, c) <= 0:
        raise ShapeError("ellipsoid semi-axes must be positive")
    base = make_sphere_mesh(1.0, refinement)
    V = base.vertices * np.array([a, b, c])
    return _mesh_from_vertices(V, base.triangles)


def make_mesh(descriptor: Dict) -> SurfaceMesh3D:
    """Build a 3D mesh from a shape descriptor dict."""
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ShapeError("shape descriptor must be a dict with a 'kind' field")
    kind = descriptor["kind"]
    refinement = int(descriptor.get("refinement", 3))
    if kind == "sphere":
        return make_sphere_mesh(float(descriptor.get("r", 1.0)), refinement)
    if kind == "ellipsoid":
        return make_ellipsoid_mesh(float(descriptor.get("a", 1.0)),
                                   float(descriptor.get("b", 1.0)),
                                   float(descriptor.get("c", 1.0)),
                                   refinement)
    raise ShapeError(f"unknown 3D shape kind {kind!r}")


MESH_KINDS = ("sphere", "ellipsoid")
CONTOUR_KINDS = ("circle", "ellipse", "kite", "fourier-star",
                 "rounded-rectangle")


def is_mesh_descriptor(descriptor: Dict) -> bool:
    return isinstance(descriptor, dict) and descriptor.get("kind") in MESH_KINDS
