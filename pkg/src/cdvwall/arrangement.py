"""Intersection arrangements: chambers, wall-crossing, level slices, and
minimal galleries, all in exact integer/rational arithmetic.

A chamber labelled (w, S) is the simplicial cone spanned by the dual
vectors w . alpha_i^* for kept nodes i of S, cut to the coordinate
subspace of the base type's kept nodes.  Its facet through the rays other
than the i-th lies in the hyperplane orthogonal to the restriction of
w . alpha_i, which makes containment tests pure sign checks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .dynkin import DiagramError, enumerate_roots
from .linalg import (
    Vec,
    det,
    dot,
    invert_unimodular,
    is_colinear,
    primitive,
)
from .restriction import (
    DynkinType,
    finite_companion_data,
    imaginary_restriction,
    is_restricted_root,
    restrict,
    restricted_roots,
)
from .weyl import WeylElement, identity


class SignCrossing(Exception):
    """Raised when a crossing would leave the chamber's sign class."""


class GeometryError(RuntimeError):
    """An algebraic label disagrees with the chamber geometry."""


@dataclass(frozen=True)
class Hyperplane:
    """A wall {theta : theta(normal) = offset}.

    Linear walls have offset 0 and a primitive sign-normalised normal;
    level-slice walls carry an integer offset and are normalised jointly
    (gcd of all entries including the offset is 1, leading normal entry
    positive)."""

    normal: Vec
    offset: int = 0

    def __post_init__(self):
        from math import gcd

        g = 0
        for c in self.normal:
            g = gcd(g, abs(c))
        g = gcd(g, abs(self.offset))
        if g != 1:
            raise ValueError("hyperplane data must be jointly primitive")
        lead = next((c for c in self.normal if c != 0), None)
        if lead is None or lead < 0:
            raise ValueError("hyperplane normal must be sign-normalised and nonzero")

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}


def wall_through(normal: Vec, offset: int = 0) -> Hyperplane:
    """Normalise (normal, offset) jointly and build the wall."""
    from math import gcd

    g = 0
    for c in normal:
        g = gcd(g, abs(c))
    g = gcd(g, abs(offset))
    if g == 0:
        raise ValueError("zero wall data")
    normal = tuple(c // g for c in normal)
    offset //= g
    lead = next(c for c in normal if c != 0)
    if lead < 0:
        normal, offset = tuple(-c for c in normal), -offset
    return Hyperplane(normal, offset)


@dataclass(frozen=True)
class Chamber:
    dtype: DynkinType
    sign: int
    weyl: WeylElement
    subset: frozenset
    rays: tuple[Vec, ...]

    @property
    def kept_of_subset(self) -> tuple[int, ...]:
        return tuple(n for n in self.dtype.diagram.nodes if n not in self.subset)

    def key(self):
        return (self.sign, tuple(sorted(self.subset)), self.weyl.matrix)

    def interior_point(self) -> Vec:
        return tuple(self.sign * sum(r[j] for r in self.rays) for j in range(len(self.rays[0])))

    def facet_normal_raw(self, k: int) -> Vec:
        """Unnormalised inner normal data of facet k: the restriction of
        w . alpha_{i_k}; pairs to +1 with ray k and 0 with every other ray."""
        node = self.kept_of_subset[k]
        return restrict(self.dtype, self.weyl.apply(self.dtype.diagram.simple_root(node)))

    def coords_in(self, point: Vec) -> tuple:
        """Coefficients of a point over the signed rays (dual-basis pairing)."""
        return tuple(self.sign * dot(point, self.facet_normal_raw(k)) for k in range(len(self.rays)))

    def contains(self, point: Vec, strict: bool = True) -> bool:
        coords = self.coords_in(point)
        return all(c > 0 for c in coords) if strict else all(c >= 0 for c in coords)

    def label_str(self) -> str:
        word = ",".join(str(i) for i in self.weyl.word) or "e"
        subset = ",".join(str(n) for n in sorted(self.subset)) or "-"
        return f"{'+' if self.sign > 0 else '-'}[{word}|{subset}]"

    def to_json(self) -> dict:
        return {
            "sign": self.sign,
            "word": list(self.weyl.word),
            "subset": sorted(self.subset),
            "rays": [list(r) for r in self.rays],
        }


def chamber_from_label(dtype: DynkinType, weyl: WeylElement, subset: Iterable[int],
                       sign: int = 1) -> Chamber:
    """Build the chamber sign * w C_subset inside the base coordinate space.

    Raises GeometryError when the labelled cone does not lie in that
    subspace or is not full-dimensional.
    """
    subset = frozenset(subset)
    diagram = dtype.diagram
    if len(subset) != len(dtype.contracted):
        raise GeometryError("label subset size must match the base contracted size")
    minv = invert_unimodular(weyl.matrix)
    kept_cols = [diagram.index[n] for n in dtype.kept]
    contracted_cols = [diagram.index[n] for n in sorted(dtype.contracted)]
    rays = []
    for node in (n for n in diagram.nodes if n not in subset):
        row = minv[diagram.index[node]]
        if any(row[c] != 0 for c in contracted_cols):
            raise GeometryError(
                f"chamber ray for node {node} does not vanish on the contracted roots"
            )
        rays.append(tuple(row[c] for c in kept_cols))
    if det(tuple(rays)) == 0:
        raise GeometryError("chamber rays are not linearly independent")
    return Chamber(dtype, 1 if sign >= 0 else -1, weyl, subset, tuple(rays))


def fundamental_chamber(dtype: DynkinType, sign: int = 1) -> Chamber:
    """C_J: label (identity, contracted), rays the kept dual basis vectors."""
    return chamber_from_label(dtype, identity(dtype.diagram), dtype.contracted, sign)


def facet_index_of_node(chamber: Chamber, node: int) -> int:
    try:
        return chamber.kept_of_subset.index(node)
    except ValueError:
        raise GeometryError(f"node {node} does not index a facet of this chamber") from None


def shares_facet(c1: Chamber, k: int, c2: Chamber) -> None:
    """Check that c2 is the chamber across facet k of c1; raise otherwise.

    Verifies opposite strict sides of the wall and mutual containment of
    the two facet cones (full rank inside the wall is automatic because
    the rays of a simplicial chamber are independent).
    """
    if c1.sign != c2.sign:
        raise GeometryError("facet sharing is only defined within a sign class")
    normal = c1.facet_normal_raw(k)
    s1 = dot(c1.interior_point(), normal)
    s2 = dot(c2.interior_point(), normal)
    if s1 == 0 or s2 == 0 or (s1 > 0) == (s2 > 0):
        raise GeometryError("chambers do not sit on opposite sides of the wall")
    k2 = None
    for j in range(len(c2.rays)):
        if is_colinear(c2.facet_normal_raw(j), normal):
            k2 = j
            break
    if k2 is None:
        raise GeometryError("second chamber has no facet in the crossed wall")
    for j, ray in enumerate(c1.rays):
        if j == k:
            continue
        signed = tuple(c1.sign * c for c in ray)
        if not c2.contains(signed, strict=False):
            raise GeometryError("facet of the first chamber is not a face of the second")
    for j, ray in enumerate(c2.rays):
        if j == k2:
            continue
        signed = tuple(c2.sign * c for c in ray)
        if not c1.contains(signed, strict=False):
            raise GeometryError("facet of the second chamber is not a face of the first")


def cross_wall(chamber: Chamber, k: int, verify: bool = True) -> tuple[Chamber, Hyperplane]:
    """Cross facet k; returns the unique chamber sharing it and the wall.

    The new label comes from the groupoid mutation and is verified
    geometrically.  A facet lying in the hyperplane of the restricted
    imaginary root signals a sign-crossing instead of returning a chamber.
    """
    from .groupoid import Label, mutate

    dtype = chamber.dtype
    raw = chamber.facet_normal_raw(k)
    rim_bar = imaginary_restriction(dtype) if dtype.affine else None
    if rim_bar is not None and is_colinear(raw, rim_bar):
        raise SignCrossing("facet lies in the imaginary-root hyperplane")
    node = chamber.kept_of_subset[k]
    new_label = mutate(Label(dtype, chamber.weyl, chamber.subset), node, verify_geometry=False)
    c2 = chamber_from_label(dtype, new_label.weyl, new_label.subset, chamber.sign)
    if verify:
        shares_facet(chamber, k, c2)
    return c2, Hyperplane(primitive(raw))


@dataclass(frozen=True)
class Gallery:
    chambers: tuple[Chamber, ...]
    walls: tuple[Hyperplane, ...]

    def __post_init__(self):
        if len(self.walls) != len(self.chambers) - 1:
            raise ValueError("a gallery needs one wall per adjacent chamber pair")

    @property
    def length(self) -> int:
        return len(self.walls)

    def walls_distinct(self) -> bool:
        return len(set(self.walls)) == len(self.walls)

    def to_json(self) -> dict:
        return {
            "chambers": [c.to_json() for c in self.chambers],
            "walls": [w.to_json() for w in self.walls],
        }


class ChamberGraph:
    """Lazily expanded adjacency structure on the chambers of one sign class."""

    def __init__(self, dtype: DynkinType, sign: int = 1):
        self.dtype = dtype
        self.sign = 1 if sign >= 0 else -1
        base = fundamental_chamber(dtype, self.sign)
        self.chambers: dict = {base.key(): base}
        self.base_key = base.key()
        self._adj: dict = {}

    def neighbors(self, chamber: Chamber) -> dict:
        key = chamber.key()
        if key not in self._adj:
            edges = {}
            for k in range(len(chamber.rays)):
                try:
                    c2, wall = cross_wall(chamber, k)
                except SignCrossing:
                    edges[k] = None
                    continue
                self.chambers.setdefault(c2.key(), c2)
                edges[k] = (c2.key(), wall)
            self._adj[key] = edges
        return self._adj[key]

    def bfs(self, max_len: int) -> tuple[list, list]:
        """Chambers within max_len crossings of the base, plus labelled edges."""
        dist = {self.base_key: 0}
        order = [self.base_key]
        edges = []
        queue = deque([self.base_key])
        while queue:
            key = queue.popleft()
            if dist[key] == max_len:
                continue
            for k, edge in self.neighbors(self.chambers[key]).items():
                if edge is None:
                    continue
                nkey, wall = edge
                if nkey not in dist:
                    dist[nkey] = dist[key] + 1
                    order.append(nkey)
                    queue.append(nkey)
                edges.append((key, nkey, wall))
        return [self.chambers[k] for k in order], edges


def enumerate_chambers(dtype: DynkinType, max_len: int, sign: int = 1) -> tuple[list, list]:
    """All chambers reachable from the signed base chamber by at most
    max_len wall-crossings, with the adjacency edges alongside."""
    return ChamberGraph(dtype, sign).bfs(max_len)


def minimal_gallery(graph: ChamberGraph, source: Chamber, target: Chamber,
                    cap: int = 200_000) -> Gallery:
    """A shortest wall-crossing path, found by breadth-first search with
    on-demand expansion of the chamber graph."""
    if source.sign != target.sign:
        raise GeometryError("minimal galleries connect chambers of one sign class")
    graph.chambers.setdefault(source.key(), source)
    graph.chambers.setdefault(target.key(), target)
    skey, tkey = source.key(), target.key()
    if skey == tkey:
        return Gallery((source,), ())
    parent = {skey: None}
    queue = deque([skey])
    expanded = 0
    while queue:
        key = queue.popleft()
        expanded += 1
        if expanded > cap:
            raise GeometryError(f"target not reachable within the expansion bound {cap}")
        for k, edge in graph.neighbors(graph.chambers[key]).items():
            if edge is None:
                continue
            nkey, wall = edge
            if nkey not in parent:
                parent[nkey] = (key, wall)
                if nkey == tkey:
                    chain = [nkey]
                    walls = []
                    cur = nkey
                    while parent[cur] is not None:
                        prev, w = parent[cur]
                        walls.append(w)
                        chain.append(prev)
                        cur = prev
                    chain.reverse()
                    walls.reverse()
                    return Gallery(tuple(graph.chambers[c] for c in chain), tuple(walls))
                queue.append(nkey)
    raise GeometryError(f"target not reachable within the expansion bound {cap}")


def separating_hyperplanes(dtype: DynkinType, a: Chamber, b: Chamber) -> frozenset:
    """The exact set of arrangement walls separating two chambers.

    For each finite restricted-root direction the translates that can
    separate the two interior points form a bounded integer range, so the
    count needs no window.
    """
    p, q = a.interior_point(), b.interior_point()
    rim_bar = imaginary_restriction(dtype)
    fin_kept, fin_values = finite_companion_data(dtype)
    kept = dtype.kept

    def embed(rbar_fin: Vec) -> Vec:
        vals = dict(zip(fin_kept, rbar_fin))
        return tuple(vals.get(n, 0) for n in kept)

    separating = set()

    def check(normal: Vec):
        sp, sq = dot(p, normal), dot(q, normal)
        if sp == 0 or sq == 0:
            raise GeometryError("interior point lies on an arrangement hyperplane")
        if (sp > 0) != (sq > 0):
            separating.add(Hyperplane(primitive(normal)))

    check(rim_bar)
    p_rim, q_rim = dot(p, rim_bar), dot(q, rim_bar)
    for rbar_fin in fin_values:
        base = embed(rbar_fin)
        if is_colinear(base, rim_bar):
            continue
        pb, qb = dot(p, base), dot(q, base)
        # roots of pb + k*p_rim and qb + k*q_rim bound the sign-flip range
        lo = min(-Fraction(pb, p_rim), -Fraction(qb, q_rim))
        hi = max(-Fraction(pb, p_rim), -Fraction(qb, q_rim))
        for k in range(int(lo) - 1, int(hi) + 2):
            normal = tuple(bc + k * rc for bc, rc in zip(base, rim_bar))
            if any(c != 0 for c in normal):
                check(normal)
    return frozenset(separating)


@dataclass(frozen=True)
class LevelPoint:
    """A rational point on one of the two unit levels of the imaginary
    pairing, in finite kept-node coordinates."""

    coords: tuple
    sign: int


def level_embed(dtype: DynkinType, theta, sign: int = 1) -> tuple:
    """Embed a functional on the finite kept lattice into the full
    coordinate space at level +-1: the node-0 value is +-1 - theta(r_max)."""
    if not dtype.affine:
        raise DiagramError("level embeddings require an affine type")
    if 0 in dtype.contracted:
        raise DiagramError("the canonical level embedding needs node 0 kept")
    fin_diagram = dtype.diagram.finite_part()
    high = enumerate_roots(fin_diagram).highest_root
    fin_kept, _ = finite_companion_data(dtype)
    if len(theta) != len(fin_kept):
        raise ValueError("functional length does not match the finite kept nodes")
    theta_high = sum(t * high[fin_diagram.index[n]] for t, n in zip(theta, fin_kept))
    vals = dict(zip(fin_kept, theta))
    vals[0] = (1 if sign >= 0 else -1) - theta_high
    return tuple(vals[n] for n in dtype.kept)


def level_slice_point(dtype: DynkinType, theta, sign: int = 1) -> tuple[LevelPoint, tuple]:
    """A level point and its embedded image; the image pairs to +-1 with
    the restricted imaginary root."""
    image = level_embed(dtype, theta, sign)
    pairing = dot(image, imaginary_restriction(dtype))
    expected = 1 if sign >= 0 else -1
    if pairing != expected:
        raise GeometryError("level embedding does not hit the requested level")
    return LevelPoint(tuple(theta), expected), image


def arrangement_hyperplanes(dtype: DynkinType, k_max: int, sliced: bool = False) -> tuple:
    """The walls of the intersection arrangement within a level window.

    Unsliced: one linear hyperplane per primitive direction of a windowed
    restricted root.  Sliced (affine, node 0 kept): the affine hyperplanes
    {theta(rbar) = k} in finite kept coordinates with |k| <= k_max.
    """
    if not dtype.affine:
        raise DiagramError("arrangement_hyperplanes requires an affine type")
    if not sliced:
        seen = {}
        for element in restricted_roots(dtype, k_max).elements:
            prim = primitive(element.coeffs)
            seen.setdefault(prim, Hyperplane(prim))
        return tuple(seen[k] for k in sorted(seen))
    if 0 in dtype.contracted:
        raise DiagramError("slice coordinates need node 0 kept")
    _, fin_values = finite_companion_data(dtype)
    walls = set()
    for rbar in fin_values:
        for k in range(-k_max, k_max + 1):
            walls.add(wall_through(rbar, k))
    return tuple(sorted(walls, key=lambda h: (h.normal, h.offset)))


def locate_by_walk(graph: ChamberGraph, point: tuple) -> Chamber:
    """Walk the straight segment from the base chamber's interior point to
    `point`, crossing walls in order; exact rational arithmetic throughout.

    Raises GeometryError on degenerate segments (hitting a wall crossing
    tie or a point on a hyperplane); callers should skip such samples.
    """
    chamber = graph.chambers[graph.base_key]
    rim_bar = imaginary_restriction(graph.dtype)
    target_level = dot(point, rim_bar)
    if target_level == 0 or (target_level > 0) != (graph.sign > 0):
        raise GeometryError("point is not on the graph's side of the imaginary wall")
    start = chamber.interior_point()
    # scale the base interior point onto the point's level; the ratio is
    # positive on either side, so the start stays inside the base chamber
    start = tuple(Fraction(c * target_level, dot(start, rim_bar)) for c in start)
    t_cur = Fraction(0)
    for _ in range(10_000):
        coords_target = chamber.coords_in(point)
        if all(c > 0 for c in coords_target):
            return chamber
        best = None
        for k in range(len(chamber.rays)):
            n = chamber.facet_normal_raw(k)
            v0 = chamber.sign * dot(start, n)
            v1 = chamber.sign * dot(point, n)
            if v1 >= v0:
                continue
            t_k = Fraction(v0, v0 - v1)
            if t_k <= t_cur or t_k > 1:
                continue
            if best is None or t_k < best[0]:
                best = (t_k, k)
            elif t_k == best[0]:
                raise GeometryError("degenerate segment: simultaneous wall crossings")
        if best is None:
            raise GeometryError("point lies on a wall of the current chamber")
        t_cur, k = best
        edge = graph.neighbors(chamber).get(k)
        if edge is None:
            raise GeometryError("walk attempted to leave the sign class")
        chamber = graph.chambers[edge[0]]
    raise GeometryError("walk did not terminate")


def _in_nonneg_cone(target: Vec, u: Vec, v: Vec) -> bool:
    """Whether target = a*u + b*v with rational a, b >= 0 (u, v independent)."""
    rows = [(u[i], v[i], target[i]) for i in range(len(u))]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            a1, b1, t1 = rows[i]
            a2, b2, t2 = rows[j]
            d = a1 * b2 - a2 * b1
            if d == 0:
                continue
            a = Fraction(t1 * b2 - t2 * b1, d)
            b = Fraction(a1 * t2 - a2 * t1, d)
            if any(a * u[k] + b * v[k] != target[k] for k in range(len(u))):
                return False
            return a >= 0 and b >= 0
    return False


def gallery_through_wall(dtype: DynkinType, node: int, rbar: Vec,
                         cap: int = 50_000) -> Gallery:
    """A minimal gallery from the base chamber whose first crossed wall is
    the facet hyperplane at `node` and whose last crossed wall is the one
    orthogonal to `rbar`.

    Requires rbar to be a positive restricted root not colinear to the
    restricted simple root at `node` nor to the restricted imaginary root.
    """
    if node not in dtype.kept:
        raise GeometryError(f"node {node} is not kept")
    alpha_bar = restrict(dtype, dtype.diagram.simple_root(node))
    rim_bar = imaginary_restriction(dtype)
    if any(c < 0 for c in rbar) or all(c == 0 for c in rbar):
        raise GeometryError("rbar must be a positive restricted root")
    if not is_restricted_root(dtype, rbar):
        raise GeometryError("rbar is not a restricted root")
    if is_colinear(rbar, alpha_bar):
        raise GeometryError("rbar must not be colinear to the simple root's restriction")
    if is_colinear(rbar, rim_bar):
        raise GeometryError("rbar must not be colinear to the imaginary restriction")
    if _in_nonneg_cone(rim_bar, rbar, alpha_bar):
        # beyond the first wall every positive-class chamber pairs strictly
        # positively with rbar, so the requested last crossing cannot occur
        raise GeometryError(
            "no positive-side gallery exists: the imaginary direction lies in "
            "the cone spanned by rbar and the restricted simple root"
        )

    graph = ChamberGraph(dtype, 1)
    base = graph.chambers[graph.base_key]
    first, first_wall = cross_wall(base, facet_index_of_node(base, node))
    graph.chambers.setdefault(first.key(), first)

    def in_region(c: Chamber) -> bool:
        p = c.interior_point()
        return dot(p, alpha_bar) < 0 and dot(p, rbar) > 0

    if not in_region(first):
        raise GeometryError("first crossing left the expected region")
    prim_r = primitive(rbar)
    found = None
    seen = {first.key()}
    queue = deque([first.key()])
    expanded = 0
    while queue and found is None:
        key = queue.popleft()
        expanded += 1
        if expanded > cap:
            raise GeometryError(f"no wall facet found within the expansion bound {cap}")
        chamber = graph.chambers[key]
        for k, edge in graph.neighbors(chamber).items():
            if edge is None:
                continue
            if primitive(chamber.facet_normal_raw(k)) == prim_r:
                found = (chamber, k)
                break
            nkey, _ = edge
            nchamber = graph.chambers[nkey]
            if nkey not in seen and in_region(nchamber):
                seen.add(nkey)
                queue.append(nkey)
    if found is None:
        raise GeometryError("no chamber with a facet in the target wall was found")
    near, k = found
    mid = minimal_gallery(graph, first, near)
    far, last_wall = cross_wall(near, k)
    chambers = (base,) + mid.chambers + (far,)
    walls = (first_wall,) + mid.walls + (last_wall,)
    gallery = Gallery(chambers, walls)
    if not gallery.walls_distinct():
        raise GeometryError("constructed gallery repeats a wall")
    return gallery
