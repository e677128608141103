"""Definition-level brute-force cross checks.

These deliberately re-derive everything from first principles, sharing
only the Diagram type with the engine: roots are the lattice vectors of
squared length two (grown height by height), restriction is a bare
coordinate projection in a double loop, and chamber location works by
matching sign vectors against a window of walls.  Slow is fine here; any
disagreement with the engine is a hard failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arrangement import ChamberGraph, GeometryError, locate_by_walk
from .dynkin import Diagram
from .restriction import DynkinType


def _form(cartan, v) -> int:
    n = len(v)
    return sum(v[i] * cartan[i][j] * v[j] for i in range(n) for j in range(n))


@lru_cache(maxsize=None)
def oracle_positive_roots(diagram: Diagram) -> frozenset:
    """Positive roots as the non-negative length-two vectors, grown from the
    simple roots by adding one simple root at a time."""
    cartan = diagram.cartan
    n = len(diagram.nodes)
    simples = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    layer = set(simples)
    found = set(simples)
    while layer:
        nxt = set()
        for v in layer:
            for s in simples:
                w = tuple(a + b for a, b in zip(v, s))
                if w not in found and _form(cartan, w) == 2:
                    nxt.add(w)
        found |= nxt
        layer = nxt
    return frozenset(found)


def oracle_restricted_roots(dtype: DynkinType) -> frozenset:
    """Restricted roots by the naive double loop: enumerate all roots,
    project away the contracted coordinates, drop zeros."""
    if dtype.affine:
        raise ValueError("the brute-force oracle handles finite types")
    positives = oracle_positive_roots(dtype.diagram)
    keep = [dtype.diagram.index[n] for n in dtype.kept]
    out = set()
    for root in positives:
        for signed in (root, tuple(-c for c in root)):
            image = tuple(signed[i] for i in keep)
            if any(c != 0 for c in image):
                out.add(image)
    return frozenset(out)


def oracle_gcd_check(dtype: DynkinType) -> bool:
    """True when every restricted root of multiplicity d has all d of the
    fractions (i/d) * r, i = 1..d, in the set."""
    rr = oracle_restricted_roots(dtype)
    for r in rr:
        d = 0
        for c in r:
            d = gcd(d, abs(c))
        mults = [i for i in range(1, d + 1)
                 if all(c * i % d == 0 for c in r)
                 and tuple(c * i // d for c in r) in rr]
        if len(mults) != d:
            return False
    return True


@dataclass(frozen=True)
class ProbeReport:
    samples: int
    located: int
    skipped_degenerate: int
    mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _sample_points(dtype: DynkinType, count: int, box: int, sign: int,
                   denominator: int = 97):
    """Deterministic rational points on the requested unit level, in a box."""
    from .restriction import imaginary_restriction

    rim = imaginary_restriction(dtype)
    m = len(dtype.kept)
    span = 2 * box * denominator
    state = 123456789
    produced = 0
    while produced < count:
        coords = []
        for _ in range(m):
            state = (state * 6364136223846793005 + 1442695040888963407) % (2 ** 63)
            coords.append(Fraction((state % span) - span // 2, denominator))
        # project onto the level by adjusting the first kept coordinate
        rest = sum(c * r for c, r in zip(coords[1:], rim[1:]))
        coords[0] = Fraction(sign - rest, rim[0])
        point = tuple(coords)
        produced += 1
        yield point


def _contains_by_solve(chamber, point) -> bool:
    """Strict cone membership by solving for the ray coefficients, an
    independent route from the engine's dual-pairing test."""
    from .linalg import solve

    rays = chamber.rays
    m = len(rays)
    matrix = tuple(tuple(chamber.sign * rays[j][i] for j in range(m)) for i in range(m))
    coeffs = solve(matrix, point)
    return coeffs is not None and all(c > 0 for c in coeffs)


def sign_vector(point, normals) -> tuple:
    out = []
    for normal in normals:
        v = sum(p * c for p, c in zip(point, normal))
        out.append(0 if v == 0 else (1 if v > 0 else -1))
    return tuple(out)


def oracle_chamber_probe(dtype: DynkinType, sample_count: int, box: int = 1,
                         k_max: int = 8, sign: int = 1) -> ProbeReport:
    """Locate sampled points twice: by the engine's exact segment walk, and
    independently by matching sign vectors over a window of wall normals.

    Points land on the requested unit level (positive or negative side).
    Points on a hyperplane or producing a degenerate segment are skipped.
    A sample mismatch, an ambiguous sign-vector match, or a located chamber
    that fails the containment check all count as mismatches.
    """
    if not dtype.affine:
        raise ValueError("the chamber probe runs on affine types")
    if len(dtype.kept) > 3:
        raise ValueError("the probe is limited to at most three kept nodes")
    from .arrangement import arrangement_hyperplanes

    sign = 1 if sign >= 0 else -1
    normals = [h.normal for h in arrangement_hyperplanes(dtype, k_max)]
    graph = ChamberGraph(dtype, sign)
    signatures: dict = {}
    mismatches = []
    located = skipped = 0
    for point in _sample_points(dtype, sample_count, box, sign):
        try:
            chamber = locate_by_walk(graph, point)
        except GeometryError:
            skipped += 1
            continue
        sig = sign_vector(point, normals)
        if 0 in sig:
            skipped += 1
            continue
        located += 1
        if not _contains_by_solve(chamber, point):
            mismatches.append((point, "walk chamber does not contain the point"))
            continue
        key = chamber.key()
        ref = signatures.get(sig)
        if ref is None:
            # the sign vector must match the chamber's own interior point
            interior_sig = sign_vector(chamber.interior_point(), normals)
            if interior_sig != sig:
                mismatches.append((point, "sign vector differs from the chamber's"))
                continue
            signatures[sig] = key
        elif ref != key:
            mismatches.append((point, "two chambers share a windowed sign vector"))
    return ProbeReport(sample_count, located, skipped, tuple(mismatches))
