"""Vanishing verdicts and forced equalities for curve-counting invariants.

The engine never computes invariant values.  It decides, from the Dynkin
data alone, which invariants are forced to vanish (a dimension vector
whose primitive part is not a restricted root) and which are forced equal
(twists, duality, and mutation symmetries), emitting a certificate with a
rule tag for every verdict and every equality edge.  Candidate verdicts
mean "not forced to vanish", never "nonzero".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

from .dynkin import build_diagram
from .groupoid import compose, induced_root_map, self_mutation_identification, step_relabelling
from .linalg import Vec, is_colinear, mat_vec, vec_gcd
from .restriction import (
    DynkinType,
    classify_value,
    finite_restricted_values,
    imaginary_restriction,
    restrict,
)

RULE_NC_VANISHING = "vanishing:nonroot-dimension-vector"
RULE_NC_VANISHING_GLOBAL = "vanishing:nonroot-dimension-vector-global"
RULE_GEOM_VANISHING = "vanishing:nonroot-curve-class"
RULE_GV_VANISHING = "vanishing:gv-effective-nonroot"
RULE_TWIST_MOTIVIC = "symmetry:motivic-euler-twist"
RULE_DUAL_MOTIVIC = "symmetry:motivic-duality"
RULE_TWIST_NUMERIC = "symmetry:numeric-line-bundle-twist"
RULE_MUT_MOTIVIC = "symmetry:motivic-mutation"
RULE_MUT_NUMERIC = "symmetry:numeric-mutation"
RULE_GV_TRANSPORT = "symmetry:gv-mutation-transport"


class ClassError(ValueError):
    pass


@dataclass(frozen=True)
class CurveClass:
    """A class (chi, beta) with beta in curve-class coordinates."""

    chi: int
    beta: Vec

    @property
    def d_pair(self) -> int:
        g = abs(self.chi)
        for b in self.beta:
            g = gcd(g, abs(b))
        return g

    @property
    def d_beta(self) -> int:
        return vec_gcd(self.beta)

    def is_effective(self) -> bool:
        return any(b != 0 for b in self.beta) and all(b >= 0 for b in self.beta)

    def key(self) -> tuple:
        return (self.chi, self.beta)

    def to_json(self) -> dict:
        return {"chi": self.chi, "beta": list(self.beta)}


@dataclass(frozen=True)
class Verdict:
    forced_zero: bool
    rule: str
    mult: int
    kind: Optional[str] = None   # "real" | "imaginary" on candidates
    base: Optional[Vec] = None   # primitive restricted root under a candidate
    global_scope: bool = False

    def to_json(self) -> dict:
        return {
            "verdict": "forced-zero" if self.forced_zero else "candidate",
            "paper_ref": self.rule,
            "mult": self.mult,
            "kind": self.kind,
            "base": list(self.base) if self.base is not None else None,
            "global": self.global_scope,
        }


@dataclass(frozen=True)
class Certificate:
    rule: str
    level: str                       # "motivic" | "numeric"
    params: tuple[tuple[str, int], ...] = ()

    def to_json(self) -> dict:
        return {"paper_ref": self.rule, "level": self.level, "params": dict(self.params)}


@dataclass(frozen=True)
class SymmetryConfig:
    rigidified: bool = False
    weighted_homogeneous: bool = False
    non_flop_nodes: frozenset = frozenset()
    chi_max: int = 4
    beta_max: int = 2

    def to_json(self) -> dict:
        return {
            "rigidified": self.rigidified,
            "weighted_homogeneous": self.weighted_homogeneous,
            "non_flop_nodes": sorted(self.non_flop_nodes),
            "window": {"chi": self.chi_max, "beta": self.beta_max},
        }


def affine_companion(dtype: DynkinType) -> DynkinType:
    """The affine type (same family and rank, node 0 kept) of a finite type."""
    if dtype.affine:
        raise ClassError("affine_companion starts from a finite type")
    diagram = build_diagram(dtype.diagram.family, dtype.diagram.rank, affine=True)
    return DynkinType(diagram, dtype.contracted)


def class_to_vector(aff: DynkinType, cc: CurveClass) -> Vec:
    """beta + chi * pi(r_im) in the affine kept coordinates (node 0 first)."""
    rim_bar = imaginary_restriction(aff)
    kept = aff.kept
    fin_kept = tuple(n for n in kept if n != 0)
    if len(cc.beta) != len(fin_kept):
        raise ClassError("beta length does not match the kept finite nodes")
    beta_at = dict(zip(fin_kept, cc.beta))
    return tuple(beta_at.get(n, 0) + cc.chi * rim_bar[i] for i, n in enumerate(kept))


def vector_to_class(aff: DynkinType, delta: Vec) -> CurveClass:
    rim_bar = imaginary_restriction(aff)
    kept = aff.kept
    zero = kept.index(0)
    chi = delta[zero]
    beta = tuple(delta[i] - chi * rim_bar[i] for i, n in enumerate(kept) if n != 0)
    return CurveClass(chi, beta)


def vanishing_verdict(dtype: DynkinType, delta: Vec,
                      weighted_homogeneous: bool = False) -> Verdict:
    """Verdict for a dimension vector over an affine type.

    Forced zero exactly when delta/gcd(delta) is not a restricted root;
    membership is decided without window truncation.  With the weighted-
    homogeneous flag the same verdict also labels the global invariant.
    """
    if not dtype.affine:
        raise ClassError("vanishing verdicts take an affine type")
    if len(delta) != len(dtype.kept):
        raise ClassError("dimension vector length does not match the kept nodes")
    if any(c < 0 for c in delta):
        raise ClassError("dimension vectors are non-negative")
    d = vec_gcd(delta)
    if d == 0:
        raise ClassError("the zero dimension vector has no verdict")
    v = tuple(c // d for c in delta)
    hit = classify_value(dtype, v)
    rule = RULE_NC_VANISHING_GLOBAL if weighted_homogeneous else RULE_NC_VANISHING
    if hit is None:
        return Verdict(True, rule, d, global_scope=weighted_homogeneous)
    kind, data = hit
    base = imaginary_restriction(dtype) if kind == "imaginary" else v
    return Verdict(False, rule, d, kind=kind, base=base,
                   global_scope=weighted_homogeneous)


def geometric_verdict(dtype: DynkinType, cc: CurveClass,
                      weighted_homogeneous: bool = False) -> Verdict:
    """Verdict for a class (chi, beta) on a finite type.

    The class must map to a non-negative dimension vector.  beta = 0 is the
    point-class direction and is never forced to vanish; otherwise the
    verdict is forced zero exactly when beta over the pair multiplicity is
    not a finite restricted root.  As on the dimension-vector side, the
    weighted-homogeneous flag extends the verdict to the global invariant.
    """
    if dtype.affine:
        raise ClassError("geometric verdicts take a finite type")
    aff = affine_companion(dtype)
    delta = class_to_vector(aff, cc)
    if any(c < 0 for c in delta):
        raise ClassError("class does not map into the non-negative dimension vectors")
    if all(c == 0 for c in delta):
        raise ClassError("the zero class has no verdict")
    if all(b == 0 for b in cc.beta):
        return Verdict(False, RULE_GEOM_VANISHING, cc.chi, kind="imaginary",
                       base=imaginary_restriction(aff),
                       global_scope=weighted_homogeneous)
    d = cc.d_pair
    base = tuple(b // d for b in cc.beta)
    if base in finite_restricted_values(dtype):
        return Verdict(False, RULE_GEOM_VANISHING, d, kind="real", base=base,
                       global_scope=weighted_homogeneous)
    return Verdict(True, RULE_GEOM_VANISHING, d, global_scope=weighted_homogeneous)


def gv_verdict(dtype: DynkinType, beta: Vec) -> Verdict:
    """Genus-zero curve-count verdict for an effective class: forced zero
    when the class itself is not a positive restricted root."""
    if not all(b >= 0 for b in beta) or all(b == 0 for b in beta):
        raise ClassError("gv verdicts take a nonzero effective class")
    if beta in finite_restricted_values(dtype):
        return Verdict(False, RULE_GV_VANISHING, vec_gcd(beta), kind="real",
                       base=tuple(b // vec_gcd(beta) for b in beta))
    return Verdict(True, RULE_GV_VANISHING, vec_gcd(beta))


@dataclass(frozen=True)
class ClassGenerator:
    """A partial self-map on classes with its certificate data."""

    name: str
    rule: str
    level: str
    domain: str
    defined: Callable[[CurveClass], bool] = field(compare=False)
    image: Callable[[CurveClass], tuple[CurveClass, tuple]] = field(compare=False)

    def certificate(self, params: tuple) -> Certificate:
        return Certificate(self.rule, self.level, params)


def _maps_into_cone(aff: DynkinType, cc: CurveClass) -> bool:
    return all(c >= 0 for c in class_to_vector(aff, cc))


def minimal_duality_shift(dtype: DynkinType, cc: CurveClass) -> int:
    """The smallest n >= 0 for which (n*d - chi, -beta) maps into the
    non-negative dimension vectors, d the beta multiplicity."""
    aff = affine_companion(dtype)
    rim_bar = imaginary_restriction(aff)
    kept = aff.kept
    fin_kept = tuple(n for n in kept if n != 0)
    d = cc.d_beta
    if d == 0:
        raise ClassError("duality needs beta nonzero")
    beta_at = dict(zip(fin_kept, cc.beta))
    t_min = 0
    for i, n in enumerate(kept):
        if n == 0:
            continue
        # need (n*d - chi) * rim_i - beta_i >= 0
        b, r = beta_at[n], rim_bar[i]
        t_min = max(t_min, -(-b // r))
    n = max(0, -(-(t_min + cc.chi) // d))
    return n


def mutation_class_map(dtype: DynkinType, node: int):
    """The self-map on classes induced by one mutation at a kept finite
    node, through the canonical relabelling of the mutated subset."""
    aff = affine_companion(dtype)
    arrow = compose(aff, (node,))
    autom = self_mutation_identification(arrow)

    def apply(cc: CurveClass) -> CurveClass:
        delta = class_to_vector(aff, cc)
        return vector_to_class(aff, mat_vec(autom, delta))

    return apply


def symmetry_generators(dtype: DynkinType, config: SymmetryConfig) -> tuple[ClassGenerator, ...]:
    """The configured partial self-maps on classes.

    Motivic twist and duality require the rigidified flag; the line-bundle
    twists hold at the numeric level for coprime pairs only, and the engine
    refuses to chain them through non-coprime intermediates.  Mutation
    generators exist at the nodes whose contraction does not flop, and act
    on dimension vectors through the induced lattice map.
    """
    if dtype.affine:
        raise ClassError("symmetry generators are configured on a finite type")
    if not config.non_flop_nodes <= set(dtype.kept):
        raise ClassError("non-flop nodes must be kept finite nodes")
    aff = affine_companion(dtype)
    rim_bar = imaginary_restriction(aff)
    gens: list[ClassGenerator] = []

    if config.rigidified:
        def twist_defined(cc: CurveClass) -> bool:
            return cc.d_beta > 0

        def twist_image(cc: CurveClass):
            d = cc.d_beta
            return CurveClass(cc.chi + d, cc.beta), (("d", d),)

        gens.append(ClassGenerator(
            "motivic-twist", RULE_TWIST_MOTIVIC, "motivic",
            "beta nonzero", twist_defined, twist_image))

        def dual_defined(cc: CurveClass) -> bool:
            return cc.d_beta > 0

        def dual_image(cc: CurveClass):
            d = cc.d_beta
            n = minimal_duality_shift(dtype, cc)
            out = CurveClass(n * d - cc.chi, tuple(-b for b in cc.beta))
            return out, (("n", n), ("d", d))

        gens.append(ClassGenerator(
            "motivic-duality", RULE_DUAL_MOTIVIC, "motivic",
            "beta nonzero; n minimal with the image representable",
            dual_defined, dual_image))

    for node in dtype.kept:
        def numeric_defined(cc: CurveClass) -> bool:
            return cc.is_effective() and cc.d_pair == 1

        def numeric_image(cc: CurveClass, _node=node):
            idx = dtype.kept.index(_node)
            return CurveClass(cc.chi + cc.beta[idx], cc.beta), (("node", _node),)

        gens.append(ClassGenerator(
            f"numeric-twist-{node}", RULE_TWIST_NUMERIC, "numeric",
            "coprime (chi, beta) with beta effective", numeric_defined, numeric_image))

    for node in sorted(config.non_flop_nodes):
        apply_map = mutation_class_map(dtype, node)
        alpha_bar = class_to_vector(aff, CurveClass(0, tuple(
            1 if n == node else 0 for n in dtype.kept)))
        level = "motivic" if config.rigidified else "numeric"
        rule = RULE_MUT_MOTIVIC if config.rigidified else RULE_MUT_NUMERIC

        def mut_defined(cc: CurveClass, _alpha=alpha_bar, _level=level,
                        _apply=apply_map) -> bool:
            delta = class_to_vector(aff, cc)
            if all(c == 0 for c in delta):
                return False
            if is_colinear(delta, _alpha) or is_colinear(delta, rim_bar):
                return False
            if _level == "motivic":
                hit = classify_value(aff, delta)
                if hit is None or hit[0] != "real":
                    return False
            elif vec_gcd(delta) != 1:
                return False
            image = class_to_vector(aff, _apply(cc))
            return all(c >= 0 for c in image)

        def mut_image(cc: CurveClass, _node=node, _apply=apply_map):
            out = _apply(cc)
            return out, (("node", _node),)

        gens.append(ClassGenerator(
            f"mutation-{node}", rule, level,
            "not colinear to the node class or the imaginary direction; "
            + ("a real restricted root" if level == "motivic" else "indivisible"),
            mut_defined, mut_image))

    return tuple(gens)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class OrbitPartition:
    dtype: DynkinType
    config: SymmetryConfig
    orbits: tuple[tuple[tuple, ...], ...]          # sorted members per orbit
    edges: tuple[tuple[tuple, tuple, Certificate], ...]

    @property
    def representatives(self) -> tuple:
        return tuple(orbit[0] for orbit in self.orbits)

    def to_json(self) -> dict:
        return {
            "type": self.dtype.to_json(),
            "config": self.config.to_json(),
            "orbits": [
                {
                    "representative": {"chi": o[0][0], "beta": list(o[0][1])},
                    "members": [{"chi": m[0], "beta": list(m[1])} for m in o],
                }
                for o in self.orbits
            ],
            "certificates": [
                {
                    "from": {"chi": a[0], "beta": list(a[1])},
                    "to": {"chi": b[0], "beta": list(b[1])},
                    **cert.to_json(),
                }
                for a, b, cert in self.edges
            ],
        }


def window_classes(dtype: DynkinType, config: SymmetryConfig) -> tuple[CurveClass, ...]:
    """All nonzero classes in the window that map into the cone, in
    lexicographic (chi, beta) order."""
    aff = affine_companion(dtype)
    out = []
    ranges = [range(-config.beta_max, config.beta_max + 1)] * len(dtype.kept)
    for chi in range(config.chi_max + 1):
        for beta in itertools.product(*ranges):
            cc = CurveClass(chi, beta)
            if chi == 0 and all(b == 0 for b in beta):
                continue
            if _maps_into_cone(aff, cc):
                out.append(cc)
    return tuple(out)


def orbit_partition(dtype: DynkinType, config: SymmetryConfig) -> OrbitPartition:
    """Union-find closure of the configured generators on the window."""
    classes = window_classes(dtype, config)
    keys = [cc.key() for cc in classes]
    index = set(keys)
    uf = UnionFind(keys)
    edges = []
    seen_edges = set()
    for gen in symmetry_generators(dtype, config):
        for cc in classes:
            if not gen.defined(cc):
                continue
            img, params = gen.image(cc)
            if img.key() not in index:
                continue
            if img.key() == cc.key():
                continue
            uf.union(cc.key(), img.key())
            tag = (cc.key(), img.key(), gen.rule, params)
            if tag not in seen_edges:
                seen_edges.add(tag)
                edges.append((cc.key(), img.key(), gen.certificate(params)))
    grouped: dict = {}
    for key in keys:
        grouped.setdefault(uf.find(key), []).append(key)
    orbits = tuple(tuple(sorted(members)) for _, members in sorted(grouped.items()))
    return OrbitPartition(dtype, config, orbits, tuple(edges))


def verdict_constant_on_orbits(dtype: DynkinType, partition: OrbitPartition):
    """Check that forced-zero verdicts are constant on every orbit.

    Returns (ok, offenders) where offenders lists the mixed orbits.
    """
    offenders = []
    for orbit in partition.orbits:
        flags = {geometric_verdict(dtype, CurveClass(chi, beta)).forced_zero
                 for chi, beta in orbit}
        if len(flags) > 1:
            offenders.append(orbit)
    return (not offenders), tuple(offenders)


@dataclass(frozen=True)
class TransportResult:
    source_beta: Vec
    node: int
    flop: bool
    image_beta: Vec
    target: str                       # "same space" | "flopped space"
    target_contracted: tuple[int, ...]
    rule: str = RULE_GV_TRANSPORT

    def to_json(self) -> dict:
        return {
            "beta": list(self.source_beta),
            "node": self.node,
            "image_beta": list(self.image_beta),
            "target": self.target,
            "target_contracted": list(self.target_contracted),
            "paper_ref": self.rule,
        }


def gv_transport(dtype: DynkinType, beta: Vec, node: int, flop: bool) -> TransportResult:
    """Transport an effective class through the mutation at one node.

    Rejects classes colinear to the node's curve class, whose transport is
    not covered.  The image is computed through the induced lattice map and
    cross-checked against the Weyl reflection on a lift; effectiveness of
    the image is asserted.
    """
    if dtype.affine:
        raise ClassError("gv transport takes a finite type")
    if node not in dtype.kept:
        raise ClassError(f"node {node} is not a kept finite node")
    if not all(b >= 0 for b in beta) or all(b == 0 for b in beta):
        raise ClassError("beta must be a nonzero effective class")
    unit = tuple(1 if n == node else 0 for n in dtype.kept)
    if is_colinear(beta, unit):
        raise ClassError("beta colinear to the contracted curve's class is not covered")
    if beta not in finite_restricted_values(dtype):
        raise ClassError(
            "beta is not a positive restricted root: its curve count is forced "
            "to vanish and the transport relation is vacuous"
        )
    aff = affine_companion(dtype)
    arrow = compose(aff, (node,))
    rmap = induced_root_map(arrow)
    delta = class_to_vector(aff, CurveClass(1, beta))
    image = rmap.inverse_apply(delta)

    # independent check through the Weyl action on a lift of delta
    diagram = aff.diagram
    lift = [0] * len(diagram.nodes)
    for i, n in enumerate(aff.kept):
        lift[diagram.index[n]] = delta[i]
    moved = arrow.weyl.inverse().apply(tuple(lift))
    target_kept = tuple(n for n in diagram.nodes if n not in arrow.target_subset)
    target_dtype = DynkinType(diagram, arrow.target_subset)
    if restrict(target_dtype, moved) != image:
        raise ClassError("induced map disagrees with the Weyl reflection image")

    rim_target = imaginary_restriction(target_dtype)
    zero = target_kept.index(0)
    chi = image[zero]
    if chi != 1:
        raise ClassError("transport did not preserve the point class")
    beta_img = tuple(image[i] - rim_target[i] for i, n in enumerate(target_kept) if n != 0)

    if flop:
        if any(b < 0 for b in beta_img):
            raise ClassError("transported class is not effective")
        return TransportResult(beta, node, True, beta_img, "flopped space",
                               tuple(sorted(n for n in arrow.target_subset)))
    relabel = step_relabelling(arrow)
    fin_target = tuple(n for n in target_kept if n != 0)
    back = {relabel[t]: b for t, b in zip(fin_target, beta_img)}
    beta_same = tuple(back[n] for n in dtype.kept)
    if any(b < 0 for b in beta_same):
        raise ClassError("transported class is not effective")
    return TransportResult(beta, node, False, beta_same, "same space",
                           tuple(sorted(dtype.contracted)))
