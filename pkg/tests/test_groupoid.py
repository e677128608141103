import pytest

from cdvwall.dynkin import build_diagram
from cdvwall.groupoid import (
    GroupoidError,
    compose,
    fundamental_label,
    identity_arrow,
    induced_root_map,
    mutate,
    mutation_data,
    path_to_gallery,
    self_mutation_identification,
    step_relabelling,
)
from cdvwall.linalg import identity_matrix, invert_unimodular, mat_mul
from cdvwall.restriction import DynkinType, imaginary_restriction, restrict, restricted_roots
from cdvwall.weyl import simple_reflection

A2_EMPTY = DynkinType(build_diagram("A", 2, affine=True), frozenset())
A3_ONE = DynkinType(build_diagram("A", 3, affine=True), frozenset({2}))
D4_PAIR = DynkinType(build_diagram("D", 4, affine=True), frozenset({3, 4}))


def test_empty_subset_mutation_is_a_simple_reflection():
    label = fundamental_label(A2_EMPTY)
    out = mutate(label, 1)
    assert out.subset == frozenset()
    assert out.weyl == simple_reflection(A2_EMPTY.diagram, 1)


def test_adjacent_mutation_moves_the_subset():
    # contracted {2}, mutate at the adjacent node 1: the pair {1,2} has
    # iota(1) = 2, so the subset moves to {1}
    dt = DynkinType(build_diagram("A", 2, affine=True), frozenset({2}))
    label = fundamental_label(dt)
    out = mutate(label, 1)
    assert out.subset == frozenset({1})
    _, iota_node, _ = mutation_data(dt.diagram, frozenset({2}), 1)
    assert iota_node == 2


def test_nonadjacent_mutation_fixes_the_subset():
    dt = DynkinType(build_diagram("A", 3, affine=True), frozenset({3}))
    label = fundamental_label(dt)
    out = mutate(label, 1)  # nodes 1 and 3 are not adjacent
    assert out.subset == frozenset({3})
    assert out.weyl == simple_reflection(dt.diagram, 1)


def test_mutation_needs_two_kept_nodes():
    dt = DynkinType(build_diagram("A", 1, affine=True), frozenset({0}))
    with pytest.raises(GroupoidError):
        mutate(fundamental_label(dt), 1)


@pytest.mark.parametrize("dtype", [A2_EMPTY, A3_ONE, D4_PAIR])
def test_mutation_inverts_through_iota(dtype):
    label = fundamental_label(dtype)
    for node in dtype.kept:
        stepped = mutate(label, node)
        _, iota_node, _ = mutation_data(dtype.diagram, label.subset, node)
        back = mutate(stepped, iota_node)
        assert back.subset == label.subset
        assert back.weyl == label.weyl


def test_compose_empty_path():
    arrow = compose(A2_EMPTY, ())
    assert arrow.weyl.is_identity()
    assert arrow.target_subset == A2_EMPTY.contracted
    gallery = path_to_gallery(arrow)
    assert gallery.length == 0


def test_single_step_gallery_wall():
    arrow = compose(A3_ONE, (1,))
    gallery = path_to_gallery(arrow)
    alpha = restrict(A3_ONE, A3_ONE.diagram.simple_root(1))
    assert gallery.length == 1
    assert gallery.walls[0].normal == alpha


def test_step_then_reverse_is_the_identity_arrow():
    label = fundamental_label(A2_EMPTY)
    _, iota_node, _ = mutation_data(A2_EMPTY.diagram, label.subset, 1)
    arrow = compose(A2_EMPTY, (1, iota_node))
    assert arrow.weyl.is_identity()
    assert arrow.target_subset == A2_EMPTY.contracted
    rmap = induced_root_map(arrow)
    assert rmap.matrix == identity_matrix(len(A2_EMPTY.kept))


def test_noncomposable_step_rejected():
    dt = DynkinType(build_diagram("A", 2, affine=True), frozenset({2}))
    # mutating at 1 moves the subset to {1}; stepping at 1 again is illegal
    with pytest.raises(GroupoidError):
        compose(dt, (1, 1))


def test_identity_arrow_has_identity_root_map():
    arrow = identity_arrow(D4_PAIR)
    assert induced_root_map(arrow).matrix == identity_matrix(len(D4_PAIR.kept))


@pytest.mark.parametrize("dtype", [A2_EMPTY, A3_ONE, D4_PAIR])
def test_induced_map_fixes_the_imaginary_direction(dtype):
    rim_source = imaginary_restriction(dtype)
    for node in dtype.kept:
        arrow = compose(dtype, (node,))
        target = DynkinType(dtype.diagram, arrow.target_subset)
        rim_target = imaginary_restriction(target)
        assert induced_root_map(arrow).apply(rim_target) == rim_source


@pytest.mark.parametrize("dtype", [A2_EMPTY, A3_ONE])
def test_induced_map_bijects_windowed_restricted_roots(dtype):
    from cdvwall.restriction import classify_value

    for node in dtype.kept:
        arrow = compose(dtype, (node,))
        target = DynkinType(dtype.diagram, arrow.target_subset)
        rmap = induced_root_map(arrow)
        source_window = restricted_roots(dtype, 3).values()
        target_window = restricted_roots(target, 3).values()
        # images of restricted roots stay restricted roots, both ways; the
        # membership test is windowless so no edge tolerance is needed
        for v in target_window:
            assert classify_value(dtype, rmap.apply(v)) is not None
        for v in source_window:
            assert classify_value(target, rmap.inverse_apply(v)) is not None


def test_gallery_is_geometrically_accepted():
    for path in [(0, 1, 2), (1, 0, 1, 2), (2, 2), (0, 1, 0, 1)]:
        arrow = compose(A2_EMPTY, path)
        gallery = path_to_gallery(arrow)  # raises on any facet mismatch
        assert gallery.length == len(path)


def test_self_identification_nonadjacent_is_the_restricted_reflection():
    dt = DynkinType(build_diagram("A", 3, affine=True), frozenset({3}))
    arrow = compose(dt, (1,))
    autom = self_mutation_identification(arrow)
    sigma = simple_reflection(dt.diagram, 1)
    cols = [restrict(dt, sigma.apply(dt.diagram.simple_root(n))) for n in dt.kept]
    expected = tuple(tuple(col[i] for col in cols) for i in range(len(dt.kept)))
    assert autom == expected
    assert mat_mul(autom, autom) == identity_matrix(len(dt.kept))


def test_self_identification_identity_arrow():
    autom = self_mutation_identification(identity_arrow(A2_EMPTY))
    assert autom == identity_matrix(len(A2_EMPTY.kept))


def test_self_identification_round_trip_adjacent():
    dt = DynkinType(build_diagram("A", 2, affine=True), frozenset({2}))
    arrow = compose(dt, (1,))
    autom = self_mutation_identification(arrow)
    assert invert_unimodular(autom) is not None
    # going down and back along iota gives the identity arrow, whose
    # induced map is the identity
    _, iota_node, _ = mutation_data(dt.diagram, frozenset({2}), 1)
    round_trip = compose(dt, (1, iota_node))
    assert induced_root_map(round_trip).matrix == identity_matrix(len(dt.kept))


def test_self_identification_rejects_multi_step_words():
    arrow = compose(A2_EMPTY, (0, 1))
    with pytest.raises(GroupoidError):
        self_mutation_identification(arrow)


def test_label_relabelling_map():
    dt = DynkinType(build_diagram("A", 2, affine=True), frozenset({2}))
    arrow = compose(dt, (1,))
    relabel = step_relabelling(arrow)
    assert relabel == {0: 0, 2: 1}
