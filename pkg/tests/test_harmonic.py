import json
import random

import pytest

from conftest import load_figure
from hcov.errors import ActionError
from hcov.harmonic import (
    GraphAction,
    flip_all,
    flipped_edges,
    harmonic_by_subgroup_quotients,
    induced_quotient_morphism,
    is_harmonic_action,
    quotient,
    unflip,
)
from hcov.kernel import perm_mul
from hcov.multigraph import Multigraph, are_isomorphic, is_harmonic, morphism_degree
from hcov.permgroup import cyclic, direct_product, perm_from_cycles


def fig2_action():
    return GraphAction.from_json(load_figure("fig2_action.json"))


def fig3_s3_action(catalog):
    return GraphAction.from_json(load_figure("fig3_s3_action.json"), catalog)


def fig3_z6_action():
    return GraphAction.from_json(load_figure("fig3_z6_action.json"))


def test_action_validation_rejects_nonsense():
    theta = Multigraph([1, 2], [(1, (1, 2)), (2, (1, 2)), (3, (1, 2))])
    Z2 = cyclic(2)
    with pytest.raises(ActionError, match="bijection"):
        GraphAction(Z2, theta, [{1: 1, 2: 1}], [{1: 1, 2: 2, 3: 3}])
    with pytest.raises(ActionError, match="endpoints"):
        # vertex map swaps but edge map pretends to fix a non-parallel edge
        path = Multigraph([0, 1, 2], [(0, (0, 1)), (1, (1, 2))])
        GraphAction(Z2, path, [{0: 2, 1: 1, 2: 0}], [{0: 0, 1: 1}])


def test_action_validation_rejects_unfaithful():
    theta = Multigraph([1, 2], [(1, (1, 2)), (2, (1, 2)), (3, (1, 2))])
    Z2 = cyclic(2)
    with pytest.raises(ActionError, match="faithful"):
        GraphAction(Z2, theta, [{1: 1, 2: 2}], [{1: 1, 2: 2, 3: 3}])


def test_componentwise_faithfulness():
    # two disjoint edges, Z2 x Z2 flipping one each: faithful globally but
    # not on either component
    g = Multigraph([0, 1, 2, 3], [(0, (0, 1)), (1, (2, 3))])
    G = direct_product(cyclic(2), cyclic(2))
    with pytest.raises(ActionError, match="component"):
        GraphAction(
            G,
            g,
            [{0: 1, 1: 0, 2: 2, 3: 3}, {0: 0, 1: 1, 2: 3, 3: 2}],
            [{0: 0, 1: 1}, {0: 0, 1: 1}],
        )


def test_element_action_is_homomorphism(catalog):
    a = fig3_s3_action(catalog)
    rng = random.Random(0)
    els = a.group.elements()
    for _ in range(15):
        g, h = rng.choice(els), rng.choice(els)
        vg, eg = a.element_action(g)
        vh, eh = a.element_action(h)
        vgh, egh = a.element_action(perm_mul(g, h))
        assert vgh == {v: vg[vh[v]] for v in vh}
        assert egh == {e: eg[eh[e]] for e in eh}


def test_fig2_not_harmonic_with_witness():
    a = fig2_action()
    rep = is_harmonic_action(a)
    assert not rep
    assert rep.witness_dart.edge == 3  # the fixed edge
    vm, em = a.element_action(rep.witness_element)
    assert em[rep.witness_dart.edge] == rep.witness_dart.edge
    assert vm[rep.witness_dart.base] == rep.witness_dart.base


def test_harmonic_examples(catalog):
    assert is_harmonic_action(fig3_z6_action())
    assert is_harmonic_action(fig3_s3_action(catalog))
    theta = Multigraph([1, 2], [(1, (1, 2)), (2, (1, 2)), (3, (1, 2))])
    trivial = GraphAction(cyclic(1), theta, [], [])
    assert is_harmonic_action(trivial)


def test_dart_criterion_matches_subgroup_definition(catalog):
    for action in (fig2_action(), fig3_z6_action(), fig3_s3_action(catalog)):
        verdict, _ = harmonic_by_subgroup_quotients(action)
        assert verdict == bool(is_harmonic_action(action))


def test_quotient_fig2():
    q = quotient(fig2_action())
    assert len(q.quotient.vertices) == 2
    assert len(q.quotient.edges) == 2
    assert not q.removed_loops
    assert not is_harmonic(q.projection)


def test_quotient_by_trivial_subgroup(catalog):
    a = fig3_s3_action(catalog)
    q = quotient(a, a.group.trivial_subgroup())
    assert are_isomorphic(q.quotient, a.graph)


def test_quotient_full_s3_on_theta_is_point(catalog):
    a = fig3_s3_action(catalog)
    q = quotient(a)
    assert len(q.quotient.vertices) == 1
    assert len(q.quotient.edges) == 0
    assert len(q.removed_loops) == 1
    assert sorted(q.removed_loops[0]["edges"]) == [1, 2, 3]


def test_flipped_edges_theta_actions(catalog):
    # every edge of a maximal theta action is flipped: each involution fixes
    # one edge while swapping the vertices
    assert flipped_edges(fig3_s3_action(catalog)) == {1, 2, 3}
    assert flipped_edges(fig3_z6_action()) == {1, 2, 3}


def test_flipped_edges_empty_for_free_action():
    # Z3 rotating a triangle acts freely on darts
    tri = Multigraph([0, 1, 2], [(0, (0, 1)), (1, (1, 2)), (2, (2, 0))])
    Z3 = cyclic(3)
    a = GraphAction(Z3, tri, [{0: 1, 1: 2, 2: 0}], [{0: 1, 1: 2, 2: 0}])
    assert flipped_edges(a) == set()


def test_unflip_theta(catalog):
    a = fig3_s3_action(catalog)
    out = unflip(a)
    assert len(out.graph.vertices) == 2
    assert len(out.graph.edges) == 6
    assert out.graph.genus() == 5
    assert flipped_edges(out) == set()
    assert is_harmonic_action(out)


def test_unflip_no_flips_is_identity():
    tri = Multigraph([0, 1, 2], [(0, (0, 1)), (1, (1, 2)), (2, (2, 0))])
    a = GraphAction(cyclic(3), tri, [{0: 1, 1: 2, 2: 0}], [{0: 1, 1: 2, 2: 0}])
    assert unflip(a) is a


def test_flip_all_collapses_unflipped_maximal_cover(catalog):
    a = fig3_s3_action(catalog)
    unflipped = unflip(a)
    back = flip_all(unflipped)
    assert len(back.graph.edges) == 3
    assert back.graph.genus() == 2
    assert are_isomorphic(back.graph, a.graph)


def test_flip_all_round_trip(catalog):
    # edge ids are refreshed by unflip, so compare up to isomorphism
    for a in (fig3_s3_action(catalog), fig3_z6_action()):
        out = flip_all(unflip(a))
        assert are_isomorphic(out.graph, a.graph)
        assert len(flipped_edges(out)) == len(flipped_edges(a))


def test_flip_all_hexagon_unchanged():
    # Cay(Z6, {g, g^-1}) is a hexagon with no parallel pairs
    hexagon = Multigraph(range(6), [(i, (i, (i + 1) % 6)) for i in range(6)])
    Z6 = cyclic(6)
    a = GraphAction(
        Z6,
        hexagon,
        [{i: (i + 1) % 6 for i in range(6)}],
        [{i: (i + 1) % 6 for i in range(6)}],
    )
    assert flip_all(a) is a


def test_flip_all_skip_orbits(catalog):
    a = fig3_s3_action(catalog)
    unflipped = unflip(a)
    orbit_rep = min(unflipped.graph.edges)
    out = flip_all(unflipped, skip_orbits={orbit_rep})
    assert len(out.graph.edges) == 6  # the single orbit was skipped entirely


def test_flip_all_requires_unflipped(catalog):
    with pytest.raises(ActionError, match="unflipped"):
        flip_all(fig3_s3_action(catalog))


def test_edge_stabilizers_at_most_two(catalog):
    for a in (fig3_s3_action(catalog), fig3_z6_action()):
        order = a.group.order()
        for orbit in a.edge_orbits():
            assert order % len(orbit.transversal) == 0
            assert order // len(orbit.transversal) in (1, 2)


def test_quotient_tower_degrees_multiply(catalog):
    # random small towers H <= K inside harmonic actions: the degree of the
    # composite quotient morphism is the product of the two degrees
    from hcov.galois import SymmetricMultiset, build_cover
    from hcov.multigraph import compose
    from hcov.permgroup import all_subgroups, alternating

    S3 = fig3_s3_action(catalog).group
    sigma = perm_from_cycles([(0, 1, 2)], 3)
    sigma2 = perm_from_cycles([(0, 2, 1)], 3)
    tau = perm_from_cycles([(0, 1)], 3)
    base = Multigraph([1, 2], [(0, (1, 2))])
    fig4 = build_cover(
        S3, base, {},
        {1: SymmetricMultiset([sigma, sigma2]), 2: SymmetricMultiset([tau])},
    ).action
    A4 = alternating(4)
    a4_cover = build_cover(
        A4,
        base,
        {},
        {
            1: SymmetricMultiset([perm_from_cycles([(0, 1, 2)], 4),
                                  perm_from_cycles([(0, 2, 1)], 4)]),
            2: SymmetricMultiset([perm_from_cycles([(0, 1), (2, 3)], 4)]),
        },
    ).action
    rng = random.Random(6)
    checked = 0
    for a in (unflip(fig3_s3_action(catalog)), fig4, a4_cover):
        subs = all_subgroups(a.group)
        for _ in range(12):
            H = rng.choice(subs)
            K = rng.choice(subs)
            if not all(K.contains(h) for h in H.generators):
                continue
            m1 = quotient(a, H).projection
            m2 = induced_quotient_morphism(a, H, K)
            if len(m2.target.vertices) <= 1 or not m2.target.is_connected():
                continue
            if not (is_harmonic(m1) and is_harmonic(m2)):
                continue
            comp = compose(m2, m1)
            assert morphism_degree(comp) == morphism_degree(m1) * morphism_degree(m2)
            checked += 1
    assert checked >= 5


def test_action_json_round_trip(catalog):
    a = fig3_s3_action(catalog)
    data = json.loads(json.dumps(a.to_json()))
    again = GraphAction.from_json(data, catalog)
    assert again.graph == a.graph
    assert again.vertex_images == a.vertex_images
    assert again.edge_images == a.edge_images
