"""Maximal covers from (2,3)-generating pairs, genus classification against
the small-group catalog, and the alternating/symmetric spot checks.

The canonical maximal cover of a pair (tau, sigma) lives over the point
graph: vertices are the left cosets of <sigma>, edges the left cosets of
<tau>, and the edge g<tau> joins g<sigma> to g*tau<sigma>. Every edge is
flipped and |G| = 6(genus - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hcov.errors import CatalogError, CoverError, GroupError
from hcov.galois import (
    HarmonicCover,
    InertiaStructure,
    SymmetricMultiset,
    _verify_cover,
    build_cover,
)
from hcov.harmonic import GraphAction, flipped_edges
from hcov.kernel import perm_inv, perm_mul
from hcov.multigraph import Dart, GraphMorphism, Multigraph
from hcov.permgroup import (
    Catalog,
    PairSearch,
    PermutationGroup,
    alternating,
    generates,
    left_cosets,
    search_23_pairs,
    symmetric,
)


class MaximalCover:
    """Coset-labeled maximal cover of the point graph for a (2,3)-pair."""

    def __init__(self, group: PermutationGroup, tau, sigma, cover: HarmonicCover,
                 vertex_rep, edge_rep, dart_element):
        self.group = group
        self.tau = tau
        self.sigma = sigma
        self.cover = cover
        self.vertex_rep = vertex_rep  # vertex id -> canonical <sigma>-coset rep
        self.edge_rep = edge_rep  # edge id -> canonical <tau>-coset rep
        self.dart_element = dart_element  # Dart -> group element
        self.element_dart = {g: d for d, g in dart_element.items()}

    @property
    def graph(self) -> Multigraph:
        return self.cover.graph

    @property
    def action(self) -> GraphAction:
        return self.cover.action

    def genus(self) -> int:
        return self.graph.genus()

    def __repr__(self):
        return (
            f"MaximalCover({self.group.name}, {len(self.graph.vertices)} vertices,"
            f" genus {self.genus()})"
        )


def build_maximal(G: PermutationGroup, tau, sigma) -> MaximalCover:
    """Canonical maximal cover for a generating pair of orders 2 and 3."""
    tau, sigma = tuple(tau), tuple(sigma)
    if G.element_order(tau) != 2:
        raise GroupError("tau must have order 2")
    if G.element_order(sigma) != 3:
        raise GroupError("sigma must have order 3")
    if not generates(G, [tau, sigma]):
        raise GroupError("tau and sigma do not generate the group")
    order = G.order()
    if order < 6:
        raise GroupError("maximal covers need |G| >= 6")

    sigma_sub = G.subgroup([sigma], "<sigma>")
    tau_sub = G.subgroup([tau], "<tau>")
    vreps = left_cosets(G, sigma_sub)
    ereps = left_cosets(G, tau_sub)
    vid = {r: i for i, r in enumerate(vreps)}
    eid = {r: i for i, r in enumerate(ereps)}
    vrep_of = {}
    for r in vreps:
        for h in sigma_sub.elements():
            vrep_of[perm_mul(r, h)] = r
    erep_of = {}
    for r in ereps:
        for h in tau_sub.elements():
            erep_of[perm_mul(r, h)] = r

    edges = []
    dart_element = {}
    for r in ereps:
        u = vid[vrep_of[r]]
        v = vid[vrep_of[perm_mul(r, tau)]]
        if u == v:
            raise CoverError("coset edge became a loop; orders 2 and 3 forbid this")
        e = eid[r]
        edges.append((e, (u, v)))
        dart_element[Dart(e, u)] = r
        dart_element[Dart(e, v)] = perm_mul(r, tau)
    graph = Multigraph(range(len(vreps)), edges)

    vertex_images = []
    edge_images = []
    for gen in G.generators:
        vertex_images.append({vid[r]: vid[vrep_of[perm_mul(gen, r)]] for r in vreps})
        edge_images.append({eid[r]: eid[erep_of[perm_mul(gen, r)]] for r in ereps})
    action = GraphAction(G, graph, vertex_images, edge_images)

    base = Multigraph([0], [])
    projection = GraphMorphism(
        graph, base, {v: 0 for v in graph.vertices}, {e: None for e in graph.edges}
    )
    cover = HarmonicCover(
        base,
        G,
        InertiaStructure({0: sigma_sub}),
        {0: SymmetricMultiset([tau])},
        action,
        projection,
        {0: tuple(graph.vertices)},
        {v: (0, vreps[v]) for v in graph.vertices},
        {e: ("flip", ereps[e]) for e in graph.edges},
        True,
        [],
    )
    _verify_cover(cover)

    mc = MaximalCover(
        G, tau, sigma, cover,
        {vid[r]: r for r in vreps},
        {eid[r]: r for r in ereps},
        dart_element,
    )
    _verify_maximal(mc)
    return mc


def _verify_maximal(mc: MaximalCover):
    graph = mc.graph
    order = mc.group.order()
    if len(graph.vertices) != order // 3 or len(graph.edges) != order // 2:
        raise CoverError("coset counts are off")
    for v in graph.vertices:
        if graph.degree(v) != 3:
            raise CoverError("maximal cover is not 3-regular")
    if not graph.is_connected():
        raise CoverError("maximal cover is disconnected")
    if flipped_edges(mc.action) != set(graph.edges):
        raise CoverError("not every edge of the maximal cover is flipped")
    if order != 6 * (graph.genus() - 1):
        raise CoverError("|G| = 6(genus-1) fails")


def build_maximal_rho(G: PermutationGroup, tau, sigma, rho=None) -> HarmonicCover:
    """Variant cover from S = {rho, rho^-1} with rho in tau<sigma>.

    Built through the generic Cayley/collapse/flip pipeline; empirically
    isomorphic to the S = {tau} cover on small groups (no general claim).
    """
    tau, sigma = tuple(tau), tuple(sigma)
    if rho is None:
        rho = perm_mul(tau, sigma)
    rho = tuple(rho)
    coset = {perm_mul(tau, h) for h in G.subgroup([sigma]).elements()}
    if rho not in coset:
        raise GroupError("rho must lie in the coset tau<sigma>")
    base = Multigraph([0], [])
    S = SymmetricMultiset([rho]) if rho == perm_inv(rho) else SymmetricMultiset(
        [rho, perm_inv(rho)]
    )
    return build_cover(G, base, {0: G.subgroup([sigma], "<sigma>")}, {0: S}, flipped=True)


# -- classification ------------------------------------------------------------


@dataclass
class ClassificationRow:
    genus: int
    order: int
    maximal_groups: list[str]
    witnesses: dict = field(default_factory=dict)  # name -> (tau, sigma)
    pair_totals: dict = field(default_factory=dict)  # name -> total pair count


def _search_group(G: PermutationGroup) -> PairSearch:
    return search_23_pairs(G)


def classify_genus(g: int, catalog: Catalog, jobs: int = 1) -> ClassificationRow:
    """Maximal graph groups of genus g: the catalog groups of order 6(g-1)
    admitting a (2,3)-generating pair, with one witness pair each."""
    if g < 2:
        raise GroupError("classification starts at genus 2")
    order = 6 * (g - 1)
    if not catalog.is_complete_for(order):
        raise CatalogError(
            f"catalog is not complete for order {order}; classification would be partial"
        )
    groups = sorted(catalog.by_order(order), key=lambda G: G.name)
    results = _map_maybe_parallel(_search_group, groups, jobs)
    row = ClassificationRow(g, order, [])
    for G, res in zip(groups, results):
        if res.pairs:
            row.maximal_groups.append(G.name)
            row.witnesses[G.name] = res.pairs[0]
            row.pair_totals[G.name] = res.total
    return row


def _map_maybe_parallel(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        try:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(fn, items))
        except Exception:
            pass  # fall back to serial; results are identical
    return [fn(item) for item in items]


def classification_table(g_from: int, g_to: int, catalog: Catalog, jobs: int = 1):
    return [classify_genus(g, catalog, jobs) for g in range(g_from, g_to + 1)]


def miller_check(family: str, n: int) -> bool:
    """Exhaustive (2,3)-generation test for A_n or S_n, 3 <= n <= 8."""
    if not 3 <= n <= 8:
        raise GroupError("miller_check supports 3 <= n <= 8")
    if family == "alternating":
        G = alternating(n)
    elif family == "symmetric":
        G = symmetric(n)
    else:
        raise GroupError("family must be 'alternating' or 'symmetric'")
    return bool(search_23_pairs(G))


def genus12_check(catalog: Catalog) -> bool:
    """True iff no maximal graph group of genus 12 exists (order 66)."""
    return not classify_genus(12, catalog).maximal_groups
