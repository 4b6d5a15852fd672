"""Finite permutation groups: orders, membership, cosets, (2,3)-pair search,
standard constructors, and the small-group catalog.

Permutations are tuples of ints, multiplied right-to-left: (p*q)(x) = p(q(x)).
Groups act on the left throughout the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from hcov.errors import CatalogError, GroupError
from hcov.kernel import mulclose, perm_id, perm_inv, perm_mul, perm_order

# -- cycle notation ---------------------------------------------------------


def perm_from_cycles(cycles, degree: int) -> tuple:
    """Build a permutation from disjoint cycles, e.g. [(0,1,2),(3,4)]."""
    out = list(range(degree))
    seen = set()
    for cyc in cycles:
        for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
            if a in seen:
                raise GroupError(f"point {a} repeated across cycles")
            seen.add(a)
            out[a] = b
    return tuple(out)


def cycles_of(p) -> list[tuple]:
    """Nontrivial cycles of p, each rotated to start at its minimum."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_string(p) -> str:
    cycs = cycles_of(p)
    if not cycs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)


def parse_cycle_string(s: str, degree: int) -> tuple:
    """Parse '(0 1)(2 3 4)' (comma or space separated) into a permutation."""
    s = s.strip().replace("),(", ")(").replace(") (", ")(")
    if s in ("()", ""):
        return perm_id(degree)
    if not (s.startswith("(") and s.endswith(")")):
        raise GroupError(f"cannot parse permutation {s!r}")
    cycles = []
    for part in s[1:-1].split(")("):
        try:
            pts = [int(tok) for tok in part.replace(",", " ").split()]
        except ValueError:
            raise GroupError(f"cannot parse permutation {s!r}") from None
        if any(p < 0 or p >= degree for p in pts):
            raise GroupError(f"point out of range in {s!r} (degree {degree})")
        if pts:
            cycles.append(tuple(pts))
    return perm_from_cycles(cycles, degree)


# -- stabilizer chain (deterministic Schreier-Sims) -------------------------

# Words are tuples of (generator_index, inverted); the element is the
# right-to-left product of the listed generators, so word concatenation
# matches perm_mul order.


def _invert_word(word):
    return tuple((i, not inv) for i, inv in reversed(word))


class _Level:
    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point):
        self.point = point
        self.gens = []  # list of (perm, word)
        self.transversal = {}  # orbit point -> (perm u with u[self.point]=pt, word)


class StabilizerChain:
    """Incremental deterministic Schreier-Sims over tuple permutations.

    prefer_points_from biases base-point selection to coordinates >= that
    offset while any of them is moved; callers use it to read the pointwise
    stabilizer of a coordinate block off the chain structure.
    """

    def __init__(self, degree, generators=(), track_words=False, prefer_points_from=None):
        self.degree = degree
        self.track = track_words
        self.prefer = prefer_points_from
        self.levels: list[_Level] = []
        for i, g in enumerate(generators):
            word = ((i, False),) if track_words else ()
            self.add_generator(tuple(g), word)

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.transversal)
        return n

    def add_generator(self, g, word=()):
        self._add_at(0, tuple(g), word)

    def _add_at(self, level, g, word):
        """Install g (which fixes all base points above `level`) at `level`."""
        residue, _, _ = self._sift(g, (), level)
        if residue is None:
            return
        if level == len(self.levels):
            moved = [i for i in range(self.degree) if g[i] != i]
            if self.prefer is not None:
                preferred = [i for i in moved if i >= self.prefer]
                point = preferred[0] if preferred else moved[0]
            else:
                point = moved[0]
            self.levels.append(_Level(point))
        lv = self.levels[level]
        lv.gens.append((g, word))
        self._close_level(level)

    def _sift(self, g, word, level):
        """Sift g down from `level`; returns (residue, word, level) or (None,..)."""
        ident = perm_id(self.degree)
        while True:
            if g == ident:
                return None, (), level
            if level == len(self.levels):
                return g, word, level
            lv = self.levels[level]
            b = g[lv.point]
            if b not in lv.transversal:
                return g, word, level
            u, uw = lv.transversal[b]
            g = perm_mul(perm_inv(u), g)
            if self.track:
                word = _invert_word(uw) + word
            level += 1

    def _close_level(self, level):
        lv = self.levels[level]
        ident = perm_id(self.degree)
        # rebuild the orbit/transversal from scratch (cheap at these degrees)
        lv.transversal = {lv.point: (ident, ())}
        frontier = [lv.point]
        while frontier:
            b = frontier.pop(0)
            u, uw = lv.transversal[b]
            for s, sw in lv.gens:
                c = s[b]
                if c not in lv.transversal:
                    nw = (sw + uw) if self.track else ()
                    lv.transversal[c] = (perm_mul(s, u), nw)
                    frontier.append(c)
        # all Schreier generators must sift through the rest of the chain
        inv_cache = {}
        for b in sorted(lv.transversal):
            u, uw = lv.transversal[b]
            for s, sw in lv.gens:
                c = s[b]
                uc_inv = inv_cache.get(c)
                if uc_inv is None:
                    uc_inv = inv_cache[c] = perm_inv(lv.transversal[c][0])
                schreier = perm_mul(uc_inv, perm_mul(s, u))
                if schreier == ident:
                    continue
                ucw = lv.transversal[c][1]
                w = (_invert_word(ucw) + sw + uw) if self.track else ()
                self._add_at(level + 1, schreier, w)

    def contains(self, p) -> bool:
        if len(p) != self.degree:
            return False
        g, _, _ = self._sift(tuple(p), (), 0)
        return g is None

    def factor(self, p):
        """Word over the original generators with product p; GroupError if p
        is not a member. Requires track_words=True."""
        if not self.track:
            raise GroupError("chain was built without word tracking")
        word = []
        g = tuple(p)
        ident = perm_id(self.degree)
        for lv in self.levels:
            if g == ident:
                break
            b = g[lv.point]
            if b not in lv.transversal:
                raise GroupError("element is not a member")
            u, uw = lv.transversal[b]
            word.extend(uw)
            g = perm_mul(perm_inv(u), g)
        if g != ident:
            raise GroupError("element is not a member")
        return tuple(word)


# -- groups -----------------------------------------------------------------


class PermutationGroup:
    """A finite permutation group given by generators on 0..degree-1."""

    def __init__(self, degree: int, generators, name: str = ""):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation of degree {degree}: {g}")
            if g != perm_id(degree):
                gens.append(g)
        self.generators = tuple(gens)
        self.name = name or f"group<{degree}>"
        self._chain = None
        self._elements = None

    @property
    def identity(self) -> tuple:
        return perm_id(self.degree)

    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.generators, track_words=True)
        return self._chain

    def order(self) -> int:
        return self.chain().order()

    def elements(self) -> tuple:
        """All elements, lexicographically sorted (full closure; cached)."""
        if self._elements is None:
            els = mulclose(self.generators, limit=2_000_000)
            if not els:
                els = {self.identity}
            self._elements = tuple(sorted(els))
        return self._elements

    def contains(self, p) -> bool:
        return self.chain().contains(p)

    def element_order(self, p) -> int:
        p = tuple(p)
        if not self.contains(p):
            raise GroupError(f"{cycle_string(p)} is not a member of {self.name}")
        return perm_order(p)

    def element_word(self, p):
        """Factor a member as a word over the generators (index, inverted)."""
        return self.chain().factor(p)

    def conjugacy_class(self, p) -> tuple:
        """Conjugacy class of a member, sorted."""
        p = tuple(p)
        cls = {p}
        queue = [p]
        conjugators = [(g, perm_inv(g)) for g in self.generators]
        while queue:
            x = queue.pop()
            for g, ginv in conjugators:
                y = perm_mul(g, perm_mul(x, ginv))
                if y not in cls:
                    cls.add(y)
                    queue.append(y)
        return tuple(sorted(cls))

    def subgroup(self, generators, name: str = "") -> "Subgroup":
        return Subgroup(self, generators, name)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (), "1")

    def __repr__(self):
        return f"PermutationGroup({self.name}, degree={self.degree}, order={self.order()})"


class Subgroup(PermutationGroup):
    """A subgroup given by generators that are members of the parent."""

    def __init__(self, parent: PermutationGroup, generators, name: str = ""):
        for g in generators:
            if not parent.contains(tuple(g)):
                raise GroupError(
                    f"{cycle_string(tuple(g))} is not a member of {parent.name}"
                )
        super().__init__(parent.degree, generators, name or "subgroup")
        self.parent = parent


def group_order(G: PermutationGroup) -> int:
    return G.order()


def element_order(G: PermutationGroup, p) -> int:
    return G.element_order(p)


def generates(G: PermutationGroup, elems) -> bool:
    """True iff the given members generate the whole group."""
    elems = [tuple(p) for p in elems]
    for p in elems:
        if not G.contains(p):
            raise GroupError(f"{cycle_string(p)} is not a member of {G.name}")
    return StabilizerChain(G.degree, elems).order() == G.order()


# -- cosets -----------------------------------------------------------------


def coset_representative(g, H: PermutationGroup) -> tuple:
    """Lexicographically minimal element of the left coset gH."""
    return min(perm_mul(g, h) for h in H.elements())


def same_left_coset(H: PermutationGroup, a, b) -> bool:
    return H.contains(perm_mul(perm_inv(tuple(a)), tuple(b)))


def left_cosets(G: PermutationGroup, H: Subgroup) -> list[tuple]:
    """Canonical representatives of the left cosets G/H, sorted.

    Each representative is the lexicographically minimal member of its coset.
    """
    if getattr(H, "parent", None) is not G:
        for h in H.generators:
            if not G.contains(h):
                raise GroupError("H is not contained in G")
    h_elements = H.elements()
    assigned = set()
    reps = []
    for g in G.elements():
        if g in assigned:
            continue
        reps.append(g)
        for h in h_elements:
            assigned.add(perm_mul(g, h))
    return reps


# -- (2,3)-generating pair search --------------------------------------------


@dataclass
class PairSearch:
    """Result of a (2,3)-pair search.

    pairs holds one (tau, sigma) per involution-class representative and
    order-3 element found; total counts all pairs over full involution
    orbits (class size times per-representative hits).
    """

    group: str
    pairs: list[tuple]
    total: int
    product_order: int | None = None
    classes_searched: int = 0

    def __bool__(self):
        return bool(self.pairs)


def element_class_representatives(G: PermutationGroup, k: int) -> list[tuple[tuple, int]]:
    """(representative, class size) per conjugacy class of order-k elements,
    sorted by representative."""
    seen = set()
    out = []
    for p in G.elements():
        if p in seen or perm_order(p) != k:
            continue
        cls = G.conjugacy_class(p)
        seen.update(cls)
        out.append((cls[0], len(cls)))
    out.sort()
    return out


def involution_class_representatives(G: PermutationGroup) -> list[tuple[tuple, int]]:
    return element_class_representatives(G, 2)


def search_pairs(
    G: PermutationGroup,
    order_a: int = 2,
    order_b: int = 3,
    product_order: int | None = None,
    all_first: bool = False,
) -> PairSearch:
    """All generating pairs (a, b) with |a| = order_a and |b| = order_b, and
    optionally |a*b| = product_order.

    a ranges over conjugacy-class representatives (conjugate pairs give
    isomorphic covers downstream); pass all_first=True for the full orbit.
    b always ranges over every element of its order."""
    order = G.order()
    bs = [p for p in G.elements() if perm_order(p) == order_b]
    pairs = []
    total = 0
    if all_first:
        firsts = [(p, 1) for p in G.elements() if perm_order(p) == order_a]
        n_classes = len(firsts)
    else:
        firsts = element_class_representatives(G, order_a)
        n_classes = len(firsts)
    for a, weight in firsts:
        for b in bs:
            if product_order is not None:
                if perm_order(perm_mul(a, b)) != product_order:
                    continue
            if StabilizerChain(G.degree, (a, b)).order() == order:
                pairs.append((a, b))
                total += weight
    return PairSearch(G.name, pairs, total, product_order, n_classes)


def search_23_pairs(
    G: PermutationGroup,
    product_order: int | None = None,
    all_involutions: bool = False,
) -> PairSearch:
    """All (tau, sigma) with |tau|=2, |sigma|=3, <tau,sigma>=G, and optionally
    |tau*sigma| = product_order; tau up to conjugacy unless all_involutions."""
    return search_pairs(G, 2, 3, product_order, all_involutions)


# -- subgroup enumeration (small groups) -------------------------------------


def all_subgroups(G: PermutationGroup, max_order: int = 48) -> list[Subgroup]:
    """Every subgroup of G, as Subgroup objects; exhaustive, |G| <= max_order."""
    if G.order() > max_order:
        raise GroupError(f"subgroup enumeration capped at order {max_order}")
    elements = G.elements()
    subgroups = {}  # frozenset of elements -> generating tuple
    ident = G.identity
    subgroups[frozenset([ident])] = ()
    for p in elements:
        if p == ident:
            continue
        cyc = frozenset(mulclose([p]))
        subgroups.setdefault(cyc, (p,))
    frontier = list(subgroups.items())
    while frontier:
        new = []
        for els, gens in frontier:
            for p in elements:
                if p in els or p == ident:
                    continue
                bigger = frozenset(mulclose(list(gens) + [p]))
                if bigger not in subgroups:
                    subgroups[bigger] = gens + (p,)
                    new.append((bigger, gens + (p,)))
        frontier = new
    out = [G.subgroup(gens) for els, gens in subgroups.items()]
    out.sort(key=lambda H: (H.order(), H.elements()))
    return out


# -- constructors -------------------------------------------------------------


def cyclic(n: int) -> PermutationGroup:
    """Z/nZ as the n-cycle (0 1 ... n-1); canonical generator g."""
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    if n == 1:
        return PermutationGroup(1, [], "Z1")
    g = tuple(list(range(1, n)) + [0])
    return PermutationGroup(n, [g], f"Z{n}")


def dihedral(n: int) -> PermutationGroup:
    """Symmetries of the regular n-gon (order 2n), named by group order."""
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")
    if n == 1:
        return PermutationGroup(2, [(1, 0)], "D2")
    if n == 2:
        return PermutationGroup(4, [(1, 0, 2, 3), (0, 1, 3, 2)], "D4")
    rot = tuple(list(range(1, n)) + [0])
    refl = tuple((n - i) % n for i in range(n))
    return PermutationGroup(n, [rot, refl], f"D{2 * n}")


def symmetric(n: int) -> PermutationGroup:
    """S_n on 0..n-1 with generators (0 1) and (0 1 ... n-1)."""
    if n < 1:
        raise GroupError("symmetric(n) needs n >= 1")
    if n == 1:
        return PermutationGroup(1, [], "S1")
    gens = [perm_from_cycles([(0, 1)], n)]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return PermutationGroup(n, gens, f"S{n}")


def alternating(n: int) -> PermutationGroup:
    """A_n with generators (0 1 2) and an n- or (n-1)-cycle."""
    if n < 1:
        raise GroupError("alternating(n) needs n >= 1")
    if n <= 2:
        return PermutationGroup(max(n, 1), [], f"A{n}")
    gens = [perm_from_cycles([(0, 1, 2)], n)]
    if n > 3:
        if n % 2 == 1:
            gens.append(tuple(list(range(1, n)) + [0]))
        else:
            gens.append(perm_from_cycles([tuple(range(1, n))], n))
    return PermutationGroup(n, gens, f"A{n}")


def direct_product(G: PermutationGroup, H: PermutationGroup) -> PermutationGroup:
    """G x H acting on the disjoint union of the two point sets."""
    n, m = G.degree, H.degree
    gens = [g + tuple(range(n, n + m)) for g in G.generators]
    gens += [tuple(range(n)) + tuple(x + n for x in h) for h in H.generators]
    return PermutationGroup(n + m, gens, f"{G.name}x{H.name}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def psl2(p: int, allow_large: bool = False) -> PermutationGroup:
    """PSL_2(F_p) in its natural action on the projective line.

    Points 0..p-1 are the field; index p is the point at infinity.
    Generators: x -> x+1 and x -> -1/x. Capped at p <= 31 unless
    allow_large is set.
    """
    if not _is_prime(p) or p == 2:
        raise GroupError("psl2(p) needs an odd prime p")
    if p > 31 and not allow_large:
        raise GroupError("psl2 capped at p <= 31; pass allow_large=True to override")
    INF = p
    t = tuple([(i + 1) % p for i in range(p)] + [INF])
    s = [0] * (p + 1)
    s[0] = INF
    s[INF] = 0
    for i in range(1, p):
        s[i] = (-pow(i, p - 2, p)) % p
    return PermutationGroup(p + 1, [t, tuple(s)], f"PSL(2,{p})")


# -- catalog ------------------------------------------------------------------

# Published counts of isomorphism types per order; completeness of catalog
# sections is asserted against this table, never recomputed.
KNOWN_GROUP_COUNTS = {6: 2, 12: 5, 18: 5, 24: 15, 30: 4, 66: 4}


def order_spectrum(G: PermutationGroup) -> dict[int, int]:
    """Map element order -> count, by full enumeration."""
    spec = {}
    for p in G.elements():
        k = perm_order(p)
        spec[k] = spec.get(k, 0) + 1
    return spec


@dataclass
class Catalog:
    """Named small groups bucketed by order, with completeness flags."""

    groups: list[PermutationGroup] = field(default_factory=list)
    complete_orders: set = field(default_factory=set)

    def by_order(self, n: int) -> list[PermutationGroup]:
        return [G for G in self.groups if G.order() == n]

    def names(self) -> list[str]:
        return [G.name for G in self.groups]

    def get(self, name: str) -> PermutationGroup | None:
        for G in self.groups:
            if G.name == name:
                return G
        return None

    def is_complete_for(self, order: int) -> bool:
        return order in self.complete_orders


def load_catalog(path) -> Catalog:
    """Load and validate a catalog file.

    Validation: section counts match the published isomorphism-type counts,
    names are unique, and every group's order and order spectrum match the
    shipped fingerprints.
    """
    with open(path) as fh:
        data = json.load(fh)
    catalog = Catalog()
    seen_names = set()
    for section in data:
        order = section["order"]
        groups = section["groups"]
        if order in KNOWN_GROUP_COUNTS:
            if len(groups) != KNOWN_GROUP_COUNTS[order]:
                raise CatalogError(
                    f"order {order}: catalog has {len(groups)} groups, "
                    f"published count is {KNOWN_GROUP_COUNTS[order]}"
                )
            catalog.complete_orders.add(order)
        elif section.get("complete"):
            catalog.complete_orders.add(order)
        for rec in groups:
            name = rec["name"]
            if name in seen_names:
                raise CatalogError(f"duplicate group name {name!r}")
            seen_names.add(name)
            G = PermutationGroup(rec["degree"], [tuple(g) for g in rec["generators"]], name)
            if G.order() != order:
                raise CatalogError(
                    f"{name}: generators produce order {G.order()}, section says {order}"
                )
            shipped = {int(k): v for k, v in rec["order_spectrum"].items()}
            if order_spectrum(G) != shipped:
                raise CatalogError(f"{name}: order spectrum does not match fingerprint")
            catalog.groups.append(G)
    return catalog


def default_catalog_path():
    from importlib.resources import files

    return str(files("hcov").joinpath("data/catalog.json"))


def load_default_catalog() -> Catalog:
    return load_catalog(default_catalog_path())


# -- group resolution (names, constructor expressions, inline specs) ---------


def group_from_spec(spec, catalog: Catalog | None = None) -> PermutationGroup:
    """Resolve a group from a catalog name, a constructor expression
    (sym:N, alt:N, cyc:N, dih:N, psl2:P, prod:A,B), or an inline JSON dict
    {"degree":..., "generators":[...], "name":...}."""
    if isinstance(spec, dict):
        return PermutationGroup(
            spec["degree"], [tuple(g) for g in spec["generators"]], spec.get("name", "")
        )
    if not isinstance(spec, str):
        raise GroupError(f"cannot resolve group from {spec!r}")
    if catalog is not None:
        G = catalog.get(spec)
        if G is not None:
            return G
    if ":" in spec:
        kind, _, arg = spec.partition(":")
        kind = kind.lower()
        if kind == "prod":
            left, _, right = arg.partition(",")
            return direct_product(
                group_from_spec(left.strip(), catalog), group_from_spec(right.strip(), catalog)
            )
        n = int(arg)
        ctor = {
            "sym": symmetric,
            "alt": alternating,
            "cyc": cyclic,
            "dih": dihedral,
            "psl2": psl2,
        }.get(kind)
        if ctor is None:
            raise GroupError(f"unknown constructor {kind!r}")
        return ctor(n)
    raise GroupError(f"unknown group {spec!r} (not in catalog, not a constructor)")
