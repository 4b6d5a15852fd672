#!/usr/bin/env python3
"""Generate src/hcov/data/catalog.json: every isomorphism type of orders
6, 12, 18, 24, 30, and 66, with permutation generators and order-spectrum
fingerprints.

The script validates each section: group orders match, the section size
matches the published count, and the order spectra are pairwise distinct
(this is what lets the spectra act as non-isomorphism witnesses).
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hcov.permgroup import (  # noqa: E402
    KNOWN_GROUP_COUNTS,
    PermutationGroup,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    order_spectrum,
    perm_from_cycles,
    symmetric,
)

# left multiplication on the quaternion units [1, -1, i, -i, j, -j, k, -k]
Q8_I = perm_from_cycles([(0, 2, 1, 3), (4, 6, 5, 7)], 8)
Q8_J = perm_from_cycles([(0, 4, 1, 5), (2, 7, 3, 6)], 8)


def renamed(G, name):
    return PermutationGroup(G.degree, G.generators, name)


def shift(perm, offset, degree):
    out = list(range(degree))
    for i, j in enumerate(perm):
        out[i + offset] = j + offset
    return tuple(out)


def dic3():
    """Dicyclic group of order 12: a^6 = 1, b^2 = a^3, b a b^-1 = a^-1."""
    a = perm_from_cycles([(0, 1, 2), (3, 5), (4, 6)], 7)
    b = perm_from_cycles([(1, 2), (3, 4, 5, 6)], 7)
    return PermutationGroup(7, [a, b], "Dic3")


def dic6():
    """Dicyclic group of order 24: hexagon quotient plus regular Q8 block."""
    a = perm_from_cycles([(0, 1, 2, 3, 4, 5)], 14)
    a = tuple(shift(Q8_I, 6, 14)[i] if i >= 6 else a[i] for i in range(14))
    b = perm_from_cycles([(1, 5), (2, 4)], 14)
    b = tuple(shift(Q8_J, 6, 14)[i] if i >= 6 else b[i] for i in range(14))
    return PermutationGroup(14, [a, b], "Dic6")


def q8xz3():
    Q8 = PermutationGroup(8, [Q8_I, Q8_J], "Q8")
    return renamed(direct_product(Q8, cyclic(3)), "Q8xZ3")


def sl23():
    """SL(2,3) acting on the 8 nonzero vectors of F_3^2."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def mat_perm(m):
        out = []
        for a, b in vectors:
            img = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)
            out.append(index[img])
        return tuple(out)

    A = mat_perm([[1, 1], [0, 1]])
    B = mat_perm([[0, 2], [1, 0]])
    return PermutationGroup(8, [A, B], "SL(2,3)")


def z3_z8():
    """Z3 : Z8 with the order-8 generator inverting the normal Z3."""
    a = perm_from_cycles([(0, 1, 2)], 11)
    b = perm_from_cycles([(1, 2), (3, 4, 5, 6, 7, 8, 9, 10)], 11)
    return PermutationGroup(11, [a, b], "Z3:Z8")


def z3_d8():
    """Z3 : D8 (= (Z6 x Z2) : Z2): the order-4 rotation inverts Z3, the
    reflection centralizes it."""
    a = perm_from_cycles([(0, 1, 2)], 7)
    r = perm_from_cycles([(1, 2), (3, 4, 5, 6)], 7)
    s = perm_from_cycles([(4, 6)], 7)
    return PermutationGroup(7, [a, r, s], "Z3:D8")


def gen_dihedral_z3z3():
    """(Z3 x Z3) : Z2 with the involution inverting both coordinates."""
    a = perm_from_cycles([(0, 1, 2)], 6)
    b = perm_from_cycles([(3, 4, 5)], 6)
    t = perm_from_cycles([(1, 2), (4, 5)], 6)
    return PermutationGroup(6, [a, b, t], "(Z3xZ3):Z2")


def sections():
    return {
        6: [renamed(cyclic(6), "Z6"), renamed(symmetric(3), "S3")],
        12: [
            renamed(cyclic(12), "Z12"),
            renamed(direct_product(cyclic(6), cyclic(2)), "Z6xZ2"),
            renamed(dihedral(6), "D12"),
            renamed(alternating(4), "A4"),
            dic3(),
        ],
        18: [
            renamed(cyclic(18), "Z18"),
            renamed(direct_product(cyclic(6), cyclic(3)), "Z6xZ3"),
            renamed(dihedral(9), "D18"),
            renamed(direct_product(symmetric(3), cyclic(3)), "S3xZ3"),
            gen_dihedral_z3z3(),
        ],
        24: [
            renamed(cyclic(24), "Z24"),
            renamed(direct_product(cyclic(12), cyclic(2)), "Z12xZ2"),
            renamed(
                direct_product(direct_product(cyclic(6), cyclic(2)), cyclic(2)),
                "Z6xZ2xZ2",
            ),
            renamed(symmetric(4), "S4"),
            renamed(direct_product(alternating(4), cyclic(2)), "A4xZ2"),
            renamed(dihedral(12), "D24"),
            dic6(),
            renamed(direct_product(symmetric(3), cyclic(4)), "S3xZ4"),
            renamed(
                direct_product(direct_product(symmetric(3), cyclic(2)), cyclic(2)),
                "S3xZ2xZ2",
            ),
            renamed(direct_product(dihedral(4), cyclic(3)), "D8xZ3"),
            q8xz3(),
            sl23(),
            z3_z8(),
            renamed(direct_product(dic3(), cyclic(2)), "Dic3xZ2"),
            z3_d8(),
        ],
        30: [
            renamed(cyclic(30), "Z30"),
            renamed(dihedral(15), "D30"),
            renamed(direct_product(dihedral(5), cyclic(3)), "D10xZ3"),
            renamed(direct_product(symmetric(3), cyclic(5)), "S3xZ5"),
        ],
        66: [
            renamed(cyclic(66), "Z66"),
            renamed(dihedral(33), "D66"),
            renamed(direct_product(dihedral(11), cyclic(3)), "D22xZ3"),
            renamed(direct_product(symmetric(3), cyclic(11)), "S3xZ11"),
        ],
    }


def main():
    data = []
    for order, groups in sections().items():
        assert len(groups) == KNOWN_GROUP_COUNTS[order], (
            order,
            len(groups),
            KNOWN_GROUP_COUNTS[order],
        )
        spectra = []
        records = []
        for G in groups:
            got = G.order()
            assert got == order, f"{G.name}: order {got} != {order}"
            spec = order_spectrum(G)
            spectra.append(spec)
            records.append(
                {
                    "name": G.name,
                    "degree": G.degree,
                    "generators": [list(g) for g in G.generators],
                    "order_spectrum": {str(k): v for k, v in sorted(spec.items())},
                }
            )
        for i in range(len(spectra)):
            for j in range(i + 1, len(spectra)):
                assert spectra[i] != spectra[j], (
                    f"order {order}: {groups[i].name} and {groups[j].name} share a spectrum"
                )
        data.append({"order": order, "groups": records})
        print(f"order {order}: {len(groups)} groups, spectra pairwise distinct")
    out = Path(__file__).resolve().parent.parent / "src" / "hcov" / "data" / "catalog.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
