#!/usr/bin/env python3
"""Generate src/hcov/data/figures/*.json: the bundled morphism, action, and
cover specs used by the CLI examples and the acceptance tests.

Each artifact is rebuilt and structurally verified before being written.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hcov.galois import cover_from_spec  # noqa: E402
from hcov.harmonic import GraphAction, is_harmonic_action  # noqa: E402
from hcov.multigraph import GraphMorphism, Multigraph, is_harmonic  # noqa: E402
from hcov.permgroup import load_default_catalog  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "src" / "hcov" / "data" / "figures"

SIGMA = [1, 2, 0]
SIGMA2 = [2, 0, 1]
TAU = [1, 0, 2]


def fig1_phi1():
    source = Multigraph(
        [1, 2, 3, 4],
        [(1, (1, 2)), (2, (2, 3)), (3, (2, 4)), (4, (4, 3)), (5, (1, 4)), (6, (1, 4))],
    )
    target = Multigraph([5, 6, 7], [(10, (5, 6)), (11, (6, 7))])
    m = GraphMorphism(
        source,
        target,
        {1: 5, 2: 6, 3: 7, 4: 6},
        {1: 10, 2: 11, 3: None, 4: 11, 5: 10, 6: 10},
    )
    assert not is_harmonic(m)
    return m.to_json()


def fig1_phi2():
    source = Multigraph(
        [8, 9, 10, 11],
        [
            (1, (8, 9)),
            (2, (9, 10)),
            (3, (9, 11)),
            (4, (8, 11)),
            (5, (8, 11)),
            (6, (10, 11)),
            (7, (10, 11)),
        ],
    )
    target = Multigraph([12, 13, 14], [(10, (12, 13)), (11, (13, 14))])
    m = GraphMorphism(
        source,
        target,
        {8: 12, 9: 13, 10: 14, 11: 13},
        {1: 10, 2: 11, 3: None, 4: 10, 5: 10, 6: 11, 7: 11},
    )
    assert is_harmonic(m)
    return m.to_json()


def theta_graph():
    return {
        "vertices": [1, 2],
        "edges": [
            {"id": 1, "ends": [1, 2]},
            {"id": 2, "ends": [1, 2]},
            {"id": 3, "ends": [1, 2]},
        ],
    }


def fig2_action():
    data = theta_graph()
    data["group"] = {"name": "Z2", "degree": 2, "generators": [[1, 0]]}
    data["vertex_images"] = {"0": {"1": 1, "2": 2}}
    data["edge_images"] = {"0": {"1": 2, "2": 1, "3": 3}}
    action = GraphAction.from_json(data)
    assert not is_harmonic_action(action)
    return data


def fig3_s3_action():
    data = theta_graph()
    data["group"] = "S3"
    data["vertex_images"] = {
        "0": {"1": 2, "2": 1},  # tau swaps the vertices
        "1": {"1": 1, "2": 2},  # sigma fixes them
    }
    data["edge_images"] = {
        "0": {"1": 1, "2": 3, "3": 2},  # tau fixes e1, swaps e2 and e3
        "1": {"1": 2, "2": 3, "3": 1},  # sigma cycles the edges
    }
    action = GraphAction.from_json(data, load_default_catalog())
    assert is_harmonic_action(action)
    return data


def fig3_z6_action():
    data = theta_graph()
    data["group"] = {
        "name": "Z6",
        "degree": 5,
        "generators": [[1, 0, 3, 4, 2]],
    }
    data["vertex_images"] = {"0": {"1": 2, "2": 1}}
    data["edge_images"] = {"0": {"1": 2, "2": 3, "3": 1}}
    action = GraphAction.from_json(data)
    assert is_harmonic_action(action)
    return data


def base_edge():
    return {"tree": {"vertices": [1, 2], "edges": [{"id": 0, "ends": [1, 2]}]}}


def fig4_spec():
    return {
        "group": "S3",
        "base": base_edge(),
        "inertia": {},
        "multisets": {"1": [[SIGMA, 1], [SIGMA2, 1]], "2": [[TAU, 1]]},
        "flipped": False,
    }


def fig5_spec():
    spec = fig4_spec()
    spec["flipped"] = True
    return spec


def fig6_spec():
    return {
        "group": "S3",
        "base": base_edge(),
        "inertia": {"1": [SIGMA]},
        "multisets": {"2": [[TAU, 1]]},
        "flipped": True,
    }


def theta_s3_spec():
    """Maximal S3-cover of the point graph (the theta graph)."""
    return {
        "group": "S3",
        "base": {"tree": {"vertices": [0], "edges": []}},
        "inertia": {"0": [SIGMA]},
        "multisets": {"0": [[TAU, 1]]},
        "flipped": True,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    catalog = load_default_catalog()
    files = {
        "fig1_phi1.json": fig1_phi1(),
        "fig1_phi2.json": fig1_phi2(),
        "fig2_action.json": fig2_action(),
        "fig3_s3_action.json": fig3_s3_action(),
        "fig3_z6_action.json": fig3_z6_action(),
        "fig4.json": fig4_spec(),
        "fig5.json": fig5_spec(),
        "fig6.json": fig6_spec(),
        "theta_s3.json": theta_s3_spec(),
    }
    expected = {
        "fig4.json": (12, 18, 7),
        "fig5.json": (12, 15, 4),
        "fig6.json": (8, 9, 2),
        "theta_s3.json": (2, 3, 2),
    }
    for name, (nv, ne, g) in expected.items():
        cover = cover_from_spec(files[name], catalog)
        assert len(cover.graph.vertices) == nv, name
        assert len(cover.graph.edges) == ne, name
        assert cover.graph.genus() == g, name
    for name, data in files.items():
        (OUT / name).write_text(json.dumps(data, indent=1) + "\n")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
