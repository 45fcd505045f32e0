import json
import math

import pytest
from hypothesis import given, settings

from graph_strategies import graphs
from qgraph.errors import InvalidGraphError
from qgraph.graph import (DIRICHLET, NEUMANN, Bond, Graph, PiecewisePotential, chain,
                          compile_potential, directed_bonds, dump_graph, load_graph, validate)


def test_scaling_factor_from_lambda():
    assert Bond(0, 1, 2.0, lam=0.75).beta == pytest.approx(0.5)
    assert Bond(0, 1, 2.0, lam=0.75).action == pytest.approx(1.0)
    # attractive scaling potentials are allowed and give beta > 1
    assert Bond(0, 1, 1.0, lam=-3.0).beta == pytest.approx(2.0)


@pytest.mark.parametrize("graph, fragment", [
    (Graph(2, (Bond(0, 1, -1.0),), (NEUMANN, NEUMANN)), "length"),
    (Graph(2, (Bond(0, 1, 1.0, lam=1.0),), (NEUMANN, NEUMANN)), "lambda >= 1"),
    (Graph(2, (Bond(0, 0, 1.0),), (NEUMANN, NEUMANN)), "self-loop"),
    (Graph(3, (Bond(0, 1, 1.0),), (NEUMANN,) * 3), "isolated"),
    (Graph(2, (Bond(0, 5, 1.0),), (NEUMANN, NEUMANN)), "out of range"),
    (Graph(2, (Bond(0, 1, 1.0),), (NEUMANN,)), "vertex conditions"),
])
def test_validation_names_the_problem(graph, fragment):
    rep = validate(graph)
    assert not rep.ok
    assert any(fragment in p for p in rep.problems)
    with pytest.raises(InvalidGraphError):
        rep.raise_if_invalid()


def test_disconnected_graph_rejected():
    g = Graph(4, (Bond(0, 1, 1.0), Bond(2, 3, 1.0)), (NEUMANN,) * 4)
    assert "graph is not connected" in validate(g).problems


def test_directed_bonds_pair_up_and_flip_magnetic_constant():
    g = Graph(3, (Bond(1, 2, 1.0, A=0.3), Bond(0, 1, 2.0)), (NEUMANN,) * 3)
    db = directed_bonds(g)
    assert [b.label for b in db] == ["0>1", "1>0", "1>2", "2>1"]
    for b in db:
        assert db[b.reverse].reverse == b.index
        assert db[b.reverse].A == -b.A
    assert db[2].A == 0.3


@given(graphs())
@settings(max_examples=50, deadline=None)
def test_json_round_trip(g):
    back = Graph.from_json(json.loads(json.dumps(g.to_json())))
    assert back == g


def test_file_round_trip(tmp_path):
    g = chain((0.3, 0.4), (1.0, 0.7), (DIRICHLET, NEUMANN, DIRICHLET))
    path = tmp_path / "g.json"
    dump_graph(g, path)
    assert load_graph(path) == g


def test_compile_step_potential():
    g = compile_potential(PiecewisePotential(1.0, (0.3,), (0.0, 0.5)))
    assert g.n_vertices == 3
    assert [b.L for b in g.bonds] == pytest.approx([0.3, 0.7])
    assert g.bonds[1].beta == pytest.approx(math.sqrt(0.5))
    assert g.vertex_conditions[0].is_dirichlet and g.vertex_conditions[2].is_dirichlet
    assert g.vertex_conditions[1].lambda0 == 0.0


def test_compile_merges_delta_on_breakpoint():
    p = PiecewisePotential(1.0, (0.4,), (0.0, 0.6), ((0.4, 0.7),))
    g = compile_potential(p)
    assert g.n_vertices == 3
    assert g.vertex_conditions[1].lambda0 == pytest.approx(0.7)


def test_potential_file_is_compiled_on_load(tmp_path):
    p = PiecewisePotential(1.0, (0.5,), (0.0, 0.2), ((0.25, 1.0),))
    path = tmp_path / "p.json"
    path.write_text(json.dumps(p.to_json()))
    g = load_graph(path)
    assert g.n_vertices == 4
    assert [b.L for b in g.bonds] == pytest.approx([0.25, 0.25, 0.5])


@pytest.mark.parametrize("p", [
    PiecewisePotential(1.0, (1.2,), (0.0, 0.5)),
    PiecewisePotential(1.0, (0.3,), (0.0,)),
    PiecewisePotential(1.0, (), (1.5,)),
    PiecewisePotential(1.0, (), (0.0,), ((0.5, -1.0),)),
])
def test_bad_potentials_are_refused(p):
    assert p.problems()
    with pytest.raises(InvalidGraphError):
        compile_potential(p)
