import math

import pytest

from helpers import brute_force_parent
from ripsaw import (
    InputError,
    build,
    contraction_violations,
    density_violations,
    euclidean_oracle,
    find_parent,
    matrix_oracle,
    random_cloud,
    read_tree,
    solenoid_sample,
    SolenoidParams,
    tighten,
    write_tree,
)
from ripsaw.covertree import ContractionTree, CoverTree

INF = math.inf


def line_oracle(xs):
    return euclidean_oracle([(x,) for x in xs])


# --- insertion ---------------------------------------------------------------

def test_build_rejects_nothing_and_handles_single_point():
    tree = build(line_oracle([7.0]))
    assert tree.size == 1
    assert tree.parent == [-1]


def test_build_invalid_candidate_skipped():
    # inserting 1: candidate at 10 is invalid since d=9 > d(10, root)/2 = 5
    tree = build(line_oracle([0.0, 10.0, 1.0]))
    assert tree.parent[2] == 0
    assert tree.radius(2) == 2.0


def test_build_duplicate_points():
    tree = build(line_oracle([3.0, 3.0]))
    assert tree.parent[1] == 0
    assert tree.radius(1) == 0.0


def test_find_parent_root_only():
    oracle = line_oracle([0.0, 4.0])
    tree = build(line_oracle([0.0]))
    assert find_parent(tree, oracle, 1) == (0, 4.0)


def test_find_parent_zero_distance():
    oracle = line_oracle([0.0, 1.0, 1.0])
    tree = build(line_oracle([0.0, 1.0]))
    node, dist = find_parent(tree, oracle, 2)
    assert dist == 0.0
    assert node == 1


def test_children_sorted_descending_by_radius():
    for seed in range(5):
        oracle = euclidean_oracle(random_cloud(120, 2, seed))
        tree = build(oracle)
        for node_children in tree.children:
            radii = [tree.radius(c) for c in node_children]
            assert radii == sorted(radii, reverse=True)


@pytest.mark.parametrize("seed", range(4))
def test_find_parent_matches_brute_force(seed):
    """Pruned search equals the exhaustive argmin at every insertion step."""
    pts = random_cloud(200, 2, seed)
    oracle = euclidean_oracle(pts)
    tree = CoverTree()
    for x in range(1, 200):
        got = find_parent(tree, oracle, x)
        want = brute_force_parent(tree, oracle, x)
        assert got == want
        tree.add(*got)


def test_halving_invariant():
    for seed in range(3):
        oracle = euclidean_oracle(random_cloud(150, 3, seed))
        tree = build(oracle)
        for x in range(1, tree.size):
            p = tree.parent[x]
            assert tree.parent_dist[x] <= tree.parent_dist[p] / 2.0


# --- tightening --------------------------------------------------------------

def chain_tree():
    # root at 0, then 2 away, then child 1 further; d(x2, x0) = 2.5 via matrix
    oracle = matrix_oracle([2.0, 2.5, 1.0])
    tree = build(oracle)
    assert tree.parent == [-1, 0, 1]
    return tree, oracle


def test_tighten_chain_reaches():
    tree, oracle = chain_tree()
    ct = tighten(tree, oracle)
    assert ct.order == [0, 1, 2]
    assert ct.times == [INF, 2.5, 1.0]


def test_tighten_single_point():
    oracle = line_oracle([0.0])
    ct = tighten(build(oracle), oracle)
    assert ct.order == [0]
    assert ct.times == [INF]


def test_tighten_star_orders_far_leaf_first():
    oracle = line_oracle([0.0, 3.0, -5.0])
    tree = build(oracle)
    assert tree.parent == [-1, 0, 0]
    ct = tighten(tree, oracle)
    assert ct.order == [0, 2, 1]
    assert ct.times == [INF, 5.0, 3.0]


def test_tighten_never_exceeds_a_priori_radius():
    for seed in range(5):
        oracle = euclidean_oracle(random_cloud(200, 2, seed))
        tree = build(oracle)
        ct = tighten(tree, oracle)
        pos = {orig: k for k, orig in enumerate(ct.order)}
        for x in range(1, tree.size):
            assert ct.times[pos[x]] <= tree.radius(x)


# --- projections and time lookup ----------------------------------------------

def test_project():
    ct = ContractionTree(order=[0, 1, 2, 3], parent=[-1, 0, 0, 1],
                         times=[INF, 3.0, 2.0, 1.0])
    assert ct.project(3, 1) == 1
    assert ct.project(2, 2) == 2
    for x in range(4):
        assert ct.project(x, 0) == 0


def test_n_of_t():
    ct = ContractionTree(order=list(range(5)), parent=[-1, 0, 1, 1, 0],
                         times=[INF, 5.0, 3.0, 3.0, 1.0])
    assert ct.n_of_t(4.0) == 1
    assert ct.n_of_t(0.0) == 4
    assert ct.n_of_t(3.0) == 3
    assert ct.n_of_t(INF) == 0


# --- invariants ---------------------------------------------------------------

@pytest.mark.parametrize("seed,n,dim", [(0, 300, 2), (1, 300, 3), (2, 500, 2)])
def test_density_and_contraction(seed, n, dim):
    oracle = euclidean_oracle(random_cloud(n, dim, seed))
    ct = tighten(build(oracle), oracle)
    assert density_violations(ct, oracle) == []
    assert contraction_violations(ct, oracle) == []


def test_contraction_helper_matches_literal_definition():
    """The optimized scan equals the quadratic all-(x, t) check."""
    oracle = euclidean_oracle(random_cloud(60, 2, 9))
    ct = tighten(build(oracle), oracle)
    assert contraction_violations(ct, oracle) == []
    for t in ct.times:
        if t == INF:
            continue
        n = ct.n_of_t(t)
        for x in range(ct.size):
            proj = ct.project(x, n)
            assert oracle.eval(ct.order[x], ct.order[proj]) <= t


def test_density_on_solenoid():
    pts = solenoid_sample(SolenoidParams(n=400, seed=3))
    oracle = euclidean_oracle(pts)
    ct = tighten(build(oracle), oracle)
    assert density_violations(ct, oracle) == []


# --- serialization --------------------------------------------------------------

def test_tree_roundtrip_bytes(tmp_path):
    oracle = euclidean_oracle(random_cloud(80, 2, 4))
    ct = tighten(build(oracle), oracle)
    p1, p2 = tmp_path / "a.tree", tmp_path / "b.tree"
    write_tree(p1, ct, config={"seed": 4})
    back = read_tree(p1)
    assert back == ct
    write_tree(p2, back, config={"seed": 4})
    assert p1.read_bytes() == p2.read_bytes()


def test_build_deterministic():
    oracle = euclidean_oracle(random_cloud(100, 2, 8))
    a = tighten(build(oracle), oracle)
    b = tighten(build(oracle), oracle)
    assert a == b


def test_read_tree_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.tree"
    bad.write_text("n 2\n0 -1 inf\n")
    with pytest.raises(InputError):
        read_tree(bad)
    bad.write_text("nonsense\n")
    with pytest.raises(InputError):
        read_tree(bad)
