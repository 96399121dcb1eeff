import random

import pytest

import oracles
from flipwidth.errors import GenerationError, LimitExceeded
from flipwidth.flips import (CutFlip, FlippedGraph, FlipSpec, Partition,
                             apply_flip, compose_flips, count_raw_flips,
                             cut_flip_ball, enumerate_definable_flips,
                             enumerate_k_flips, flip_masks, identity_flip,
                             s_types)
from flipwidth.graphs import (INF, Graph, OrderedGraph, complement, generate,
                              mask_of)


def spec_of(blocks, pairs):
    return FlipSpec(Partition(blocks), pairs)


def test_full_flip_is_complement(atlas4):
    for g in atlas4:
        spec = spec_of([0] * g.n, [(0, 0)])
        assert apply_flip(g, spec).adj == complement(g).adj


def test_isolating_flip():
    g = generate("cycle", 5)
    v = 0
    nmask = g.adj[v]
    blocks = []
    for u in range(5):
        if u == v:
            blocks.append(0)
        elif (nmask >> u) & 1:
            blocks.append(1)
        else:
            blocks.append(2)
    spec = spec_of(blocks, [(0, 1)])
    flipped = apply_flip(g, spec)
    assert flipped.degree(v) == 0
    # everything else untouched except edges at v
    for u in range(1, 5):
        for w in range(u + 1, 5):
            assert flipped.has_edge(u, w) == g.has_edge(u, w)


def test_identity_flip_is_identity(atlas4):
    for g in atlas4:
        assert apply_flip(g, identity_flip(g.n)).adj == g.adj


def test_flip_involution(atlas4):
    rng = random.Random(3)
    for g in atlas4:
        for _ in range(5):
            blocks = [rng.randrange(2) for _ in range(g.n)]
            part = Partition(blocks)
            pairs = [(i, j) for i in range(part.size) for j in range(i, part.size)
                     if rng.random() < 0.5]
            spec = FlipSpec(part, pairs)
            assert apply_flip(apply_flip(g, spec), spec).adj == g.adj


def test_flipped_adjacency_agrees_with_apply_flip():
    rng = random.Random(11)
    for _ in range(1000):
        n = rng.randint(2, 7)
        g = generate("random_gnp", n, 0.5, rng.randrange(10 ** 6))
        blocks = [rng.randrange(3) for _ in range(n)]
        part = Partition(blocks)
        pairs = [(i, j) for i in range(part.size) for j in range(i, part.size)
                 if rng.random() < 0.5]
        spec = FlipSpec(part, pairs)
        lazy = FlippedGraph(g, spec)
        dense = apply_flip(g, spec)
        u, v = rng.randrange(n), rng.randrange(n)
        assert lazy.adjacency(u, v) == dense.has_edge(u, v) if u != v else not lazy.adjacency(u, v)


def test_enumerate_k1_two_flips():
    g = generate("path", 3)
    flips = list(enumerate_k_flips(g, 1))
    graphs = {apply_flip(g, s).adj for s in flips}
    assert len(flips) == 2
    assert graphs == {g.adj, complement(g).adj}


def test_enumerate_identity_first(atlas4):
    for g in atlas4:
        first = next(iter(enumerate_k_flips(g, 2)))
        assert apply_flip(g, first).adj == g.adj


def test_enumerate_k3_reaches_all_3vertex_graphs():
    g = generate("cycle", 3)
    got = {apply_flip(g, s).adj for s in enumerate_k_flips(g, 3)}
    want = {oracles.graph_from_edges(3, e).adj for e in oracles.all_labeled_graphs(3)}
    assert got == want


def test_raw_flip_count_n4_k2():
    # S(4,1)*2^1 + S(4,2)*2^3 = 1*2 + 7*8 = 58, per the counting oracle
    expected = (oracles.stirling2(4, 1) * 2 + oracles.stirling2(4, 2) * 8)
    assert expected == 58
    assert count_raw_flips(4, 2) == 58
    raw = list(enumerate_k_flips(Graph(4), 2, dedup=False))
    assert len(raw) == 58


def test_enumerate_contains_complement(atlas4):
    for g in atlas4:
        graphs = {apply_flip(g, s).adj for s in enumerate_k_flips(g, 1)}
        assert complement(g).adj in graphs


def test_limit_exceeded():
    with pytest.raises(LimitExceeded, match="configured bound"):
        list(enumerate_k_flips(Graph(9), 3))


def test_sequential_flip_equivalence():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 6)
        g = generate("random_gnp", n, 0.5, rng.randrange(10 ** 6))
        specs = []
        for _ in range(2):
            blocks = [rng.randrange(3) for _ in range(n)]
            part = Partition(blocks)
            pairs = [(i, j) for i in range(part.size) for j in range(i, part.size)
                     if rng.random() < 0.5]
            specs.append(FlipSpec(part, pairs))
        combined = compose_flips(g, specs[0], specs[1])
        two_step = apply_flip(apply_flip(g, specs[0]), specs[1])
        assert apply_flip(g, combined).adj == two_step.adj


# ---------------------------------------------------------------------------
# S-types


def test_s_types_empty():
    g = generate("clique", 4)
    assert s_types(g, []).size == 1


def test_s_types_k4_single():
    g = generate("clique", 4)
    part = s_types(g, [0])
    # oracle: N(v) & {0} splits {0} from the rest
    keys = {}
    for v in range(4):
        keys.setdefault(1 if 0 in set(g.neighbors(v)) else 0, set()).add(v)
    assert part.size == 2
    assert set(part.block_masks()) == {mask_of(s) for s in keys.values()}


def test_s_types_p4():
    g = generate("path", 4)            # 0-1-2-3
    part = s_types(g, [1])
    masks = set(part.block_masks())
    assert masks == {mask_of({0, 2}), mask_of({1, 3})}


def test_s_types_bound(atlas4):
    for g in atlas4:
        for smask in range(1 << g.n):
            s = [v for v in range(g.n) if (smask >> v) & 1]
            assert s_types(g, s).size <= 2 ** len(s)


def test_s_types_singleton_split_ktt_bound():
    # K_{t,t}-free graphs: |P_S| <= |S|^t for t >= 3
    from flipwidth.params import least_excluded_biclique
    rng = random.Random(9)
    for _ in range(20):
        g = generate("random_gnp", 7, 0.4, rng.randrange(10 ** 6))
        t = least_excluded_biclique(g)
        if t < 3:
            continue
        for _ in range(5):
            smask = rng.randrange(1, 1 << g.n)
            s = [v for v in range(g.n) if (smask >> v) & 1]
            if len(s) < 2:
                continue     # the s^t arithmetic needs |S| >= 2
            part = s_types(g, s, split_s_singletons=True)
            assert part.size <= len(s) ** t


def test_definable_k0():
    g = generate("path", 4)
    flips = [apply_flip(g, spec).adj for s, spec in enumerate_definable_flips(g, 0)]
    assert set(flips) == {g.adj, complement(g).adj}


def test_definable_flips_are_2k_flips(atlas4):
    for g in atlas4:
        for s, spec in enumerate_definable_flips(g, 2):
            assert spec.partition.size <= 2 ** len(s)


def test_definable_subset_of_k_flips():
    # every k-definable flip appears among the 2^k-flips (n <= 6, k <= 2)
    for g in [generate("path", 5), generate("cycle", 6), generate("random_gnp", 6, 0.5, 3)]:
        khats = {apply_flip(g, s).adj for s in enumerate_k_flips(g, 4, max_n=6)}
        for s, spec in enumerate_definable_flips(g, 2):
            assert apply_flip(g, spec).adj in khats


def test_clique_plus_isolated_not_definable():
    # K_4 with 4 isolated vertices is a 2-flip of K_8 but not a 3-definable flip
    k8 = generate("clique", 8)
    target = Graph(8, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    blocks = [0] * 4 + [1] * 4
    spec = spec_of(blocks, [(1, 1), (0, 1)])
    assert apply_flip(k8, spec).adj == target.adj
    definable = {apply_flip(k8, s).adj for _, s in enumerate_definable_flips(k8, 3)}
    assert target.adj not in definable


# ---------------------------------------------------------------------------
# cut flips


def og_path(n):
    return OrderedGraph(generate("path", n))


def test_cut_flip_ball_no_cut():
    og = og_path(3)
    cf = CutFlip(spec_of([0, 0, 0], [(0, 0)]), [])   # E' irrelevant: one class
    ball, iso = cut_flip_ball(og, CutFlip(identity_flip(3), []), 0, 0)
    assert ball == {0, 1, 2}
    assert not iso


def test_cut_flip_full_cut_isolates():
    og = og_path(3)
    # remove all edges, cut everything: each vertex alone
    comp = spec_of([0, 0, 0], [(0, 0)])
    g2 = apply_flip(og.graph, comp)
    # build E' = empty via flipping all edges of the path: use partition per vertex
    blocks = [0, 1, 2]
    spec = spec_of(blocks, [(0, 1), (1, 2)])
    assert apply_flip(og.graph, spec).num_edges() == 0
    cf = CutFlip(spec, [0, 1, 2])
    for v in range(3):
        ball, iso = cut_flip_ball(og, cf, v, 5)
        assert ball == {v}
        assert iso


def test_cut_flip_ball_hand_bfs():
    # ordered path 0-1-2 with S={1}, E' = original edges, r=1:
    # the hand oracle gives weight-0 classes {0},{1},{2}; one weight-1 step
    og = og_path(3)
    cf = CutFlip(identity_flip(3), [1])
    ball, iso = cut_flip_ball(og, cf, 0, 1)
    assert ball == {0, 1}
    assert not iso


def test_cut_flip_zero_weight_runs():
    og = OrderedGraph(Graph(5))
    cf = CutFlip(identity_flip(5), [2])
    # classes: {0,1}, {2}, {3,4}
    ball, _ = cut_flip_ball(og, cf, 0, 0)
    assert ball == {0, 1}
    ball2, iso2 = cut_flip_ball(og, cf, 2, 0)
    assert ball2 == {2}
    assert iso2
