import random
from fractions import Fraction

import pytest

from conftest import connected_pair, exact_graph, float_graph

from geowl import (
    GroupSpec,
    apply_isometry,
    gen_kchain,
    gen_random_cloud,
    gen_triangles_vs_hexagon,
    geometric_isomorphism_oracle,
    random_isometry,
    run_gwl,
    run_igwl,
    run_igwl_k,
    run_wl,
)
from geowl.engines import HISTOGRAMS_DIFFER, PARTITION_STABLE, report_dict
from geowl.generators import mst_bottleneck_sq, with_cutoff_sq
from geowl.graph import ModeMismatchError


def shuffled_copy(g, seed):
    from geowl.graph import IsometryWitness, identity_witness

    rng = random.Random(seed)
    perm = list(range(g.n))
    rng.shuffle(perm)
    base = identity_witness(g)
    return apply_isometry(g, IsometryWitness(tuple(perm), base.matrix, base.translation))


# --- WL ---------------------------------------------------------------------


def test_wl_cannot_separate_triangles_from_hexagon():
    g1, g2, _ = gen_triangles_vs_hexagon()
    verdict, trace = run_wl(g1, g2)
    assert not verdict.distinguished
    assert verdict.stable
    assert trace.termination == PARTITION_STABLE


def test_wl_permuted_copy_indistinguishable():
    g, _, _ = gen_kchain(3)
    verdict, _ = run_wl(g, shuffled_copy(g, 5))
    assert not verdict.distinguished


def test_wl_size_and_degree_separations():
    path3 = exact_graph([(0, 0), (1, 0), (2, 0)], edges=[(0, 1), (1, 2)])
    star4 = exact_graph([(0, 0), (1, 0), (0, 1), (-1, 0)], edges=[(0, 1), (0, 2), (0, 3)])
    verdict, _ = run_wl(path3, star4)
    assert verdict.distinguished and verdict.iteration == 0  # node counts differ
    triangle = exact_graph([(0, 0), (1, 0), (0, 1)], edges=[(0, 1), (1, 2), (0, 2)])
    verdict, trace = run_wl(path3, triangle)
    assert verdict.distinguished and verdict.iteration == 1  # degree histogram
    assert trace.termination == HISTOGRAMS_DIFFER


# --- GWL --------------------------------------------------------------------


def test_gwl_kchain_threshold(o3):
    # separation happens at exactly floor(k/2) + 1 joint refinements
    for k in (2, 4, 5):
        g1, g2, _ = gen_kchain(k)
        t_star = k // 2 + 1
        lo, _ = run_gwl(g1, g2, o3, max_iters=max(1, t_star - 1))
        assert not lo.distinguished
        hi, trace = run_gwl(g1, g2, o3, max_iters=t_star)
        assert hi.distinguished and hi.iteration == t_star
        assert trace.rows[-1].class_count >= trace.rows[0].class_count


def test_gwl_isometric_copy_identical_histograms(so3):
    g, _, _ = gen_kchain(3)
    copy = apply_isometry(g, random_isometry(g.n, 3, seed=2, proper=True))
    verdict, trace = run_gwl(g, copy, so3)
    assert not verdict.distinguished
    for row in trace.rows:
        assert row.histogram_1 == row.histogram_2


def test_gwl_triangles_vs_hexagon_first_iteration(o2):
    g1, g2, _ = gen_triangles_vs_hexagon()
    verdict, _ = run_gwl(g1, g2, o2)
    assert verdict.distinguished and verdict.iteration == 1


def test_gwl_mode_mismatch(o2):
    with pytest.raises(ModeMismatchError):
        run_gwl(gen_random_cloud(3, 2, seed=0), gen_random_cloud(3, 2, seed=0, mode="float"), o2)


# --- IGWL -------------------------------------------------------------------


def test_igwl_never_separates_kchains(o3):
    for k in (2, 3, 5, 7):
        g1, g2, _ = gen_kchain(k)
        verdict, trace = run_igwl(g1, g2, o3, max_iters=2 * (k + 2))
        assert not verdict.distinguished
        assert trace.termination == PARTITION_STABLE


def test_igwl_separates_onehop_distinct_pair_in_one_iteration(o2):
    # single centre with two unit neighbours at 90 vs 180 degrees
    star90 = exact_graph([(0, 0), (1, 0), (0, 1)], edges=[(0, 1), (0, 2)])
    star180 = exact_graph([(0, 0), (1, 0), (-1, 0)], edges=[(0, 1), (0, 2)])
    verdict, _ = run_igwl(star90, star180, o2)
    assert verdict.distinguished and verdict.iteration == 1


def test_igwl_equals_gwl_on_fully_connected_pairs():
    # first-hop geometry is all geometry when every node sees every other
    for seed in range(25):
        rng = random.Random(seed)
        n, d = rng.randint(2, 6), rng.choice([2, 3])
        c1 = gen_random_cloud(n, d, seed=seed)
        if seed % 2:
            c2 = apply_isometry(c1, random_isometry(n, d, seed + 1, proper=True))
        else:
            c2 = gen_random_cloud(n, d, seed=seed + 999)
        full = [(i, j) for i in range(n) for j in range(i + 1, n)]
        from geowl import geometric_graph

        g1 = geometric_graph(d, c1.positions, full, c1.scalars, mode="exact")
        g2 = geometric_graph(d, c2.positions, full, c2.scalars, mode="exact")
        grp = GroupSpec("SO" if seed % 3 == 0 else "O", d)
        vi, _ = run_igwl(g1, g2, grp)
        vg, _ = run_gwl(g1, g2, grp)
        assert vi.distinguished == vg.distinguished, seed


# --- IGWL_(k) ---------------------------------------------------------------


def test_igwl_k_triangles_vs_hexagon(o2):
    g1, g2, _ = gen_triangles_vs_hexagon()
    v2, _ = run_igwl_k(g1, g2, o2, k=2)
    assert not v2.distinguished  # all edges unit length: distances say nothing
    v3, _ = run_igwl_k(g1, g2, o2, k=3)
    assert v3.distinguished  # 60 vs 120 degree angles


def test_igwl_k_requires_body_order_two(o2):
    g1, g2, _ = gen_triangles_vs_hexagon()
    with pytest.raises(ValueError):
        run_igwl_k(g1, g2, o2, k=1)


def test_igwl_hierarchy_on_random_pairs():
    # order k-1 separating a pair implies order k does too
    for seed in range(20):
        g1, g2 = connected_pair(seed, n_max=5)
        grp = GroupSpec("O", g1.dim)
        verdicts = {k: run_igwl_k(g1, g2, grp, k)[0].distinguished for k in (2, 3, 4)}
        assert not (verdicts[2] and not verdicts[3]), seed
        assert not (verdicts[3] and not verdicts[4]), seed


# --- cross-cutting properties ------------------------------------------------


def test_soundness_distinguished_implies_non_isomorphic():
    for seed in range(20):
        g1, g2 = connected_pair(seed, n_max=5)
        grp = GroupSpec("SO" if seed % 2 else "O", g1.dim)
        same, _ = geometric_isomorphism_oracle(g1, g2, grp)
        for runner in (
            lambda: run_gwl(g1, g2, grp),
            lambda: run_igwl(g1, g2, grp),
            lambda: run_igwl_k(g1, g2, grp, 3),
        ):
            verdict, _ = runner()
            if verdict.distinguished:
                assert not same


def test_igwl_distinguished_implies_gwl_distinguished():
    for seed in range(20):
        g1, g2 = connected_pair(seed, n_max=5)
        grp = GroupSpec("O", g1.dim)
        vi, _ = run_igwl(g1, g2, grp)
        vg, _ = run_gwl(g1, g2, grp)
        if vi.distinguished:
            assert vg.distinguished


def test_class_count_is_monotone():
    for seed in range(8):
        g1, g2 = connected_pair(seed, n_max=5)
        grp = GroupSpec("O", g1.dim)
        for runner in (
            lambda: run_wl(g1, g2),
            lambda: run_gwl(g1, g2, grp),
            lambda: run_igwl(g1, g2, grp),
            lambda: run_igwl_k(g1, g2, grp, 2),
        ):
            _, trace = runner()
            counts = [row.class_count for row in trace.rows]
            assert counts == sorted(counts)


def test_report_serialisation(o3):
    g1, g2, _ = gen_kchain(2)
    verdict, trace = run_gwl(g1, g2, o3)
    report = report_dict("gwl", o3, verdict, trace)
    assert report["test"] == "gwl"
    assert report["group"] == "O(3)"
    assert report["verdict"] == "distinguished"
    assert report["iteration"] == 2
    assert len(report["trace"]["rows"]) == 3
