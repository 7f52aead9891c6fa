import pytest

from analysis.affine_roots import (AffineRoot, AffineRootSystem, Slope, check_scaling, fourier_motzkin_feasible,
                                   parse_word)
from analysis.root_data import build_root_datum
from backend.golden.golden_store import GoldenStore


def system(type_label, rank, k, m):
    return AffineRootSystem(build_root_datum(type_label, rank), Slope(k, m))


@pytest.mark.parametrize("k,m", [(0, 2), (1, 1), (1, 0), (2, 4), (3, 6)])
def test_invalid_slopes(k, m):
    with pytest.raises(ValueError):
        Slope(k, m)


def test_slope_parsing():
    slope = Slope.parse("3/2")
    assert (slope.k, slope.m) == (3, 2)
    assert str(Slope(-1, 6)) == "-1/6"


def test_parse_word():
    assert parse_word("s0 s2 s1") == [0, 2, 1]
    assert parse_word("s0s2s1") == [0, 2, 1]
    assert parse_word("1") == []
    for bad in ("x", "s0 t1", "0 2"):
        with pytest.raises(ValueError):
            parse_word(bad)


def test_from_word_rejects_out_of_range_letters():
    with pytest.raises(ValueError):
        system("G", 2, 1, 2).from_word([3])


def test_delta_c_plus_g2_half():
    g2 = system("G", 2, 1, 2)
    assert set(g2.delta_c_plus) == {AffineRoot((-1, -1), 1), AffineRoot((-3, -1), 2)}
    assert g2.n_c == 2
    assert len(g2.frak_d_c) == 8


def test_delta_c_plus_c2_half():
    c2 = system("C", 2, 1, 2)
    assert c2.delta_c_plus == [AffineRoot((-1, -1), 1)]
    assert c2.frak_d_cw(c2.fundamental_alcove()) == [AffineRoot((2, 1), -1)]


@pytest.mark.parametrize("type_label,rank", [("G", 2), ("B", 3), ("E", 6), ("A", 4)])
def test_coxeter_slope_sets(type_label, rank):
    h = build_root_datum(type_label, rank).coxeter_number
    coxeter = system(type_label, rank, 1, h)
    assert coxeter.delta_c_plus == []
    simple = {AffineRoot(tuple(int(i == j) for j in range(rank)), 0) for i in range(rank)}
    theta = AffineRoot(tuple(-x for x in coxeter.datum.highest_root), 1)
    assert set(coxeter.frak_d_c) == simple | {theta}
    assert coxeter.frak_d_cw(coxeter.fundamental_alcove()) == []
    assert all(coxeter.in_wc(a) for a in coxeter.bfs(3).values())


def test_frak_d_c_membership_rule():
    g2 = system("G", 2, 1, 2)
    for alpha in g2.frak_d_c:
        height = g2.datum.height(alpha.a)
        assert (height - 1) % 2 == 0
        assert alpha.level == (1 - height) // 2


def test_fundamental_alcove_sizes_match_n_c():
    g2 = system("G", 2, 1, 2)
    assert set(g2.frak_d_cw(g2.fundamental_alcove())) == {AffineRoot((2, 1), -1), AffineRoot((3, 2), -2)}
    assert len(g2.frak_d_cw(g2.from_word([0, 2, 1]))) == 1


def test_wc_membership_c2():
    c2 = system("C", 2, 1, 2)
    assert c2.in_wc(c2.fundamental_alcove())
    assert c2.in_wc(c2.from_word([1]))
    assert not c2.in_wc(c2.from_word([0, 1]))


@pytest.mark.parametrize("type_label,rank,k,m,radius", [("G", 2, 1, 2, 6), ("C", 2, 1, 2, 6), ("G", 2, 2, 3, 6),
                                                        ("B", 3, 1, 2, 4)])
def test_alcove_centers_avoid_walls(type_label, rank, k, m, radius):
    affine = system(type_label, rank, k, m)
    for alcove in affine.bfs(radius).values():
        assert len(affine.sign_vector(alcove)) == len(affine.frak_d_c)


def test_g2_half_clans():
    g2 = system("G", 2, 1, 2)
    clans = g2.enumerate_clans(5)
    by_keys = {frozenset(a.key for a in clan["members"]): clan for clan in clans}
    for words in (["1", "s0", "s0 s2"], ["s0 s2 s1"], ["s0 s2 s1 s2"]):
        keys = frozenset(g2.from_word(parse_word(w)).key for w in words)
        assert keys in by_keys
        assert by_keys[keys]["bounded"]
    members = sum(len(clan["members"]) for clan in clans)
    assert members == len(g2.wc_alcoves(5))


def bounded_clan_keys(affine, radius):
    return {frozenset(a.key for a in clan["members"]) for clan in affine.enumerate_clans(radius) if clan["bounded"]}


def clan_keys(affine, partition):
    return {frozenset(affine.from_word(parse_word(w)).key for w in words) for words in partition}


@pytest.mark.parametrize("type_label,rank,m,radius,partition", [
    ("C", 2, 2, 4, [["s0"], ["1"], ["s2 s0"]]),
    ("G", 2, 3, 4, [["1", "s0"], ["s0 s2"]]),
])
def test_bounded_clans_are_exactly_the_partition(type_label, rank, m, radius, partition):
    affine = system(type_label, rank, 1, m)
    assert bounded_clan_keys(affine, radius) == clan_keys(affine, partition)


def test_commuting_letters_name_one_alcove():
    c2 = system("C", 2, 1, 2)
    assert c2.from_word([2, 0]).key == c2.from_word([0, 2]).key


def test_enumerate_clans_needs_positive_radius():
    with pytest.raises(ValueError):
        system("G", 2, 1, 2).enumerate_clans(0)


@pytest.mark.parametrize("type_label,rank,k,m,radius", [("G", 2, 1, 2, 4), ("C", 2, 1, 2, 4), ("G", 2, 1, 3, 4),
                                                        ("E", 6, 1, 9, 3)])
def test_inequality_on_finite_weyl_group(type_label, rank, k, m, radius):
    report = system(type_label, rank, k, m).check_335a(radius)
    assert report["passed"], report["counterexample"]
    assert report["fundamental_size"] == report["n_c"]


def elliptic_pairs():
    for record in GoldenStore().records("elliptic_numbers"):
        for m in record.expected.elliptic_numbers:
            yield record.type_label, record.rank, m


@pytest.mark.parametrize("type_label,rank,m", list(elliptic_pairs()))
def test_inequality_on_finite_weyl_group_for_every_elliptic_number(type_label, rank, m):
    report = system(type_label, rank, 1, m).check_335a(4)
    assert report["passed"], report["counterexample"]
    assert report["fundamental_size"] == report["n_c"]


def test_inequality_fails_off_w0_for_general_wc_alcoves():
    g2 = system("G", 2, 1, 2)
    alcove = g2.from_word([0, 2, 1])
    assert g2.in_wc(alcove)
    assert len(g2.frak_d_cw(alcove)) < g2.n_c
    report = g2.check_335a(4)
    assert report["passed"]
    assert report["wc_checked"] == len(g2.wc_alcoves(4))
    assert {"word": "s0 s2 s1", "size": 1} in report["wc_violations"]


def test_inequality_needs_positive_k():
    with pytest.raises(ValueError):
        system("G", 2, -1, 2).check_335a(3)


@pytest.mark.parametrize("type_label,rank,m", [("G", 2, 2), ("C", 2, 2), ("A", 2, 3)])
def test_negative_slope_dominant_chamber(type_label, rank, m):
    report = system(type_label, rank, -1, m).check_negative_slope_dominant(4)
    assert report["passed"]
    assert report["sign_vectors"] == 1


def test_dominant_check_needs_negative_k():
    with pytest.raises(ValueError):
        system("G", 2, 1, 2).check_negative_slope_dominant(3)


@pytest.mark.parametrize("type_label,rank,m,k,radius_base,radius_scaled", [("G", 2, 3, 2, 4, 12), ("C", 2, 2, 3, 4, 15)])
def test_scaling_of_bounded_clans(type_label, rank, m, k, radius_base, radius_scaled):
    report = check_scaling(build_root_datum(type_label, rank), m, k, radius_base, radius_scaled)
    assert report["passed"], report
    assert report["scaled"] == report["predicted"]


def test_scaling_reports_truncated_radius():
    report = check_scaling(build_root_datum("G", 2), 3, 2, 4, 8)
    assert not report["passed"]
    assert report["base"] == [1, 2]


def test_fourier_motzkin():
    assert fourier_motzkin_feasible([((1, 0), 1), ((0, 1), 1)], 2)
    assert not fourier_motzkin_feasible([((1, 0), 1), ((-1, 0), 0)], 2)
    assert not fourier_motzkin_feasible([((1, 1), 3), ((-1, 0), -1), ((0, -1), -1)], 2)
    assert fourier_motzkin_feasible([((1, 1), 2), ((-1, 0), -1), ((0, -1), -1)], 2)


def test_boundedness_of_clans():
    g2 = system("G", 2, 1, 2)
    fundamental = g2.sign_vector(g2.fundamental_alcove())
    assert g2.is_bounded(fundamental)
    assert not all(clan["bounded"] for clan in g2.enumerate_clans(5))
