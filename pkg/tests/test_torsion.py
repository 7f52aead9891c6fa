import itertools

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from analysis.torsion import FinAbGroup, SmithNormalForm, TorsionAnalyzer, snf
from analysis.weyl_group import create_weyl_group, exact_det


def nontrivial(factors):
    return [abs(int(x)) for x in factors if abs(int(x)) != 1]


def random_unimodular(rng, n, steps=12):
    U = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        U[i] += int(rng.integers(-2, 3)) * U[j]
    return U


def test_snf_examples():
    assert snf(2 * np.eye(8, dtype=np.int64)) == (2,) * 8
    assert snf([[2, 1], [0, 3]]) == (1, 6)


def test_snf_decomposition_reproduces_diagonal():
    M = np.array([[4, 6, 2], [2, 8, 0], [6, 2, 10]])
    form = SmithNormalForm(M)
    product = form.left @ np.array(M, dtype=object) @ form.right
    assert all(product[i, j] == (form.D[i, j] if i == j else 0) for i in range(3) for j in range(3))


def test_snf_random_chains_and_determinant(rng):
    for _ in range(500):
        M = rng.integers(-6, 7, size=(8, 8))
        diagonal = snf(M)
        det = int(sympy.Matrix(M.tolist()).det())
        nonzero = [d for d in diagonal if d]
        assert all(d > 0 for d in nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        if det:
            assert int(np.prod(np.array(diagonal, dtype=object))) == abs(det)


def test_snf_unimodular_invariance(rng):
    for _ in range(100):
        M = rng.integers(-5, 6, size=(8, 8))
        U = random_unimodular(rng, 8, steps=8)
        V = random_unimodular(rng, 8, steps=8)
        assert snf(U @ M @ V) == snf(M)


def test_snf_matches_sympy(rng):
    for _ in range(40):
        M = rng.integers(-4, 5, size=(4, 4))
        if int(sympy.Matrix(M.tolist()).det()) == 0:
            continue
        oracle = invariant_factors(sympy.Matrix(M.tolist()), domain=ZZ)
        assert nontrivial(snf(M)) == nontrivial(oracle)


def test_cokernel_against_coset_count(rng):
    checked = 0
    while checked < 30:
        M = rng.integers(-3, 4, size=(3, 3))
        det = abs(int(sympy.Matrix(M.tolist()).det()))
        if det == 0 or det > 12:
            continue
        group = FinAbGroup.cokernel(M)
        assert group.order == det
        assert group.is_chain()
        box = itertools.product(range(det), repeat=3)
        assert len({group.project(x) for x in box}) == det
        for column in M.T:
            assert group.project(column) == group.zero()
        checked += 1


def test_cokernel_rejects_singular():
    with pytest.raises(ValueError):
        FinAbGroup.cokernel([[1, 2], [2, 4]])


@pytest.mark.parametrize("type_label,rank,m,a_m,a_m_circ", [
    ("G", 2, 2, (2, 2), (2, 2)),
    ("G", 2, 3, (3,), (3,)),
    ("C", 2, 2, (2, 2), (2,)),
    ("C", 4, 4, (2, 2), (2,)),
    ("E", 6, 3, (3, 3, 3), (3, 3)),
    ("A", 3, 4, (4,), ()),
])
def test_torsion_groups(type_label, rank, m, a_m, a_m_circ):
    group = create_weyl_group(type_label, rank)
    analyzer = TorsionAnalyzer(group)
    w = group.elliptic_rep(m)
    assert analyzer.a_m(w).invariant_factors == a_m
    assert analyzer.a_m_circ(w).invariant_factors == a_m_circ


def test_e8_m2_torsion():
    group = create_weyl_group("E", 8)
    analyzer = TorsionAnalyzer(group)
    w = group.elliptic_rep(2)
    assert analyzer.a_m(w).invariant_factors == (2,) * 8
    assert analyzer.a_m_circ(w).invariant_factors == (2,) * 8


@pytest.mark.parametrize("type_label,rank,m", [("A", 3, 4), ("D", 4, 2), ("E", 6, 3), ("C", 3, 2), ("B", 4, 8)])
def test_orders_match_determinants(type_label, rank, m):
    group = create_weyl_group(type_label, rank)
    analyzer = TorsionAnalyzer(group)
    w = group.elliptic_rep(m)
    a, a_circ = analyzer.a_m(w), analyzer.a_m_circ(w)
    det = abs(exact_det(np.eye(rank, dtype=np.int64) - w.matrix))
    assert a.order == det
    assert a.order == a_circ.order * group.datum.center_order


def test_class_invariance(rng):
    group = create_weyl_group("D", 4)
    analyzer = TorsionAnalyzer(group)
    w = group.elliptic_rep(2)
    for _ in range(5):
        g = group.random_element(rng)
        conjugate = group.conjugate(g, w)
        assert analyzer.a_m(conjugate).invariant_factors == analyzer.a_m(w).invariant_factors


def test_non_elliptic_rejected(g2):
    with pytest.raises(ValueError):
        TorsionAnalyzer(g2).a_m(g2.identity())


@pytest.mark.parametrize("type_label,rank,m,sizes", [("G", 2, 2, [1, 3]), ("G", 2, 3, [1, 2]), ("C", 2, 2, [1, 1])])
def test_orbit_decomposition(type_label, rank, m, sizes):
    group = create_weyl_group(type_label, rank)
    assert TorsionAnalyzer(group).orbit_decomposition(group.elliptic_rep(m)) == sizes


def brute_force_orbits_mod_2(datum):
    """Orbits of W on Q/2Q by simple reflections acting on root coordinates"""
    C = datum.cartan
    n = datum.rank
    seen, sizes = set(), []
    for start in itertools.product(range(2), repeat=n):
        if start in seen:
            continue
        orbit, queue = {start}, [start]
        while queue:
            v = queue.pop()
            for i in range(n):
                image = list(v)
                image[i] = (v[i] - sum(int(C[i, j]) * v[j] for j in range(n))) % 2
                image = tuple(image)
                if image not in orbit:
                    orbit.add(image)
                    queue.append(image)
        seen |= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def test_e8_m2_orbits_match_brute_force():
    group = create_weyl_group("E", 8)
    sizes = TorsionAnalyzer(group).orbit_decomposition(group.elliptic_rep(2))
    assert sizes == [1, 120, 135]
    assert sizes == brute_force_orbits_mod_2(group.datum)


def test_orbits_partition_group():
    group = create_weyl_group("F", 4)
    analyzer = TorsionAnalyzer(group)
    w = group.elliptic_rep(3)
    action = analyzer.action_on_a_m_circ(w)
    orbits = action.orbits()
    assert sum(len(o) for o in orbits) == analyzer.a_m_circ(w).order
    zero_orbit = [o for o in orbits if action.group.zero() in o][0]
    assert len(zero_orbit) == 1
