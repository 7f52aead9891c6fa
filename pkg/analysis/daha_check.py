"""
Defining relations of the degenerate double affine Hecke algebra and exact module checks
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from analysis.root_data import RootDatum, build_root_datum

logger = logging.getLogger(__name__)

Weight = Tuple[Tuple[Fraction, ...], Fraction]


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and 'p/q' strings"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise ValueError(f"Float entry {value} is not exact; use a 'p/q' string")
    return Fraction(int(value))


def fraction_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    matrix = np.array([[to_fraction(x) for x in row] for row in rows], dtype=object)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def identity_matrix(dim: int) -> np.ndarray:
    return np.array([[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)], dtype=object)


def scalar_matrix(value, dim: int) -> np.ndarray:
    return identity_matrix(dim) * to_fraction(value)


def matrix_power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    result = identity_matrix(matrix.shape[0])
    for _ in range(exponent):
        result = result @ matrix
    return result


class AffinePresentation:
    """
    Affine Weyl group data acting on X_0 + Z delta

    A weight lambda = (mu, l) has mu in fundamental-weight coordinates. The pairing
    with the affine simple coroots is mu_i for i >= 1 and -mu . theta^vee for i = 0.
    """

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.n = datum.rank
        self.theta = np.array(datum.highest_root, dtype=np.int64)
        self.theta_weight = datum.to_weight(self.theta)
        self.theta_check = datum.coroot_coefficients(self.theta)
        self.coxeter = self._affine_coxeter_matrix()

    def _affine_coxeter_matrix(self) -> List[List[Optional[int]]]:
        C = self.datum.cartan
        # <a_0^vee, a_j> = -<theta^vee, a_j>, <a_j^vee, a_0> = -<a_j^vee, theta>
        from_zero = [-int(x) for x in self.theta_check @ C]
        to_zero = [-int(x) for x in self.theta_weight]
        size = self.n + 1
        matrix: List[List[Optional[int]]] = [[1] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                if i == j:
                    continue
                if i == 0 or j == 0:
                    other = j if i == 0 else i
                    product = from_zero[other - 1] * to_zero[other - 1]
                else:
                    product = int(C[i - 1, j - 1] * C[j - 1, i - 1])
                matrix[i][j] = {0: 2, 1: 3, 2: 4, 3: 6}.get(product)
        return matrix

    def pairing(self, weight: Weight, i: int) -> Fraction:
        """lambda . a_i^vee"""
        mu, _ = weight
        if i == 0:
            return -sum(Fraction(int(q)) * x for q, x in zip(self.theta_check, mu))
        return Fraction(mu[i - 1])

    def act(self, i: int, weight: Weight) -> Weight:
        """s_i lambda = lambda - (lambda . a_i^vee) alpha_i with alpha_0 = (-theta, 1)"""
        mu, level = weight
        p = self.pairing(weight, i)
        if i == 0:
            return tuple(x + p * int(t) for x, t in zip(mu, self.theta_weight)), level - p
        column = self.datum.cartan[:, i - 1]
        return tuple(x - p * int(a) for x, a in zip(mu, column)), level

    def basis(self) -> List[Tuple[str, Weight]]:
        zero = tuple(Fraction(0) for _ in range(self.n))
        result = []
        for j in range(self.n):
            mu = tuple(Fraction(int(j == k)) for k in range(self.n))
            result.append((f"o{j + 1}", (mu, Fraction(0))))
        result.append(("delta", (zero, Fraction(1))))
        return result

    def action_matrix(self, i: int) -> np.ndarray:
        """Matrix of s_i on X_0 + Z delta in the basis o_1..o_n, delta (columns are images)"""
        columns = []
        for _, weight in self.basis():
            mu, level = self.act(i, weight)
            columns.append(list(mu) + [level])
        return np.array(columns, dtype=object).T

    def self_consistency(self) -> Dict:
        """The s_i matrices are involutions satisfying the affine braid relations"""
        size = self.n + 1
        eye = identity_matrix(size)
        matrices = [self.action_matrix(i) for i in range(size)]
        failures = []
        for i in range(size):
            if not np.array_equal(matrices[i] @ matrices[i], eye):
                failures.append(f"s{i}^2")
            for j in range(i + 1, size):
                order = self.coxeter[i][j]
                if order is None:
                    continue
                if not np.array_equal(matrix_power(matrices[i] @ matrices[j], order), eye):
                    failures.append(f"(s{i} s{j})^{order}")
        return {"passed": not failures, "failures": failures}

    # ------------------------------------------------------------------ coweight side

    def rho_c(self, c: Fraction) -> Tuple[Tuple[Fraction, ...], Fraction]:
        """(c rho^vee, 1) in simple-coroot coordinates"""
        return tuple(c * x for x in self.datum.rho_check()), Fraction(1)

    def coweight_act(self, i: int, point: Tuple[Tuple[Fraction, ...], Fraction]):
        """
        Affine action on (x, t), x in simple-coroot coordinates

        s_i (i >= 1) reflects in a_i; s_0 sends (x, t) to (s_theta x + t theta^vee, t).
        """
        y, t = point
        C = self.datum.cartan
        if i == 0:
            theta_x = sum(Fraction(int(w)) * v for w, v in zip(self.theta_weight, y))
            return tuple(v + (t - theta_x) * int(q) for v, q in zip(y, self.theta_check)), t
        a_x = sum(Fraction(int(C[j, i - 1])) * y[j] for j in range(self.n))
        return tuple(v - a_x if j == i - 1 else v for j, v in enumerate(y)), t

    def coweight_word(self, word: Sequence[int], point):
        """Apply s_{i1} s_{i2} ... (rightmost letter first)"""
        for i in reversed(list(word)):
            point = self.coweight_act(i, point)
        return point

    @staticmethod
    def evaluate(point, weight: Weight) -> Fraction:
        """(x, t) . (mu, l) = x . mu + t l"""
        y, t = point
        mu, level = weight
        return sum(a * b for a, b in zip(y, mu)) + t * level


@dataclass
class ModuleData:
    """Finite-dimensional module given by matrices of the s_i and of xi on the basis weights"""

    type_label: str
    rank: int
    c: Fraction
    dim: int
    S: Dict[int, np.ndarray]
    Xi: Dict[str, np.ndarray]
    name: str = ""
    source: str = ""

    def xi(self, weight: Weight) -> np.ndarray:
        """xi_lambda by linearity in lambda"""
        mu, level = weight
        result = self.Xi["delta"] * level
        for j, coefficient in enumerate(mu):
            if coefficient:
                result = result + self.Xi[f"o{j + 1}"] * coefficient
        return result


class DahaChecker:
    """Checks every defining relation of the degenerate algebra on a module"""

    def __init__(self, presentation: AffinePresentation):
        self.presentation = presentation

    def _validate(self, module: ModuleData):
        n = self.presentation.n
        expected_s = set(range(n + 1))
        expected_xi = {name for name, _ in self.presentation.basis()}
        if set(module.S) != expected_s:
            raise ValueError(f"Module must give S for indices {sorted(expected_s)}, got {sorted(module.S)}")
        if set(module.Xi) != expected_xi:
            raise ValueError(f"Module must give Xi for {sorted(expected_xi)}, got {sorted(module.Xi)}")
        for matrix in list(module.S.values()) + list(module.Xi.values()):
            if matrix.shape != (module.dim, module.dim):
                raise ValueError(f"Matrix of shape {matrix.shape} in a module of dimension {module.dim}")

    def verify_module(self, module: ModuleData) -> Dict:
        """
        Check S_i^2, braid relations, commutation of xi, xi_delta = 1 and the cross relations

        Args:
            module: module data with exact entries

        Returns:
            dict with the per-relation results and the first failing relation
        """
        self._validate(module)
        presentation = self.presentation
        eye = identity_matrix(module.dim)
        size = presentation.n + 1
        results: List[Tuple[str, bool]] = []

        for i in range(size):
            results.append((f"S{i}^2 = 1", np.array_equal(module.S[i] @ module.S[i], eye)))
        for i in range(size):
            for j in range(i + 1, size):
                order = presentation.coxeter[i][j]
                if order is None:
                    continue
                product = matrix_power(module.S[i] @ module.S[j], order)
                results.append((f"(S{i} S{j})^{order} = 1", np.array_equal(product, eye)))

        names = sorted(module.Xi)
        for a_index, a in enumerate(names):
            for b in names[a_index + 1:]:
                commutator = module.Xi[a] @ module.Xi[b] - module.Xi[b] @ module.Xi[a]
                results.append((f"[Xi_{a}, Xi_{b}] = 0", not np.any(commutator)))
        results.append(("Xi_delta = 1", np.array_equal(module.Xi["delta"], eye)))

        for i in range(size):
            for name, weight in presentation.basis():
                image = presentation.act(i, weight)
                lhs = module.xi(weight) @ module.S[i] - module.S[i] @ module.xi(image)
                rhs = eye * (-module.c * presentation.pairing(weight, i))
                results.append((f"Xi_{name} S{i} - S{i} Xi_(s{i} {name}) = -c <{name}, a{i}^vee>",
                                np.array_equal(lhs, rhs)))

        failures = [relation for relation, passed in results if not passed]
        if failures:
            logger.info(f"Module '{module.name}' fails {len(failures)} relations, first: {failures[0]}")
        return {
            "passed": not failures,
            "checked": len(results),
            "first_failure": failures[0] if failures else None,
            "failures": failures,
        }


def _diagonal_from_weights(presentation: AffinePresentation, points) -> Dict[str, np.ndarray]:
    dim = len(points)
    xi = {}
    for name, weight in presentation.basis():
        matrix = identity_matrix(dim) * 0
        for r, point in enumerate(points):
            matrix[r, r] = presentation.evaluate(point, weight)
        xi[name] = matrix
    return xi


def one_dimensional_module(datum: RootDatum, c: Fraction, signs: Dict[int, int], point, name: str = "",
                           source: str = "") -> ModuleData:
    """Module with s_i acting by the given signs and xi acting by the weight of the point"""
    presentation = AffinePresentation(datum)
    S = {i: scalar_matrix(signs[i], 1) for i in range(datum.rank + 1)}
    return ModuleData(datum.type_label, datum.rank, Fraction(c), 1, S,
                      _diagonal_from_weights(presentation, [point]), name, source)


def trivial_type_weight(datum: RootDatum, c: Fraction):
    """(c rho^vee, 1): the weight of the module with every s_i acting by -1"""
    return AffinePresentation(datum).rho_c(Fraction(c))


def sign_type_weight(datum: RootDatum, c: Fraction):
    """(-c rho^vee, 1): the weight of the module with every s_i acting by +1"""
    return AffinePresentation(datum).rho_c(-Fraction(c))


def sign_type_module(datum: RootDatum, c: Fraction) -> ModuleData:
    signs = {i: 1 for i in range(datum.rank + 1)}
    return one_dimensional_module(datum, c, signs, sign_type_weight(datum, c),
                                  f"{datum.label} sign type c={c}", "all s_i act by +1, only at c = -1/h")


def trivial_type_module(datum: RootDatum, c: Fraction) -> ModuleData:
    signs = {i: -1 for i in range(datum.rank + 1)}
    return one_dimensional_module(datum, c, signs, trivial_type_weight(datum, c),
                                  f"{datum.label} trivial type c={c}", "all s_i act by -1")


def _g2_two_dimensional() -> ModuleData:
    datum = build_root_datum("G", 2)
    presentation = AffinePresentation(datum)
    c = Fraction(1, 3)
    rho = presentation.rho_c(c)
    points = [rho, presentation.coweight_word([0], rho)]
    S = {
        0: fraction_matrix([["1/2", "3/2"], ["1/2", "-1/2"]]),
        1: fraction_matrix([[-1, 0], [0, -1]]),
        2: fraction_matrix([[-1, 0], [0, 1]]),
    }
    return ModuleData("G", 2, c, 2, S, _diagonal_from_weights(presentation, points),
                      "G2 two-dimensional c=1/3", "weights rho_c and s0 rho_c")


def _g2_three_dimensional() -> ModuleData:
    datum = build_root_datum("G", 2)
    presentation = AffinePresentation(datum)
    c = Fraction(1, 2)
    rho = presentation.rho_c(c)
    points = [rho, presentation.coweight_word([0], rho), presentation.coweight_word([2, 0], rho)]
    S = {
        0: fraction_matrix([["1/3", 8, 0], ["1/9", "-1/3", 0], [0, 0, -1]]),
        1: fraction_matrix([[-1, 0, 0], [0, -1, 0], [0, 0, 1]]),
        2: fraction_matrix([[-1, 0, 0], [0, "1/2", 3], [0, "1/4", "-1/2"]]),
    }
    return ModuleData("G", 2, c, 3, S, _diagonal_from_weights(presentation, points),
                      "G2 three-dimensional c=1/2", "weights rho_c, s0 rho_c, s2 s0 rho_c")


def _c2_modules() -> List[ModuleData]:
    datum = build_root_datum("C", 2)
    presentation = AffinePresentation(datum)
    c = Fraction(1, 2)
    rho = presentation.rho_c(c)
    s0_plus = one_dimensional_module(datum, c, {0: 1, 1: -1, 2: -1}, rho,
                                     "C2 s0 -> +1 c=1/2", "weight rho_c, only s0 acts by +1")
    s2_plus = one_dimensional_module(datum, c, {0: -1, 1: -1, 2: 1}, presentation.coweight_word([2, 0], rho),
                                     "C2 s2 -> +1 c=1/2", "weight s2 s0 rho_c, only s2 acts by +1")
    return [s0_plus, s2_plus]


def builtin_modules() -> List[ModuleData]:
    """
    Catalog of modules with exact matrices

    Returns:
        list of ModuleData; every entry satisfies all relations
    """
    catalog: List[ModuleData] = []
    for type_label, rank in [("A", 1), ("A", 2), ("B", 3), ("C", 2), ("D", 4), ("G", 2), ("F", 4)]:
        datum = build_root_datum(type_label, rank)
        h = datum.coxeter_number
        catalog.append(trivial_type_module(datum, Fraction(1, h)))
        catalog.append(sign_type_module(datum, Fraction(-1, h)))
    catalog.extend(_c2_modules())
    catalog.append(_g2_two_dimensional())
    catalog.append(_g2_three_dimensional())
    return catalog


def perturb(module: ModuleData, rng: np.random.Generator) -> Tuple[ModuleData, str]:
    """Copy of the module with one matrix entry increased by 1"""
    keys = [("S", i) for i in sorted(module.S)] + [("Xi", name) for name in sorted(module.Xi)]
    kind, key = keys[int(rng.integers(len(keys)))]
    r, s = (int(x) for x in rng.integers(module.dim, size=2))
    S = {i: m.copy() for i, m in module.S.items()}
    Xi = {name: m.copy() for name, m in module.Xi.items()}
    target = S[key] if kind == "S" else Xi[key]
    target[r, s] = target[r, s] + 1
    return replace(module, S=S, Xi=Xi, name=f"{module.name} perturbed"), f"{kind}[{key}][{r},{s}]"


def verify_module(module: ModuleData) -> Dict:
    """Check a module against the presentation of its own root datum"""
    presentation = AffinePresentation(build_root_datum(module.type_label, module.rank))
    return DahaChecker(presentation).verify_module(module)
