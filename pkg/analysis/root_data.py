"""
Root data for the simple types A-G with Bourbaki numbering
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

logger = logging.getLogger(__name__)

CARTAN_TYPES = ("A", "B", "C", "D", "E", "F", "G")

_T = sympy.Symbol("t")


def validate_type(type_label: str, rank: int) -> None:
    """Reject (type, rank) pairs that are not simple Cartan types"""
    if type_label not in CARTAN_TYPES:
        raise ValueError(f"Unknown Cartan type '{type_label}', expected one of {', '.join(CARTAN_TYPES)}")
    if not isinstance(rank, (int, np.integer)) or rank < 1:
        raise ValueError(f"Rank must be a positive integer, got {rank!r}")
    allowed = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if not allowed[type_label]:
        hints = {
            "B": "B needs rank >= 2",
            "C": "C needs rank >= 2",
            "D": "D needs rank >= 4",
            "E": "E exists only in ranks 6, 7, 8",
            "F": "F exists only in rank 4",
            "G": "G exists only in rank 2",
        }
        raise ValueError(f"Invalid rank {rank} for type {type_label}: {hints.get(type_label, '')}")


def cartan_matrix(type_label: str, rank: int) -> np.ndarray:
    """
    Cartan matrix with C[i][j] = <a_i^vee, a_j>, nodes in Bourbaki order

    Args:
        type_label: one of A..G
        rank: number of simple roots

    Returns:
        rank x rank integer matrix
    """
    validate_type(type_label, rank)
    n = rank
    C = 2 * np.eye(n, dtype=np.int64)

    def link(i: int, j: int, a_ij: int = -1, a_ji: int = -1) -> None:
        # 1-based Bourbaki labels
        C[i - 1, j - 1] = a_ij
        C[j - 1, i - 1] = a_ji

    if type_label in ("A", "B", "C"):
        for i in range(1, n):
            link(i, i + 1)
        if type_label == "B":
            # a_n short
            link(n - 1, n, -1, -2)
        elif type_label == "C":
            # a_n long
            link(n - 1, n, -2, -1)
    elif type_label == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(n - 2, n)
    elif type_label == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, n):
            link(i, i + 1)
    elif type_label == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    elif type_label == "G":
        # a_1 short, a_2 long
        link(1, 2, -3, -1)
    return C


def cyclotomic_multiplicity(coefficients: Tuple[int, ...], m: int) -> int:
    """
    Multiplicity of the m-th cyclotomic polynomial in an integer polynomial

    Args:
        coefficients: coefficients, leading first
        m: cyclotomic index

    Returns:
        largest e with Phi_m^e dividing the polynomial
    """
    return _cyclotomic_multiplicity_cached(tuple(int(c) for c in coefficients), int(m))


@lru_cache(maxsize=4096)
def _cyclotomic_multiplicity_cached(coefficients: Tuple[int, ...], m: int) -> int:
    poly = sympy.Poly(list(coefficients), _T)
    phi = sympy.Poly(sympy.cyclotomic_poly(m, _T), _T)
    count = 0
    while poly.degree() >= phi.degree():
        quotient, remainder = poly.div(phi)
        if not remainder.is_zero:
            break
        poly = quotient
        count += 1
    return count


def characteristic_polynomial(matrix: np.ndarray) -> Tuple[int, ...]:
    """Characteristic polynomial of an integer matrix, leading coefficient first"""
    poly = sympy.Matrix(matrix.tolist()).charpoly(_T)
    return tuple(int(c) for c in poly.all_coeffs())


def _euler_phi(d: int) -> int:
    return int(sympy.totient(d))


class RootDatum:
    """Immutable root datum of a simple simply connected group"""

    def __init__(self, type_label: str, rank: int):
        validate_type(type_label, rank)
        self.type_label = type_label
        self.rank = int(rank)
        self.cartan = cartan_matrix(type_label, rank)
        self.symmetrizer = self._compute_symmetrizer()
        # symmetric form on the root lattice, (a_i, a_j) = d_i C[i][j]
        self.form = np.diag(self.symmetrizer) @ self.cartan

        self.pos_roots = self._generate_positive_roots()
        n_pos = len(self.pos_roots)
        self.roots = np.vstack([self.pos_roots, -self.pos_roots])
        self.pos_roots_weight = self.pos_roots @ self.cartan.T
        self.roots_weight = self.roots @ self.cartan.T
        self.heights = self.roots.sum(axis=1)
        self.root_index: Dict[Tuple[int, ...], int] = {
            tuple(int(x) for x in r): i for i, r in enumerate(self.roots)
        }
        self.weight_index: Dict[Tuple[int, ...], int] = {
            tuple(int(x) for x in r): i for i, r in enumerate(self.roots_weight)
        }
        self.num_positive = n_pos

        top = int(np.argmax(self.pos_roots.sum(axis=1)))
        self.highest_root = tuple(int(x) for x in self.pos_roots[top])
        self.center_order = abs(int(sympy.Matrix(self.cartan.tolist()).det()))

        self.coxeter_number, self.degrees = self._degrees_from_coxeter_element()
        logger.debug(
            f"Built {self.label}: |pos roots|={n_pos}, h={self.coxeter_number}, degrees={self.degrees}"
        )

    # ------------------------------------------------------------------ construction

    def _compute_symmetrizer(self) -> np.ndarray:
        n = self.rank
        d: List[Optional[Fraction]] = [None] * n
        d[0] = Fraction(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and self.cartan[i, j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(int(self.cartan[i, j]), int(self.cartan[j, i]))
                    stack.append(j)
        denominators = 1
        for x in d:
            denominators = denominators * x.denominator // gcd(denominators, x.denominator)
        ints = [int(x * denominators) for x in d]
        g = 0
        for x in ints:
            g = gcd(g, x)
        return np.array([x // g for x in ints], dtype=np.int64)

    def _generate_positive_roots(self) -> np.ndarray:
        n = self.rank
        seen = set()
        frontier = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        seen.update(frontier)
        while frontier:
            next_frontier = []
            for root in frontier:
                vec = np.array(root, dtype=np.int64)
                pairings = self.cartan @ vec
                for i in range(n):
                    image = vec.copy()
                    image[i] -= pairings[i]
                    key = tuple(int(x) for x in image)
                    if key not in seen:
                        seen.add(key)
                        next_frontier.append(key)
            frontier = next_frontier
        positive = [r for r in seen if all(x >= 0 for x in r)]
        if len(positive) * 2 != len(seen):
            raise RuntimeError(f"Root closure for {self.type_label}{self.rank} is not symmetric")
        positive.sort(key=lambda r: (sum(r), tuple(-x for x in r)))
        return np.array(positive, dtype=np.int64)

    def _degrees_from_coxeter_element(self) -> Tuple[int, Tuple[int, ...]]:
        cox = self.coxeter_matrix_weight()
        h = self._matrix_order(cox)
        coefficients = characteristic_polynomial(cox)
        exponents: List[int] = []
        for d in sympy.divisors(h):
            mult = cyclotomic_multiplicity(coefficients, d)
            if mult == 0:
                continue
            for j in range(h):
                if h // gcd(h, j) == d:
                    exponents.extend([j] * mult)
        if len(exponents) != self.rank:
            raise RuntimeError(f"Coxeter spectrum of {self.label} has {len(exponents)} eigenvalues")
        return h, tuple(sorted(e + 1 for e in exponents))

    @staticmethod
    def _matrix_order(matrix: np.ndarray, limit: int = 1000) -> int:
        identity = np.eye(matrix.shape[0], dtype=matrix.dtype)
        power = matrix.copy()
        for k in range(1, limit + 1):
            if np.array_equal(power, identity):
                return k
            power = power @ matrix
        raise RuntimeError(f"Matrix order exceeds {limit}")

    # ------------------------------------------------------------------ basic data

    @property
    def label(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def weyl_order(self) -> int:
        """|W_0| as the product of the degrees"""
        order = 1
        for d in self.degrees:
            order *= d
        return order

    def exponents(self) -> List[int]:
        return [d - 1 for d in self.degrees]

    def as_vector(self, root) -> np.ndarray:
        vec = np.asarray(root, dtype=np.int64)
        if vec.shape != (self.rank,):
            raise ValueError(f"Root {root!r} does not have {self.rank} coordinates")
        return vec

    def index_of(self, root) -> int:
        key = tuple(int(x) for x in root)
        if key not in self.root_index:
            raise ValueError(f"{key} is not a root of {self.label}")
        return self.root_index[key]

    def height(self, root) -> int:
        """
        Height rho^vee . a of a root given in simple-root coordinates

        Args:
            root: coefficient vector in the simple-root basis

        Returns:
            sum of the coefficients
        """
        self.index_of(root)
        return int(sum(int(x) for x in root))

    def i_m(self, m: int) -> List[int]:
        """1-based positions i (degrees sorted) with m | d_i"""
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return [i + 1 for i, d in enumerate(self.degrees) if d % m == 0]

    def to_weight(self, root) -> np.ndarray:
        return self.cartan @ self.as_vector(root)

    def inner(self, a, b) -> int:
        return int(self.as_vector(a) @ self.form @ self.as_vector(b))

    def half_norm(self, root) -> int:
        """(a, a) / 2 in the normalization where the symmetrizer is primitive"""
        return self.inner(root, root) // 2

    def coroot_coefficients(self, root) -> np.ndarray:
        """Coefficients of a^vee in the simple-coroot basis"""
        vec = self.as_vector(root)
        scale = self.half_norm(vec)
        coeffs = vec * self.symmetrizer
        if np.any(coeffs % scale):
            raise RuntimeError(f"Coroot of {tuple(vec)} is not integral in {self.label}")
        return coeffs // scale

    def pairing(self, a, b) -> int:
        """<a^vee, b>"""
        return int(self.coroot_coefficients(a) @ self.to_weight(b))

    # ------------------------------------------------------------------ reflections

    def simple_reflection_weight(self, i: int) -> np.ndarray:
        """Matrix of s_i (1-based) on the weight lattice in the fundamental-weight basis"""
        if not 1 <= i <= self.rank:
            raise ValueError(f"Simple reflection index {i} outside 1..{self.rank}")
        S = np.eye(self.rank, dtype=np.int64)
        S[:, i - 1] -= self.cartan[:, i - 1]
        return S

    def reflection_weight(self, root) -> np.ndarray:
        """Matrix of s_a on the weight lattice, lambda -> lambda - <lambda, a^vee> a"""
        a_weight = self.to_weight(root)
        return np.eye(self.rank, dtype=np.int64) - np.outer(a_weight, self.coroot_coefficients(root))

    def coxeter_matrix_weight(self) -> np.ndarray:
        cox = np.eye(self.rank, dtype=np.int64)
        for i in range(1, self.rank + 1):
            cox = cox @ self.simple_reflection_weight(i)
        return cox

    def coxeter_exponent(self, i: int, j: int) -> int:
        """Order m_ij of s_i s_j read from the Cartan matrix (1-based)"""
        if i == j:
            return 1
        product = int(self.cartan[i - 1, j - 1] * self.cartan[j - 1, i - 1])
        return {0: 2, 1: 3, 2: 4, 3: 6}[product]

    def rho_check(self) -> List[Fraction]:
        """rho^vee in simple-coroot coordinates"""
        inverse_t = sympy.Matrix(self.cartan.T.tolist()).inv()
        ones = sympy.Matrix([1] * self.rank)
        return [Fraction(int(x.p), int(x.q)) for x in inverse_t * ones]

    # ------------------------------------------------------------------ slice grading

    def kostant_slice_grading(self, k: int, m: int) -> List[Dict]:
        """
        Grading of the Kostant slice directions f_i, [rho^vee, f_i] = (1 - d_i) f_i

        Args:
            k, m: slope c = k/m

        Returns:
            one dict per degree with the rho^vee weight and whether f_i lies in degree c
        """
        if m < 1 or gcd(k, m) != 1:
            raise ValueError(f"Slope {k}/{m} must have m >= 1 and gcd(k, m) = 1")
        return [
            {"index": i + 1, "degree": d, "rho_weight": 1 - d, "in_degree_c": d % m == 0}
            for i, d in enumerate(self.degrees)
        ]

    def __repr__(self):
        return f"<RootDatum {self.label} h={self.coxeter_number} degrees={self.degrees}>"


@lru_cache(maxsize=64)
def build_root_datum(type_label: str, rank: int) -> RootDatum:
    """
    Construct (and cache) the root datum of a simple type

    Args:
        type_label: one of A..G
        rank: rank of the type

    Returns:
        RootDatum instance
    """
    return RootDatum(type_label, int(rank))


def parse_root_string(datum: RootDatum, text: str) -> Tuple[int, ...]:
    """Parse '3a1+a2' or '-a1-a2' style root notation into simple-root coordinates"""
    coeffs = [0] * datum.rank
    cleaned = text.replace(" ", "").replace("-", "+-")
    for term in filter(None, cleaned.split("+")):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        if "a" not in term:
            raise ValueError(f"Cannot parse root term '{term}' in '{text}'")
        factor, index = term.split("a")
        coeffs[int(index) - 1] += sign * (int(factor) if factor else 1)
    root = tuple(coeffs)
    datum.index_of(root)
    return root


def format_root(root) -> str:
    """Inverse of parse_root_string"""
    parts = []
    for i, x in enumerate(root, start=1):
        x = int(x)
        if x == 0:
            continue
        coefficient = "" if abs(x) == 1 else str(abs(x))
        sign = "-" if x < 0 else "+"
        parts.append(f"{sign}{coefficient}a{i}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text
