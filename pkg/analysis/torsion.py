"""
Smith normal form and the torsion groups A_m, A_m° with their centralizer orbits
"""

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from analysis.weyl_group import SubgroupEnum, WeylElt, WeylGroup

logger = logging.getLogger(__name__)


class SmithNormalForm:
    """
    Smith normal form D = left @ M @ right over the integers

    Elimination with the smallest nonzero entry as pivot, Python integers throughout.

    Args:
        matrix: integer matrix (any shape)
    """

    def __init__(self, matrix):
        self.original = np.array(matrix, dtype=object)
        if self.original.ndim != 2:
            raise ValueError("Smith normal form needs a 2-d matrix")
        self.D = self.original.copy()
        self.left = np.array(np.eye(self.num_rows, dtype=np.int64), dtype=object)
        self.right = np.array(np.eye(self.num_columns, dtype=np.int64), dtype=object)
        self._reduce()

    @property
    def num_rows(self) -> int:
        return self.original.shape[0]

    @property
    def num_columns(self) -> int:
        return self.original.shape[1]

    def _reduce(self):
        for s in range(min(self.num_rows, self.num_columns)):
            while True:
                pivot = self._nonzero_min_abs(s)
                if pivot is None:
                    return
                self._swap_rows(s, pivot[0])
                self._swap_columns(s, pivot[1])
                p = self.D[s, s]

                clean = True
                for i in range(s + 1, self.num_rows):
                    if self.D[i, s] != 0:
                        self._add_row(i, s, -(self.D[i, s] // p))
                        clean = clean and self.D[i, s] == 0
                for j in range(s + 1, self.num_columns):
                    if self.D[s, j] != 0:
                        self._add_column(j, s, -(self.D[s, j] // p))
                        clean = clean and self.D[s, j] == 0
                if not clean:
                    continue

                row = self._non_divisible_row(s)
                if row is not None:
                    self._add_row(s, row, 1)
                    continue
                if self.D[s, s] < 0:
                    self.left[s] *= -1
                    self.D[s] *= -1
                break

    def _nonzero_min_abs(self, s) -> Optional[Tuple[int, int]]:
        best, index = None, None
        for i in range(s, self.num_rows):
            for j in range(s, self.num_columns):
                value = abs(self.D[i, j])
                if value and (best is None or value < best):
                    best, index = value, (i, j)
        return index

    def _non_divisible_row(self, s) -> Optional[int]:
        p = self.D[s, s]
        for i in range(s + 1, self.num_rows):
            for j in range(s + 1, self.num_columns):
                if self.D[i, j] % p:
                    return i
        return None

    def _swap_rows(self, a, b):
        if a != b:
            self.D[[a, b]] = self.D[[b, a]]
            self.left[[a, b]] = self.left[[b, a]]

    def _swap_columns(self, a, b):
        if a != b:
            self.D[:, [a, b]] = self.D[:, [b, a]]
            self.right[:, [a, b]] = self.right[:, [b, a]]

    def _add_row(self, target, source, k):
        """row_target += k * row_source"""
        self.D[target] = self.D[target] + k * self.D[source]
        self.left[target] = self.left[target] + k * self.left[source]

    def _add_column(self, target, source, k):
        self.D[:, target] = self.D[:, target] + k * self.D[:, source]
        self.right[:, target] = self.right[:, target] + k * self.right[:, source]

    def diagonal(self) -> Tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(min(self.num_rows, self.num_columns)))

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def _integer_array(matrix: sympy.Matrix) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in matrix.tolist()], dtype=object)


def snf(matrix) -> Tuple[int, ...]:
    """
    Diagonal of the Smith normal form

    Args:
        matrix: integer matrix

    Returns:
        diagonal entries e_1 | e_2 | ... (ones and zeros included)
    """
    return SmithNormalForm(matrix).diagonal()


class FinAbGroup:
    """Finite abelian group Z/e_1 x ... x Z/e_r presented as a lattice quotient"""

    def __init__(self, invariant_factors: Sequence[int], projection: np.ndarray, lift: np.ndarray):
        self.invariant_factors = tuple(int(e) for e in invariant_factors)
        self.projection = projection
        self.lift = lift

    @classmethod
    def cokernel(cls, matrix) -> "FinAbGroup":
        """
        Z^n / M Z^n for a square nonsingular integer matrix M

        Args:
            matrix: n x n integer matrix

        Returns:
            FinAbGroup with projection x -> (U x) mod e
        """
        form = SmithNormalForm(matrix)
        diagonal = form.diagonal()
        if form.num_rows != form.num_columns or any(d == 0 for d in diagonal):
            raise ValueError("Quotient is infinite: matrix is not square nonsingular")
        keep = [i for i, d in enumerate(diagonal) if d != 1]
        left_inverse = sympy.Matrix(form.left.tolist()).inv()
        lift_full = _integer_array(left_inverse)
        return cls(
            [diagonal[i] for i in keep],
            form.left[keep, :],
            lift_full[:, keep],
        )

    @property
    def order(self) -> int:
        result = 1
        for e in self.invariant_factors:
            result *= e
        return result

    def normalize(self, element) -> Tuple[int, ...]:
        return tuple(int(x) % e for x, e in zip(element, self.invariant_factors))

    def zero(self) -> Tuple[int, ...]:
        return tuple(0 for _ in self.invariant_factors)

    def add(self, x, y) -> Tuple[int, ...]:
        return self.normalize(a + b for a, b in zip(x, y))

    def project(self, vector) -> Tuple[int, ...]:
        return self.normalize(self.projection @ np.array(vector, dtype=object))

    def elements(self):
        return itertools.product(*(range(e) for e in self.invariant_factors))

    def is_chain(self) -> bool:
        return all(b % a == 0 for a, b in zip(self.invariant_factors, self.invariant_factors[1:]))

    def __repr__(self):
        body = " x ".join(f"Z/{e}" for e in self.invariant_factors) or "1"
        return f"<FinAbGroup {body}>"


class LatticeAction:
    """Automorphisms of a FinAbGroup induced by lattice automorphisms"""

    def __init__(self, group: FinAbGroup, lattice_matrices: Sequence[np.ndarray]):
        self.group = group
        self.lattice_matrices = [np.array(g, dtype=object) for g in lattice_matrices]
        self.generators = [group.projection @ g @ group.lift for g in self.lattice_matrices]

    def preserves(self, sublattice: np.ndarray) -> bool:
        """Each generator maps the sublattice (columns) into itself modulo the factors"""
        sub = np.array(sublattice, dtype=object)
        for g in self.lattice_matrices:
            image = self.group.projection @ g @ sub
            for row, e in zip(image, self.group.invariant_factors):
                if any(int(x) % e for x in row):
                    return False
        return True

    def act(self, generator_index: int, element) -> Tuple[int, ...]:
        return self.group.normalize(self.generators[generator_index] @ np.array(element, dtype=object))

    def orbits(self) -> List[List[Tuple[int, ...]]]:
        """Orbits by direct enumeration of all group elements"""
        seen = set()
        orbits = []
        for start in self.group.elements():
            start = tuple(start)
            if start in seen:
                continue
            orbit = [start]
            seen.add(start)
            queue = [start]
            while queue:
                x = queue.pop()
                for k in range(len(self.generators)):
                    y = self.act(k, x)
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
                        queue.append(y)
            orbits.append(orbit)
        return orbits


class TorsionAnalyzer:
    """A_m = X_0/(1-w)X_0 and A_m° = Q/(1-w)X_0 for elliptic elements of a Weyl group"""

    def __init__(self, weyl_group: WeylGroup):
        self.weyl_group = weyl_group
        self.datum = weyl_group.datum
        cartan = sympy.Matrix(self.datum.cartan.tolist())
        self._cartan_inverse = cartan.inv()

    def _one_minus(self, w: WeylElt) -> np.ndarray:
        if not self.weyl_group.is_elliptic(w):
            raise ValueError("Element is not elliptic: X_0/(1-w)X_0 is infinite")
        return np.eye(self.datum.rank, dtype=np.int64) - w.matrix

    def _to_root_coordinates(self, matrix: np.ndarray) -> np.ndarray:
        """C^-1 @ matrix, checked integral"""
        product = self._cartan_inverse * sympy.Matrix(matrix.tolist())
        if any(not x.is_integer for x in product):
            raise ValueError("Matrix image is not contained in the root lattice")
        return _integer_array(product)

    def a_m(self, w: WeylElt) -> FinAbGroup:
        """X_0/(1-w)X_0 in the fundamental-weight basis"""
        return FinAbGroup.cokernel(self._one_minus(w))

    def a_m_circ(self, w: WeylElt) -> FinAbGroup:
        """Q/(1-w)X_0 in simple-root coordinates"""
        return FinAbGroup.cokernel(self._to_root_coordinates(self._one_minus(w)))

    def root_lattice_matrix(self, w: WeylElt) -> np.ndarray:
        """Matrix of w on the root lattice, C^-1 W C"""
        return self._to_root_coordinates(w.matrix @ self.datum.cartan)

    def action_on_a_m_circ(self, w: WeylElt, centralizer: Optional[SubgroupEnum] = None) -> LatticeAction:
        group = self.a_m_circ(w)
        if centralizer is None:
            centralizer = self.weyl_group.centralizer(w)
        matrices = [self.root_lattice_matrix(g) for g in centralizer.generators]
        action = LatticeAction(group, matrices)
        if not action.preserves(self._to_root_coordinates(self._one_minus(w))):
            raise RuntimeError("Centralizer does not preserve (1-w)X_0")
        return action

    def orbit_decomposition(self, w: WeylElt, centralizer: Optional[SubgroupEnum] = None) -> List[int]:
        """
        Orbit sizes of Z_{W_0}(w) on A_m°

        Args:
            w: elliptic regular element
            centralizer: precomputed centralizer, computed when omitted

        Returns:
            sorted orbit sizes (the zero element is a singleton)
        """
        action = self.action_on_a_m_circ(w, centralizer)
        orbits = action.orbits()
        sizes = sorted(len(o) for o in orbits)
        logger.debug(f"{self.datum.label}: orbit sizes on A_m° = {sizes}")
        return sizes

    def spherical_factor_count(self, w: WeylElt, centralizer: Optional[SubgroupEnum] = None) -> int:
        """Number of orbits; counts spherical factors conditionally on |B_{x,1}| = |A_m°|"""
        return len(self.orbit_decomposition(w, centralizer))

    def summary(self, w: WeylElt) -> Dict:
        a = self.a_m(w)
        a_circ = self.a_m_circ(w)
        return {
            "a_m": list(a.invariant_factors),
            "a_m_order": a.order,
            "a_m_circ": list(a_circ.invariant_factors),
            "a_m_circ_order": a_circ.order,
        }
