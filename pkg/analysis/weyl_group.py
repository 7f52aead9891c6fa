"""
Weyl group elements, elliptic regular certification and centralizers
"""

import logging
from collections import Counter, deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import sympy

from analysis.root_data import RootDatum, build_root_datum, characteristic_polynomial, cyclotomic_multiplicity
from backend.config import Settings, settings as default_settings

logger = logging.getLogger(__name__)

# Representative words for elliptic regular classes that are not powers of a
# Coxeter element, Bourbaki digits read literally.
SEED_WORDS: Dict[str, List[Tuple[str, List[int], int]]] = {
    "F4": [("B4", [1, 2, 3, 2, 3, 4], 8)],
    "E6": [("E6(a1)", [1, 2, 3, 4, 2, 5, 4, 6], 9)],
    "E7": [("E7(a1)", [1, 2, 3, 4, 2, 5, 4, 6, 7], 14)],
    "E8": [
        ("E8(a1)", [1, 2, 3, 4, 2, 5, 4, 6, 7, 8], 24),
        ("E8(a2)", [1, 2, 3, 4, 2, 5, 4, 6, 5, 4, 7, 8], 20),
    ],
}

FAMILY_ORDER = {label: i for i, label in enumerate("ABCDEFG")}

_T = sympy.Symbol("t")


class BudgetExceededError(RuntimeError):
    """An enumeration ran past its configured budget"""


def exact_det(matrix: np.ndarray) -> int:
    """Determinant of an integer matrix in exact arithmetic"""
    return int(sympy.Matrix(np.asarray(matrix).tolist()).det())


class WeylElt:
    """Element of W_0 acting on the weight lattice, keyed by the images of the simple roots"""

    __slots__ = ("matrix", "key")

    def __init__(self, matrix: np.ndarray, key: bytes):
        self.matrix = matrix
        self.key = key

    @property
    def det(self) -> int:
        return exact_det(self.matrix)

    def __eq__(self, other):
        return isinstance(other, WeylElt) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<WeylElt {self.matrix.tolist()}>"


class SubgroupEnum:
    """Subgroup of W_0 given by generators, with its element keys when enumerable"""

    def __init__(self, generators: List[WeylElt], order: int,
                 elements: Optional[Dict[bytes, np.ndarray]] = None,
                 cartan_type: Optional[str] = None,
                 simple_roots: Optional[List[Tuple[int, ...]]] = None):
        self.generators = generators
        self.order = order
        self.elements = elements
        self.cartan_type = cartan_type
        self.simple_roots = simple_roots or []

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    def __contains__(self, key: bytes) -> bool:
        if self.elements is None:
            raise ValueError("Subgroup was not enumerated")
        return key in self.elements

    def __len__(self):
        return self.order

    def __repr__(self):
        kind = f" type={self.cartan_type}" if self.cartan_type is not None else ""
        return f"<SubgroupEnum order={self.order} gens={len(self.generators)}{kind}>"


class WeylGroup:
    """Finite Weyl group W_0 of a root datum"""

    def __init__(self, datum: RootDatum, settings: Optional[Settings] = None):
        self.datum = datum
        self.settings = settings or default_settings
        self.n = datum.rank
        self._identity = np.eye(self.n, dtype=np.int64)
        self.simple = [self.element(datum.simple_reflection_weight(i)) for i in range(1, self.n + 1)]
        self._charpoly_cache: Dict[Tuple, Tuple[int, ...]] = {}
        self.seed_reports: List[Dict] = []

    # ------------------------------------------------------------------ elements

    def key_of(self, matrix: np.ndarray) -> bytes:
        images = (matrix @ self.datum.cartan).T.tolist()
        try:
            indices = [self.datum.weight_index[tuple(row)] for row in images]
        except KeyError:
            raise ValueError("Matrix does not permute the roots") from None
        return np.array(indices, dtype=np.uint16).tobytes()

    def sign(self, matrix: np.ndarray) -> int:
        """det = (-1)^length, length counted as positive roots sent to negative ones"""
        images = (self.datum.pos_roots_weight @ np.asarray(matrix).T).tolist()
        inversions = sum(1 for row in images if self.datum.weight_index[tuple(row)] >= self.datum.num_positive)
        return -1 if inversions % 2 else 1

    def element(self, matrix: np.ndarray) -> WeylElt:
        matrix = np.asarray(matrix, dtype=np.int64)
        return WeylElt(matrix, self.key_of(matrix))

    def identity(self) -> WeylElt:
        return self.element(self._identity)

    def word_to_elt(self, word: Sequence[int]) -> WeylElt:
        """
        Product s_{i1} s_{i2} ... of simple reflections

        Args:
            word: simple reflection indices in 1..n

        Returns:
            the product as a WeylElt
        """
        matrix = self._identity.copy()
        for i in word:
            if not 1 <= int(i) <= self.n:
                raise ValueError(f"Word letter {i} outside 1..{self.n}")
            matrix = matrix @ self.simple[int(i) - 1].matrix
        return self.element(matrix)

    def multiply(self, x: WeylElt, y: WeylElt) -> WeylElt:
        return self.element(x.matrix @ y.matrix)

    def power(self, x: WeylElt, k: int) -> WeylElt:
        result = self._identity.copy()
        base = x.matrix
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return self.element(result)

    def inverse(self, x: WeylElt) -> WeylElt:
        return self.power(x, self.order(x) - 1)

    def conjugate(self, g: WeylElt, x: WeylElt) -> WeylElt:
        """g x g^-1"""
        return self.element(g.matrix @ x.matrix @ self.inverse(g).matrix)

    def reflection(self, root) -> WeylElt:
        return self.element(self.datum.reflection_weight(root))

    def is_central(self, x: WeylElt) -> bool:
        return all(np.array_equal(x.matrix @ s.matrix, s.matrix @ x.matrix) for s in self.simple)

    def minus_one(self) -> Optional[WeylElt]:
        """-1 as an element of W_0, when all degrees are even"""
        if all(d % 2 == 0 for d in self.datum.degrees):
            return self.element(-self._identity)
        return None

    def coxeter_word(self) -> List[int]:
        return list(range(1, self.n + 1))

    def coxeter_element(self) -> WeylElt:
        return self.word_to_elt(self.coxeter_word())

    def random_element(self, rng: np.random.Generator, length: Optional[int] = None) -> WeylElt:
        length = length or 2 * self.datum.num_positive + 10
        matrix = self._identity.copy()
        for i in rng.integers(0, self.n, size=length):
            matrix = matrix @ self.simple[int(i)].matrix
        return self.element(matrix)

    # ------------------------------------------------------------------ spectra

    def _powers(self, x: WeylElt, limit: int = 100000) -> List[np.ndarray]:
        powers = [self._identity]
        current = x.matrix
        while not np.array_equal(current, self._identity):
            powers.append(current)
            if len(powers) > limit:
                raise RuntimeError("Element order exceeds limit")
            current = current @ x.matrix
        return powers

    def order(self, x: WeylElt) -> int:
        return len(self._powers(x))

    def charpoly(self, x: WeylElt) -> Tuple[int, ...]:
        """Characteristic polynomial, cached by the traces of all powers (they determine it)"""
        powers = self._powers(x)
        signature = tuple(int(np.trace(p)) for p in powers)
        if signature not in self._charpoly_cache:
            self._charpoly_cache[signature] = characteristic_polynomial(x.matrix)
        return self._charpoly_cache[signature]

    def eigenspace_dim(self, x: WeylElt, m: int) -> int:
        """Multiplicity of Phi_m in the characteristic polynomial"""
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return cyclotomic_multiplicity(self.charpoly(x), m)

    def is_elliptic(self, x: WeylElt) -> bool:
        return cyclotomic_multiplicity(self.charpoly(x), 1) == 0

    def cyclotomic_kernel(self, x: WeylElt, m: int) -> List[sympy.Matrix]:
        """Rational basis of ker Phi_m(x), the sum of the primitive m-th eigenspaces"""
        coefficients = sympy.Poly(sympy.cyclotomic_poly(m, _T), _T).all_coeffs()
        value = sympy.zeros(self.n, self.n)
        w = sympy.Matrix(x.matrix.tolist())
        for c in coefficients:
            value = value * w + int(c) * sympy.eye(self.n)
        return value.nullspace()

    def has_regular_eigenvector(self, x: WeylElt, m: int) -> bool:
        """
        Exact regularity test for the eigenvalue zeta_m

        A root vanishing on the zeta_m eigenspace vanishes on all its Galois
        conjugates, so x has a zeta_m eigenvector off every reflecting hyperplane
        iff no reflection fixes ker Phi_m(x) pointwise.

        Args:
            x: element of W_0
            m: eigenvalue order

        Returns:
            True iff the kernel is nonzero and no reflection fixes it
        """
        kernel = self.cyclotomic_kernel(x, m)
        if not kernel:
            return False
        basis = sympy.Matrix.hstack(*kernel)
        identity = sympy.eye(self.n)
        for root in self.datum.pos_roots:
            reflection = sympy.Matrix(self.datum.reflection_weight(root).tolist())
            if (reflection - identity) * basis == sympy.zeros(self.n, basis.cols):
                return False
        return True

    def certify_elliptic_regular(self, x: WeylElt, m: int) -> bool:
        """
        Elliptic regular test: maximal eigenspace plus an exact regularity gate

        Args:
            x: element of W_0
            m: expected order

        Returns:
            True iff order(x) = m, no eigenvalue 1, dim of the zeta_m eigenspace
            is |I_m| and some zeta_m eigenvector lies on no reflecting hyperplane
        """
        if self.order(x) != m:
            return False
        if not self.is_elliptic(x):
            return False
        return self.certify_regular(x, m)

    def certify_regular(self, x: WeylElt, m: int) -> bool:
        if self.order(x) != m:
            return False
        if self.eigenspace_dim(x, m) != len(self.datum.i_m(m)):
            return False
        return self.has_regular_eigenvector(x, m)

    # ------------------------------------------------------------------ elliptic numbers

    def candidate_numbers(self, elliptic: bool = True) -> List[int]:
        """
        Orders allowed by the degree/codegree count (and the exponent condition when elliptic)

        Args:
            elliptic: also require that m divides no exponent

        Returns:
            sorted candidate list
        """
        degrees = self.datum.degrees
        divisors = sorted({m for d in degrees for m in range(2, d + 1) if d % m == 0})
        candidates = []
        for m in divisors:
            n_degrees = sum(1 for d in degrees if d % m == 0)
            n_codegrees = sum(1 for d in degrees if (d - 2) % m == 0)
            if n_degrees != n_codegrees:
                continue
            if elliptic and any((d - 1) % m == 0 for d in degrees):
                continue
            candidates.append(m)
        return candidates

    def seed_table(self) -> List[Tuple[str, List[int], Optional[int]]]:
        seeds: List[Tuple[str, List[int], Optional[int]]] = [
            ("Coxeter", self.coxeter_word(), self.datum.coxeter_number)
        ]
        seeds.extend(SEED_WORDS.get(self.datum.label, []))
        return seeds

    def check_seed_words(self) -> List[Dict]:
        """Certify every seed word at its own order"""
        reports = []
        for name, word, expected in self.seed_table():
            x = self.word_to_elt(word)
            order = self.order(x)
            certified = self.certify_elliptic_regular(x, order)
            if expected is not None and (order != expected or not certified):
                logger.warning(
                    f"Seed {name} word {''.join(map(str, word))} in {self.datum.label}: "
                    f"order {order}, certified={certified}, expected order {expected}"
                )
            reports.append({
                "class": name,
                "word": "".join(str(i) for i in word),
                "expected_order": expected,
                "order": order,
                "certified": certified,
            })
        return reports

    def elliptic_rep(self, m: int, seed: Optional[int] = None, regular_only: bool = False) -> WeylElt:
        """
        Certified elliptic regular element of order m

        Args:
            m: target order
            seed: seed of the random fallback search
            regular_only: certify regularity only (used for regular numbers)

        Returns:
            certified element
        """
        certify = self.certify_regular if regular_only else self.certify_elliptic_regular
        for name, word, expected in self.seed_table():
            x = self.word_to_elt(word)
            order = self.order(x)
            if expected is not None and order != expected:
                self.seed_reports.append({"class": name, "order": order, "expected": expected})
                logger.warning(f"Seed {name} has order {order}, expected {expected}; falling back")
                continue
            if order % m:
                continue
            candidate = self.power(x, order // m)
            if certify(candidate, m):
                logger.debug(f"{self.datum.label}: m={m} from seed {name}^{order // m}")
                return candidate

        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        for attempt in range(self.settings.random_search_budget):
            x = self.random_element(rng)
            order = self.order(x)
            if order % m:
                continue
            candidate = self.power(x, order // m)
            if certify(candidate, m):
                logger.info(f"{self.datum.label}: m={m} found by random search after {attempt + 1} draws")
                return candidate
        raise BudgetExceededError(
            f"No certified element of order {m} in {self.datum.label} after "
            f"{self.settings.random_search_budget} random draws"
        )

    def elliptic_numbers(self, seed: Optional[int] = None) -> Set[int]:
        """Constructive set EN of orders of elliptic regular elements"""
        found = set()
        for m in self.candidate_numbers(elliptic=True):
            try:
                self.elliptic_rep(m, seed=seed)
                found.add(m)
            except BudgetExceededError as e:
                logger.warning(f"Candidate m={m} not certified: {e}")
        return found

    def regular_numbers(self, seed: Optional[int] = None) -> Set[int]:
        found = set()
        for m in self.candidate_numbers(elliptic=False):
            try:
                self.elliptic_rep(m, seed=seed, regular_only=True)
                found.add(m)
            except BudgetExceededError as e:
                logger.warning(f"Regular candidate m={m} not certified: {e}")
        return found

    def exhaustive_elliptic_numbers(self) -> Set[int]:
        """
        Scan every element of W_0 for elliptic regular elements

        Returns:
            set of orders realised by certified elements
        """
        if self.datum.weyl_order > self.settings.exhaustive_limit:
            raise BudgetExceededError(
                f"|W| = {self.datum.weyl_order} exceeds exhaustive limit {self.settings.exhaustive_limit}"
            )
        elements = self.closure(self.simple, budget=self.datum.weyl_order)
        found: Set[int] = set()
        rejected: Set[Tuple] = set()
        zero = np.zeros((self.n, self.n), dtype=np.int64)
        for matrix in elements.values():
            x = WeylElt(matrix, b"")
            powers = self._powers(x)
            order = len(powers)
            if order == 1 or order in found:
                continue
            # no fixed vector iff the averaging projector vanishes
            if not np.array_equal(sum(powers, zero), zero):
                continue
            signature = tuple(int(np.trace(p)) for p in powers)
            if signature in rejected:
                continue
            if self.certify_elliptic_regular(x, order):
                found.add(order)
            else:
                rejected.add(signature)
        logger.info(f"{self.datum.label}: exhaustive scan over {len(elements)} elements gives EN={sorted(found)}")
        return found

    def elliptic_numbers_report(self, seed: Optional[int] = None) -> Dict:
        constructive = self.elliptic_numbers(seed=seed)
        report = {
            "type": self.datum.label,
            "elliptic_numbers": sorted(constructive),
            "exhaustive": None,
            "complete": None,
        }
        if self.datum.weyl_order <= self.settings.exhaustive_limit:
            scanned = self.exhaustive_elliptic_numbers()
            report["exhaustive"] = sorted(scanned)
            report["complete"] = scanned == constructive
            if scanned != constructive:
                logger.error(f"{self.datum.label}: constructive EN {sorted(constructive)} != scan {sorted(scanned)}")
        return report

    def exponent_fact(self, elliptic_numbers: Iterable[int]) -> Dict[int, List[int]]:
        """Exponents divisible by each elliptic number (all lists empty when the fact holds)"""
        exponents = self.datum.exponents()
        return {m: [e for e in exponents if e % m == 0] for m in sorted(elliptic_numbers)}

    # ------------------------------------------------------------------ subgroups

    def closure(self, generators: Sequence[WeylElt], budget: Optional[int] = None) -> Dict[bytes, np.ndarray]:
        """
        Enumerate the subgroup generated by the given elements

        Args:
            generators: generating elements
            budget: maximal number of elements before giving up

        Returns:
            dict key -> matrix
        """
        budget = budget or self.settings.closure_budget
        identity = self._identity
        elements = {self.key_of(identity): identity}
        frontier = [identity]
        gens = [g.matrix for g in generators]
        while frontier:
            next_frontier = []
            for x in frontier:
                for g in gens:
                    y = x @ g
                    ky = self.key_of(y)
                    if ky not in elements:
                        elements[ky] = y
                        next_frontier.append(y)
                        if len(elements) > budget:
                            raise BudgetExceededError(f"Subgroup closure exceeded {budget} elements")
            frontier = next_frontier
            if len(elements) > 20000:
                logger.debug(f"Closure size {len(elements)}")
        return elements

    def centralizer(self, x: WeylElt) -> SubgroupEnum:
        """
        Centralizer Z_{W_0}(x) of an elliptic regular element

        Args:
            x: elliptic regular element of order m

        Returns:
            SubgroupEnum of order prod_{i in I_m} d_i
        """
        m = self.order(x)
        oracle = 1
        for i in self.datum.i_m(m):
            oracle *= self.datum.degrees[i - 1]

        if self.is_central(x):
            return SubgroupEnum(list(self.simple), self.datum.weyl_order)

        generators = [x]
        minus = self.minus_one()
        if minus is not None and minus.key != x.key:
            generators.append(minus)
        elements = self.closure(generators)
        if len(elements) == oracle:
            return SubgroupEnum(generators, oracle, elements)

        class_budget = self.settings.class_budget
        expected_class = self.datum.weyl_order // oracle
        if expected_class > class_budget:
            raise BudgetExceededError(
                f"Conjugacy class of size {expected_class} in {self.datum.label} exceeds budget {class_budget}"
            )
        identity = self._identity
        transversal: Dict[bytes, Tuple[np.ndarray, np.ndarray]] = {x.key: (identity, identity)}
        queue = deque([x.matrix])
        while queue:
            current = queue.popleft()
            t, t_inv = transversal[self.key_of(current)]
            for s in self.simple:
                y = s.matrix @ current @ s.matrix
                ky = self.key_of(y)
                ts = s.matrix @ t
                ts_inv = t_inv @ s.matrix
                if ky not in transversal:
                    transversal[ky] = (ts, ts_inv)
                    queue.append(y)
                    if len(transversal) % 100000 == 0:
                        logger.debug(f"Class BFS: {len(transversal)} elements")
                    continue
                # Schreier generator
                g = transversal[ky][1] @ ts
                kg = self.key_of(g)
                if kg in elements:
                    continue
                generators.append(WeylElt(g, kg))
                elements = self.closure(generators)
                logger.debug(f"Centralizer now has order {len(elements)} (target {oracle})")
                if len(elements) == oracle:
                    return SubgroupEnum(generators, oracle, elements)
                if len(elements) > oracle:
                    raise RuntimeError(f"Centralizer order {len(elements)} exceeds degree product {oracle}")
        raise RuntimeError(
            f"Class BFS finished with centralizer order {len(elements)} instead of {oracle}"
        )

    def reflection_subgroup(self, roots: Iterable) -> SubgroupEnum:
        """
        Subgroup generated by reflections in the given roots, with its Cartan type

        Args:
            roots: roots in simple-root coordinates

        Returns:
            SubgroupEnum with the subsystem's simple roots and type label
        """
        datum = self.datum
        system: Set[Tuple[int, ...]] = set()
        for r in roots:
            key = tuple(int(v) for v in r)
            datum.index_of(key)
            system.add(key)
            system.add(tuple(-v for v in key))
        changed = True
        while changed:
            changed = False
            current = list(system)
            for a in current:
                for b in current:
                    image = tuple(int(v) for v in np.array(b) - datum.pairing(a, b) * np.array(a))
                    if image not in system:
                        system.add(image)
                        changed = True

        positive = [r for r in system if datum.root_index[r] < datum.num_positive]
        positive_set = set(positive)
        simple = []
        for r in positive:
            decomposable = any(
                tuple(a - b for a, b in zip(r, p)) in positive_set for p in positive if p != r
            )
            if not decomposable:
                simple.append(r)
        simple.sort(key=lambda r: (sum(r), r))
        cartan_type, order = cartan_type_of(datum, simple)
        generators = [self.reflection(r) for r in simple]
        elements = None
        if order <= self.settings.wc_budget:
            elements = self.closure(generators, budget=max(order, 1))
            if len(elements) != order:
                raise RuntimeError(f"Reflection subgroup of type {cartan_type} has {len(elements)} elements, expected {order}")
        return SubgroupEnum(generators, order, elements, cartan_type, simple)


def cartan_type_of(datum: RootDatum, simple: List[Tuple[int, ...]]) -> Tuple[str, int]:
    """
    Recognise the Cartan type of a root subsystem from its simple roots

    Args:
        datum: ambient root datum
        simple: simple roots of the subsystem

    Returns:
        (type string such as 'A2^2xA1', Weyl group order)
    """
    r = len(simple)
    if r == 0:
        return "", 1
    A = np.array([[datum.pairing(a, b) for b in simple] for a in simple], dtype=np.int64)
    unvisited = set(range(r))
    components = []
    while unvisited:
        start = unvisited.pop()
        component = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if j in unvisited and A[i, j] != 0:
                    unvisited.discard(j)
                    component.add(j)
                    stack.append(j)
        components.append(sorted(component))

    labels = []
    order = 1
    for component in components:
        family, rank = _recognize_component(datum, [simple[i] for i in component], A[np.ix_(component, component)])
        labels.append((family, rank))
        order *= build_root_datum(family, rank).weyl_order

    counts = Counter(labels)
    parts = []
    for (family, rank) in sorted(counts, key=lambda fr: (FAMILY_ORDER[fr[0]], -fr[1])):
        count = counts[(family, rank)]
        parts.append(f"{family}{rank}" + (f"^{count}" if count > 1 else ""))
    return "x".join(parts), order


def _recognize_component(datum: RootDatum, roots: List[Tuple[int, ...]], A: np.ndarray) -> Tuple[str, int]:
    r = len(roots)
    if r == 1:
        return "A", 1
    degree = [sum(1 for j in range(r) if j != i and A[i, j] != 0) for i in range(r)]
    bonds = {(i, j): int(A[i, j] * A[j, i]) for i in range(r) for j in range(i + 1, r) if A[i, j] != 0}
    if any(b == 3 for b in bonds.values()):
        return "G", 2
    double = [edge for edge, b in bonds.items() if b == 2]
    if double:
        i, j = double[0]
        if r == 2:
            return "C", 2
        if r == 4 and degree[i] == 2 and degree[j] == 2:
            return "F", 4
        end = i if degree[i] == 1 else j
        other = j if end == i else i
        end_short = datum.half_norm(roots[end]) < datum.half_norm(roots[other])
        return ("B" if end_short else "C"), r
    if max(degree) <= 2:
        return "A", r
    branch = degree.index(3)
    arms = []
    for start in range(r):
        if start == branch or A[branch, start] == 0:
            continue
        length, previous, node = 1, branch, start
        while True:
            nxt = [j for j in range(r) if j not in (previous, node) and A[node, j] != 0]
            if not nxt:
                break
            previous, node = node, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return "D", r
    if arms == [1, 2, 2]:
        return "E", 6
    if arms == [1, 2, 3]:
        return "E", 7
    if arms == [1, 2, 4]:
        return "E", 8
    raise ValueError(f"Unrecognised Dynkin diagram with arms {arms}")


def create_weyl_group(type_label: str, rank: int, settings: Optional[Settings] = None) -> WeylGroup:
    """Convenience constructor from a type label"""
    return WeylGroup(build_root_datum(type_label, rank), settings=settings)
