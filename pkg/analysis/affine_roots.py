"""
Affine roots of slope c, alcoves of the affine Weyl group and their clans
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from analysis.root_data import RootDatum, format_root

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Slope:
    """c = k/m with m > 1 and gcd(k, m) = 1"""

    k: int
    m: int

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("Slope numerator k must be nonzero")
        if self.m <= 1:
            raise ValueError(f"Slope denominator m must be > 1, got {self.m}")
        if gcd(self.k, self.m) != 1:
            raise ValueError(f"Slope {self.k}/{self.m} is not reduced")

    @property
    def value(self) -> Fraction:
        return Fraction(self.k, self.m)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        k, m = text.split("/")
        return cls(int(k), int(m))

    def __str__(self):
        return f"{self.k}/{self.m}"


@dataclass(frozen=True)
class AffineRoot:
    """Affine function x -> a.x + level, a a finite root in simple-root coordinates"""

    a: Tuple[int, ...]
    level: int

    def scaled_value(self, center_scaled: Sequence[int], h: int) -> int:
        """h * (a.x + level) at x = center_scaled / h"""
        return int(sum(ai * xi for ai, xi in zip(self.a, center_scaled))) + h * self.level

    def is_positive(self) -> bool:
        return self.level > 0 or (self.level == 0 and all(x >= 0 for x in self.a))

    def __str__(self):
        return f"({format_root(self.a)}, {self.level})"


@dataclass(eq=False)
class Alcove:
    """Alcove g(A_0) of an affine Weyl element g: x -> linear @ x + translation (pairing coordinates)"""

    linear: np.ndarray
    translation: np.ndarray
    word: Tuple[int, ...] = ()
    center_scaled: Tuple[int, ...] = field(default=())
    h: int = 1

    @property
    def center(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(x, self.h) for x in self.center_scaled)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def key(self) -> Tuple[int, ...]:
        return self.center_scaled

    def word_string(self) -> str:
        return format_word(self.word)


def format_word(word: Sequence[int]) -> str:
    return " ".join(f"s{i}" for i in word) if word else "1"


def parse_word(text: str) -> List[int]:
    """'s0 s2 s1', 's0s2s1' or '1' -> [0, 2, 1]"""
    text = text.strip()
    if text in ("", "1", "e"):
        return []
    letters = re.findall(r"s(\d+)", text)
    if not letters or "".join(f"s{x}" for x in letters) != text.replace(" ", ""):
        raise ValueError(f"Cannot parse affine word '{text}'")
    return [int(x) for x in letters]


def fourier_motzkin_feasible(rows: Sequence[Tuple[Sequence[int], int]], dimension: int) -> bool:
    """
    Decide whether {x : a.x >= b for all rows} is nonempty, by exact elimination

    Args:
        rows: (a, b) pairs with integer entries
        dimension: number of variables

    Returns:
        True when the system has a rational solution
    """
    system: Dict[Tuple[int, ...], Fraction] = {}

    def insert(a, b, target):
        a = tuple(int(x) for x in a)
        g = 0
        for x in a:
            g = gcd(g, x)
        if g:
            a = tuple(x // g for x in a)
            b = Fraction(b) / g
        else:
            b = Fraction(b)
        # parallel rows: keep the tightest bound
        if a not in target or b > target[a]:
            target[a] = b

    for a, b in rows:
        insert(a, b, system)

    remaining = list(range(dimension))
    while remaining:
        if any(all(x == 0 for x in a) and b > 0 for a, b in system.items()):
            return False

        def cost(j):
            pos = sum(1 for a in system if a[j] > 0)
            neg = sum(1 for a in system if a[j] < 0)
            return pos * neg - pos - neg

        j = min(remaining, key=cost)
        remaining.remove(j)
        positive = [(a, b) for a, b in system.items() if a[j] > 0]
        negative = [(a, b) for a, b in system.items() if a[j] < 0]
        reduced: Dict[Tuple[int, ...], Fraction] = {}
        for a, b in system.items():
            if a[j] == 0:
                insert(a, b, reduced)
        for ap, bp in positive:
            for an, bn in negative:
                lam, mu = -an[j], ap[j]
                combined = tuple(lam * x + mu * y for x, y in zip(ap, an))
                insert(combined, lam * bp + mu * bn, reduced)
        system = reduced
        logger.debug(f"Fourier-Motzkin: eliminated x{j}, {len(system)} rows remain")
    return all(b <= 0 for b in system.values())


class AffineRootSystem:
    """Affine roots, alcoves and clans attached to a slope c = k/m"""

    def __init__(self, datum: RootDatum, slope: Slope):
        self.datum = datum
        self.slope = slope
        self.n = datum.rank
        self.h = datum.coxeter_number
        C = datum.cartan
        theta = np.array(datum.highest_root, dtype=np.int64)
        theta_check_pairing = datum.coroot_coefficients(theta) @ C

        self.reflections: List[Tuple[np.ndarray, np.ndarray]] = []
        # s_0 = reflection in theta.x = 1
        self.reflections.append((
            np.eye(self.n, dtype=np.int64) - np.outer(theta_check_pairing, theta),
            theta_check_pairing.astype(np.int64),
        ))
        for i in range(self.n):
            unit = np.zeros(self.n, dtype=np.int64)
            unit[i] = 1
            self.reflections.append((np.eye(self.n, dtype=np.int64) - np.outer(C[i, :], unit), np.zeros(self.n, dtype=np.int64)))

        self.delta_c_plus = self._delta_c_plus()
        self.frak_d_c = self._frak_d_c()
        self.n_c = len(self.delta_c_plus)
        self._boundedness_cache: Dict[Tuple[int, ...], bool] = {}

    # ------------------------------------------------------------------ affine root sets

    def _delta_c_plus(self) -> List[AffineRoot]:
        k, m = self.slope.k, self.slope.m
        result = []
        for root, height in zip(self.datum.roots, self.datum.heights):
            height = int(height)
            if height % m:
                continue
            alpha = AffineRoot(tuple(int(x) for x in root), -k * height // m)
            if alpha.is_positive():
                result.append(alpha)
        return result

    def _frak_d_c(self) -> List[AffineRoot]:
        k, m = self.slope.k, self.slope.m
        result = []
        for root, height in zip(self.datum.roots, self.datum.heights):
            height = int(height)
            if (height - 1) % m:
                continue
            result.append(AffineRoot(tuple(int(x) for x in root), k * (1 - height) // m))
        return result

    # ------------------------------------------------------------------ alcoves

    def fundamental_alcove(self) -> Alcove:
        return self._make_alcove(np.eye(self.n, dtype=np.int64), np.zeros(self.n, dtype=np.int64), ())

    def _make_alcove(self, linear: np.ndarray, translation: np.ndarray, word: Tuple[int, ...]) -> Alcove:
        center = linear @ np.ones(self.n, dtype=np.int64) + self.h * translation
        return Alcove(linear, translation, word, tuple(int(x) for x in center), self.h)

    def extend(self, alcove: Alcove, i: int) -> Alcove:
        """Alcove of g s_i, adjacent to the alcove of g"""
        A, t = self.reflections[i]
        return self._make_alcove(alcove.linear @ A, alcove.linear @ t + alcove.translation, alcove.word + (i,))

    def from_word(self, word: Sequence[int]) -> Alcove:
        alcove = self.fundamental_alcove()
        for i in word:
            if not 0 <= int(i) <= self.n:
                raise ValueError(f"Affine reflection index {i} outside 0..{self.n}")
            alcove = self.extend(alcove, int(i))
        return alcove

    def sign(self, alpha: AffineRoot, alcove: Alcove) -> int:
        value = alpha.scaled_value(alcove.center_scaled, self.h)
        if value == 0:
            raise RuntimeError(f"Alcove center lies on the wall of {alpha}")
        return 1 if value > 0 else -1

    def sign_vector(self, alcove: Alcove) -> Tuple[int, ...]:
        return tuple(self.sign(alpha, alcove) for alpha in self.frak_d_c)

    def in_wc(self, alcove: Alcove) -> bool:
        """Positive on every element of Delta_c^+"""
        return all(self.sign(beta, alcove) > 0 for beta in self.delta_c_plus)

    def frak_d_cw(self, alcove: Alcove) -> List[AffineRoot]:
        """Elements of D_c negative on the alcove"""
        return [alpha for alpha in self.frak_d_c if self.sign(alpha, alcove) < 0]

    def bfs(self, radius: int, keep=None, generators: Optional[Sequence[int]] = None) -> Dict[Tuple[int, ...], Alcove]:
        """
        Alcoves reachable by galleries of length <= radius

        Args:
            radius: maximal word length
            keep: predicate restricting which alcoves are kept and expanded
            generators: affine reflection indices used (default 0..n)

        Returns:
            dict center key -> Alcove with a reduced word
        """
        generators = list(range(self.n + 1)) if generators is None else list(generators)
        start = self.fundamental_alcove()
        found = {start.key: start}
        frontier = [start]
        for depth in range(radius):
            next_frontier = []
            for alcove in frontier:
                for i in generators:
                    neighbor = self.extend(alcove, i)
                    if neighbor.key in found:
                        continue
                    if keep is not None and not keep(neighbor):
                        continue
                    found[neighbor.key] = neighbor
                    next_frontier.append(neighbor)
            frontier = next_frontier
            logger.debug(f"Alcove BFS depth {depth + 1}: {len(found)} alcoves")
        return found

    def wc_alcoves(self, radius: int) -> List[Alcove]:
        alcoves = self.bfs(radius, keep=self.in_wc)
        return sorted(alcoves.values(), key=lambda a: (a.length, a.word))

    # ------------------------------------------------------------------ clans

    def is_bounded(self, signs: Tuple[int, ...]) -> bool:
        """
        Exact boundedness of the clan region {sign vector = signs} inside W^c

        Args:
            signs: sign vector over D_c

        Returns:
            True when the recession cone of the region is {0}
        """
        if signs in self._boundedness_cache:
            return self._boundedness_cache[signs]
        cone = [(tuple(s * x for x in alpha.a), 0) for s, alpha in zip(signs, self.frak_d_c)]
        cone += [(beta.a, 0) for beta in self.delta_c_plus]
        bounded = True
        for i in range(self.n):
            for direction in (1, -1):
                unit = tuple(direction if j == i else 0 for j in range(self.n))
                if fourier_motzkin_feasible(cone + [(unit, 1)], self.n):
                    bounded = False
                    break
            if not bounded:
                break
        self._boundedness_cache[signs] = bounded
        return bounded

    def enumerate_clans(self, radius: int) -> List[Dict]:
        """
        Partition the W^c alcoves within the radius by sign vector

        Args:
            radius: maximal word length

        Returns:
            list of clans (sign vector, members, bounded flag, D_{c,w}), ordered by first member
        """
        if radius < 1:
            raise ValueError("Radius must be >= 1")
        clans: Dict[Tuple[int, ...], List[Alcove]] = {}
        for alcove in self.wc_alcoves(radius):
            clans.setdefault(self.sign_vector(alcove), []).append(alcove)
        result = []
        for signs, members in clans.items():
            result.append({
                "sign_vector": signs,
                "members": members,
                "words": [a.word_string() for a in members],
                "bounded": self.is_bounded(signs),
                "frak_d": self.frak_d_cw(members[0]),
                "touches_frontier": any(a.length == radius for a in members),
            })
        result.sort(key=lambda clan: (clan["members"][0].length, clan["members"][0].word))
        logger.info(f"{self.datum.label} c={self.slope}: {len(result)} clans within radius {radius}")
        return result

    # ------------------------------------------------------------------ checks

    def check_335a(self, radius: int) -> Dict:
        """
        |D_{c,w}| >= n_c for w in W_0 with equality only at w = 1

        Args:
            radius: word length bound on w

        Returns:
            report with pass flag and the first counterexample
        """
        if self.slope.k <= 0:
            raise ValueError("The inequality is stated for k > 0")
        alcoves = self.bfs(radius, generators=range(1, self.n + 1))
        counterexample = None
        for alcove in sorted(alcoves.values(), key=lambda a: (a.length, a.word)):
            size = len(self.frak_d_cw(alcove))
            identity = alcove.length == 0
            if size < self.n_c or (size == self.n_c) != identity:
                counterexample = {"word": alcove.word_string(), "size": size}
                break
        # reported only: the inequality is not expected off W_0
        wc_alcoves = self.wc_alcoves(radius)
        wc_violations = []
        for alcove in wc_alcoves:
            size = len(self.frak_d_cw(alcove))
            if alcove.length > 0 and size <= self.n_c:
                wc_violations.append({"word": alcove.word_string(), "size": size})
        return {
            "passed": counterexample is None,
            "n_c": self.n_c,
            "checked": len(alcoves),
            "fundamental_size": len(self.frak_d_cw(self.fundamental_alcove())),
            "counterexample": counterexample,
            "wc_checked": len(wc_alcoves),
            "wc_violations": wc_violations,
        }

    def check_negative_slope_dominant(self, radius: int) -> Dict:
        """For k < 0 the dominant alcoves lie in W^c with one common sign vector"""
        if self.slope.k >= 0:
            raise ValueError("Dominant-chamber check needs k < 0")
        dominant = self.bfs(radius, keep=lambda a: all(x > 0 for x in a.center_scaled))
        signs = {self.sign_vector(a) for a in dominant.values()}
        all_in_wc = all(self.in_wc(a) for a in dominant.values())
        return {"passed": all_in_wc and len(signs) == 1, "alcoves": len(dominant), "sign_vectors": len(signs)}


def check_scaling(datum: RootDatum, m: int, k: int, radius_base: int, radius_scaled: int) -> Dict:
    """
    Bounded clan sizes at slope k/m are k^n times those at 1/m

    Args:
        datum: root datum
        m: slope denominator
        k: scaling factor, coprime to m
        radius_base, radius_scaled: BFS radii at 1/m and k/m

    Returns:
        report with both size lists
    """
    def bounded_sizes(system, radius):
        return sorted(len(c["members"]) for c in system.enumerate_clans(radius)
                      if c["bounded"] and not c["touches_frontier"])

    base = bounded_sizes(AffineRootSystem(datum, Slope(1, m)), radius_base)
    scaled = bounded_sizes(AffineRootSystem(datum, Slope(k, m)), radius_scaled)
    predicted = sorted(size * k ** datum.rank for size in base)
    return {"passed": predicted == scaled, "base": base, "scaled": scaled, "predicted": predicted}
