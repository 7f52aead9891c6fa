"""
Schemas for golden records, module definition files and command reports
"""

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

Entry = Union[int, str]

SECTION_REFERENCE = re.compile(r"§\s?\d+(\.\d+)*")


class GoldenExpectation(BaseModel):
    """Expected values for one (type, m) or (type, k/m) case; unset fields are not checked"""

    elliptic_numbers: Optional[List[int]] = None
    i_m: Optional[List[int]] = None
    a_m: Optional[List[int]] = None
    a_m_circ: Optional[List[int]] = None
    orbit_sizes: Optional[List[int]] = None
    n_c: Optional[int] = None
    delta_c_plus: Optional[List[Tuple[str, int]]] = None
    frak_d_c1: Optional[List[Tuple[str, int]]] = None
    clans: Optional[List[List[str]]] = None
    clans_exact: Optional[bool] = None
    point_counts: Optional[Dict[str, int]] = None
    chi: Optional[Dict[str, int]] = None
    total_chi: Optional[int] = None
    identity_holds: Optional[bool] = None


class GoldenRecord(BaseModel):
    type_label: str
    rank: int
    m: Optional[int] = None
    k: Optional[int] = None
    radius: Optional[int] = None
    deep: bool = False
    citation: str = ""
    expected: GoldenExpectation

    @model_validator(mode="after")
    def citation_required(self):
        populated = [name for name, value in self.expected if value is not None]
        if populated and not self.citation.strip():
            raise ValueError(f"Golden record {self.type_label}{self.rank} m={self.m} has values but no citation")
        if populated and not SECTION_REFERENCE.search(self.citation):
            raise ValueError(f"Citation '{self.citation}' of {self.type_label}{self.rank} m={self.m} names no section")
        return self

    @property
    def label(self) -> str:
        parts = [f"{self.type_label}{self.rank}"]
        if self.m is not None:
            parts.append(f"c={self.k}/{self.m}" if self.k is not None else f"m={self.m}")
        return " ".join(parts)


class GoldenFile(BaseModel):
    description: str = ""
    records: List[GoldenRecord]


class ModuleFile(BaseModel):
    """Module definition: rationals as 'p/q' strings, S keyed by '0'..'n', Xi by 'o1'..'on', 'delta'"""

    type: str
    rank: int
    c: str
    dim: int = Field(gt=0)
    S: Dict[str, List[List[Entry]]]
    Xi: Dict[str, List[List[Entry]]]
    name: str = ""
    source: str = ""

    @property
    def c_value(self) -> Fraction:
        return Fraction(self.c)


class MRow(BaseModel):
    m: int
    i_m: List[int]
    centralizer_order: Optional[int] = None
    a_m: Optional[List[int]] = None
    a_m_circ: Optional[List[int]] = None
    orbit_sizes: Optional[List[int]] = None
    spherical_factors: Optional[int] = None
    spherical_factors_note: str = "conditional on |B_x,1| = |A_m°|"
    subsystem_type: Optional[str] = None
    representative: Optional[List[List[int]]] = None
    error: Optional[str] = None
    budget_exceeded: bool = False


class ClassifyReport(BaseModel):
    type_label: str
    rank: int
    degrees: List[int]
    coxeter_number: int
    weyl_order: int
    elliptic_numbers: List[int]
    regular_numbers: List[int]
    exhaustive: Optional[bool] = None
    seed_words: List[Dict] = []
    rows: List[MRow]


class ClanRow(BaseModel):
    words: List[str]
    size: int
    bounded: bool
    frak_d: List[str]
    touches_frontier: bool


class ClanReport(BaseModel):
    type_label: str
    rank: int
    slope: str
    radius: int
    n_c: int
    delta_c_plus: List[str]
    frak_d_c: List[str]
    clans: List[ClanRow]
    checks: Dict = {}


class ChiReport(BaseModel):
    type_label: str
    rank: int
    slope: str
    radius: int
    total: int
    frontier_zero: bool
    wc_order: int
    contributions: List[Dict]
    clans: List[Dict] = []


class Verdict(BaseModel):
    command: str
    passed: bool
    status: str
    details: Dict = {}
    failures: List[str] = []
