"""
Loading of golden records and module definition files
"""

import json
import logging
import os
from typing import Dict, List, Optional

import pandas as pd
from pydantic import ValidationError

from analysis.daha_check import ModuleData, fraction_matrix
from backend.config import Settings, settings as default_settings
from backend.golden.models import GoldenFile, GoldenRecord, ModuleFile

logger = logging.getLogger(__name__)

GOLDEN_FILES = ("elliptic_numbers", "torsion", "affine", "localization")


class GoldenStore:
    """Read-only access to the golden data directory"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or default_settings
        self.golden_dir = self.settings.golden_dir
        self._cache: Dict[str, List[GoldenRecord]] = {}

    def records(self, kind: str, include_deep: Optional[bool] = None) -> List[GoldenRecord]:
        """
        Golden records of one kind

        Args:
            kind: one of GOLDEN_FILES
            include_deep: keep records marked deep (defaults to settings.deep)

        Returns:
            list of validated GoldenRecord
        """
        if kind not in GOLDEN_FILES:
            raise ValueError(f"Unknown golden file '{kind}', expected one of {', '.join(GOLDEN_FILES)}")
        if kind not in self._cache:
            path = os.path.join(self.golden_dir, f"{kind}.json")
            with open(path, encoding="utf-8") as handle:
                try:
                    self._cache[kind] = GoldenFile.model_validate(json.load(handle)).records
                except ValidationError as e:
                    logger.error(f"Invalid golden file {path}: {e}")
                    raise
            logger.debug(f"Loaded {len(self._cache[kind])} golden records from {path}")
        include_deep = self.settings.deep if include_deep is None else include_deep
        return [r for r in self._cache[kind] if include_deep or not r.deep]

    def summary(self) -> pd.DataFrame:
        """One row per golden record across all files"""
        rows = []
        for kind in GOLDEN_FILES:
            for record in self.records(kind, include_deep=True):
                rows.append({
                    "file": kind,
                    "case": record.label,
                    "deep": record.deep,
                    "fields": ", ".join(name for name, value in record.expected if value is not None),
                    "citation": record.citation,
                })
        return pd.DataFrame(rows)

    def module_paths(self) -> List[str]:
        directory = os.path.join(self.golden_dir, "modules")
        if not os.path.isdir(directory):
            return []
        return sorted(os.path.join(directory, name) for name in os.listdir(directory) if name.endswith(".json"))


def module_from_file(module_file: ModuleFile) -> ModuleData:
    """Convert a validated ModuleFile into exact matrices"""
    try:
        S = {int(i): fraction_matrix(rows) for i, rows in module_file.S.items()}
    except ValueError as e:
        raise ValueError(f"Module '{module_file.name}': S keys must be integers 0..n ({e})") from e
    Xi = {name: fraction_matrix(rows) for name, rows in module_file.Xi.items()}
    return ModuleData(
        type_label=module_file.type,
        rank=module_file.rank,
        c=module_file.c_value,
        dim=module_file.dim,
        S=S,
        Xi=Xi,
        name=module_file.name or "module file",
        source=module_file.source,
    )


def load_module(path: str) -> ModuleData:
    """
    Read a module definition file

    Args:
        path: JSON file in the module format

    Returns:
        ModuleData with Fraction entries
    """
    with open(path, encoding="utf-8") as handle:
        module_file = ModuleFile.model_validate(json.load(handle))
    logger.info(f"Loaded module '{module_file.name}' ({module_file.type}{module_file.rank}, dim {module_file.dim})")
    return module_from_file(module_file)
