"""
Runtime settings for the elliptic Springer verifier, read from the environment
"""

import os
import logging
from dataclasses import dataclass, replace
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

GOLDEN_DIR_DEFAULT = os.path.join(os.path.dirname(__file__), "golden", "data")


@dataclass(frozen=True)
class Settings:
    """Budgets and seeds shared by every enumeration"""

    seed: int = 20240601
    random_search_budget: int = 4000
    exhaustive_limit: int = 51840
    class_budget: int = 20000
    closure_budget: int = 60000
    wc_budget: int = 50000
    golden_dir: str = GOLDEN_DIR_DEFAULT
    deep: bool = False

    def deepened(self) -> "Settings":
        """Budgets used by --deep runs (E7/E8 centralizers)"""
        return replace(
            self,
            class_budget=max(self.class_budget, 4000000),
            closure_budget=max(self.closure_budget, 2000000),
            wc_budget=max(self.wc_budget, 500000),
            deep=True,
        )

    def with_seed(self, seed: int) -> "Settings":
        return replace(self, seed=seed)


def load_settings() -> Settings:
    """
    Build settings from SPRINGER_* environment variables

    Returns:
        Settings with defaults for anything unset
    """
    settings = Settings(
        seed=int(os.environ.get("SPRINGER_SEED", 20240601)),
        random_search_budget=int(os.environ.get("SPRINGER_RANDOM_SEARCH_BUDGET", 4000)),
        exhaustive_limit=int(os.environ.get("SPRINGER_EXHAUSTIVE_LIMIT", 51840)),
        class_budget=int(os.environ.get("SPRINGER_CLASS_BUDGET", 20000)),
        closure_budget=int(os.environ.get("SPRINGER_CLOSURE_BUDGET", 60000)),
        wc_budget=int(os.environ.get("SPRINGER_WC_BUDGET", 50000)),
        golden_dir=os.environ.get("SPRINGER_GOLDEN_DIR", GOLDEN_DIR_DEFAULT),
    )
    if os.environ.get("SPRINGER_DEEP", "0") == "1":
        settings = settings.deepened()
    logger.debug(f"Loaded settings: {settings}")
    return settings


settings = load_settings()
