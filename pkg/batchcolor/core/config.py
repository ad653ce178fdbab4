from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Exact oracle desk-scale caps (vertices per component that needs search)
    chromatic_limit: int = 30
    sum_limit: int = 16
    oracle_limit: Optional[int] = None

    # Adversary parameter caps
    tree_max_k: int = 3
    norep_max_q: int = 3
    kt_max_q: int = 2
    sum_known_max_k: int = 3
    sum_known_max_vertices: int = 1_000_000
    sum_unknown_max_k: int = 3
    sum_unknown_max_vertices: int = 200_000

    # TwoBatches
    check_invariants: bool = True

    # Harness
    max_workers: int = 4

    # App
    log_level: str = "INFO"
    debug: bool = False

    model_config = SettingsConfigDict(env_prefix="BATCHCOLOR_", env_file=".env", extra="ignore")

    @property
    def chromatic_cap(self) -> int:
        return self.oracle_limit if self.oracle_limit is not None else self.chromatic_limit

    @property
    def sum_cap(self) -> int:
        return self.oracle_limit if self.oracle_limit is not None else self.sum_limit


@lru_cache()
def get_settings() -> Settings:
    return Settings()
