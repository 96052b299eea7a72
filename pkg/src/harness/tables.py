"""
Comparison tables: methods as rows, environments as columns, mean +/- std
over seeds per cell, best method per column flagged.
"""

from typing import Dict, List, Sequence

import numpy as np
from pydantic import BaseModel, Field, computed_field

from ..exceptions import ContractError


class ComparisonCell(BaseModel):
    """Evaluation returns of one method on one environment."""
    mean: float = Field(description="Mean over seeds of the per-seed evaluation mean")
    std: float = Field(ge=0, description="Population std over seeds")
    seeds: List[int] = Field(description="Seeds, in run order")
    per_seed: List[float] = Field(description="Per-seed evaluation means, aligned with seeds")

    @classmethod
    def from_seed_means(cls, seeds: Sequence[int], means: Sequence[float]) -> "ComparisonCell":
        if len(seeds) != len(means) or not seeds:
            raise ContractError("A cell needs one mean per seed")
        values = np.asarray(means, dtype=np.float64)
        return cls(
            mean=float(values.mean()),
            std=float(values.std()),
            seeds=list(seeds),
            per_seed=[float(v) for v in values],
        )


class ComparisonTable(BaseModel):
    """Score table in the layout of a methods-by-games results table."""
    methods: List[str] = Field(description="Row labels, in order")
    envs: List[str] = Field(description="Column labels, in order")
    cells: Dict[str, Dict[str, ComparisonCell]] = Field(description="method -> env -> cell")

    def cell(self, method: str, env: str) -> ComparisonCell:
        return self.cells[method][env]

    @computed_field
    @property
    def winners(self) -> Dict[str, str]:
        """Best method per environment: highest mean, earliest row on ties."""
        best: Dict[str, str] = {}
        for env in self.envs:
            means = [self.cells[method][env].mean for method in self.methods]
            best[env] = self.methods[int(np.argmax(means))]
        return best

    def validate_seeds(self) -> None:
        """Every cell must aggregate the same seed list."""
        seed_lists = {tuple(c.seeds) for row in self.cells.values() for c in row.values()}
        if len(seed_lists) > 1:
            raise ContractError(f"Cells aggregate different seed lists: {sorted(seed_lists)}")

    def to_markdown(self, precision: int = 3) -> str:
        header = "| Method | " + " | ".join(self.envs) + " |"
        rule = "|---|" + "---:|" * len(self.envs)
        lines = [header, rule]
        winners = self.winners
        for method in self.methods:
            parts = []
            for env in self.envs:
                c = self.cells[method][env]
                text = f"{c.mean:.{precision}f} ± {c.std:.{precision}f}"
                parts.append(f"**{text}**" if winners[env] == method else text)
            lines.append(f"| {method} | " + " | ".join(parts) + " |")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
