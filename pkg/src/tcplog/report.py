"""Solve results and their JSON / TSV renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List

from .logic import Atom

JSON_KEYS = ("atom", "probability", "bound", "iterations", "mat_ms", "wmc_ms", "dd_nodes")
TSV_COLUMNS = ("atom", "probability", "bound", "iterations", "mat_ms", "wmc_ms")


@dataclass(frozen=True)
class Answer:
    atom: Atom
    probability: float
    bound: str  # "exact" or "lower"
    iterations: int


@dataclass
class SolveReport:
    answers: List[Answer]
    timings: Dict[str, float]
    dd_nodes: int
    entries: int = 0
    magic_entries: int = 0
    mode: str = ""
    extra: Dict[str, float] = field(default_factory=dict)

    def probabilities(self) -> Dict[str, float]:
        return {str(a.atom): a.probability for a in self.answers}

    def rows(self) -> List[dict]:
        return [{
            "atom": str(a.atom),
            "probability": a.probability,
            "bound": a.bound,
            "iterations": a.iterations,
            "mat_ms": round(self.timings.get("materialize_ms", 0.0), 3),
            "wmc_ms": round(self.timings.get("wmc_ms", 0.0), 3),
            "dd_nodes": self.dd_nodes,
        } for a in self.answers]


def format_probability(p: float) -> str:
    # 12 significant digits hides float noise such as 0.51000000000000001
    return f"{p:.12g}"


def to_json(reports: List[SolveReport]) -> str:
    rows = [row for r in reports for row in r.rows()]
    return json.dumps(rows, indent=2)


def to_tsv(reports: List[SolveReport], header: bool = False) -> str:
    lines = ["\t".join(TSV_COLUMNS)] if header else []
    for r in reports:
        for row in r.rows():
            lines.append("\t".join([
                row["atom"], format_probability(row["probability"]), row["bound"],
                str(row["iterations"]), f"{row['mat_ms']:.3f}", f"{row['wmc_ms']:.3f}",
            ]))
    return "\n".join(lines) + ("\n" if lines else "")
