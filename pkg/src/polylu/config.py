"""Tunable thresholds for preprocessing, kernel selection and triangular solve."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields

import numpy as np


class KernelMode(enum.IntEnum):
    """Maximum update-kernel tier used during numerical factorization."""

    ROWROW = 0
    SUPROW = 1
    SUPSUP = 2

    @staticmethod
    def parse(name):
        table = {
            "rowrow": KernelMode.ROWROW,
            "suprow": KernelMode.SUPROW,
            "supsup": KernelMode.SUPSUP,
        }
        key = str(name).lower()
        if key not in table:
            raise ValueError(f"unknown kernel mode {name!r}")
        return table[key]


@dataclass
class SolverConfig:
    """Engineering knobs.  Defaults follow the shipped heuristics; every value
    can be overridden programmatically or through the CLI ``--set`` flag."""

    # supernode detection
    min_supernode_rows: int = 2
    max_supernode_rows: int = 64
    # kernel auto-selection: rho = supernode row fraction, q = flops / fill
    kernel_rho_min: float = 0.1
    kernel_q_rowrow: float = 8.0
    kernel_q_suprow: float = 64.0
    # scheduling: a level narrower than bulk_width_factor * threads flips the
    # executor from bulk to pipeline mode
    bulk_width_factor: int = 2
    # ordering: "amd", "natural", or an explicit permutation array
    ordering: object = "amd"
    # triangular-solve partitioning (None -> max(4096, nnz // (8 * threads)))
    seg_nnz_threshold: int | None = None
    small_tri_threshold: int = 1024
    # iterative refinement
    refine_tolerance: float = 1e-13
    max_refine_iters: int = 5
    refine_stagnation_factor: float = 0.5

    def seg_threshold(self, nnz, threads):
        if self.seg_nnz_threshold is not None:
            return int(self.seg_nnz_threshold)
        return max(4096, nnz // (8 * max(1, threads)))

    def with_overrides(self, **kwargs):
        cfg = SolverConfig(**{f.name: getattr(self, f.name) for f in fields(self)})
        for name, value in kwargs.items():
            if not hasattr(cfg, name):
                raise ValueError(f"unknown configuration field {name!r}")
            setattr(cfg, name, value)
        return cfg

    def resolve_ordering_spec(self):
        """Normalize the ordering field to ('amd'|'natural'|'user', perm)."""
        if isinstance(self.ordering, str):
            name = self.ordering.lower()
            if name not in ("amd", "natural"):
                raise ValueError(f"unknown ordering {self.ordering!r}")
            return name, None
        perm = np.asarray(self.ordering, dtype=np.int64)
        return "user", perm
