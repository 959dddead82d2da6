"""Polynomial ring descriptions: variable names, field, grading."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .field import FieldSpec

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RingSpec:
    """k[vars] with a Z- or Z^2-grading given by one degree vector per variable."""

    variable_names: tuple[str, ...]
    field: FieldSpec = field(default_factory=FieldSpec.rationals)
    grading: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        names = tuple(self.variable_names)
        object.__setattr__(self, "variable_names", names)
        if not 1 <= len(names) <= 16:
            raise ValueError("a ring needs between 1 and 16 variables")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for nm in names:
            if not _NAME.match(nm):
                raise ValueError(f"bad variable name {nm!r}")
        grading = self.grading
        if grading is None:
            grading = tuple((1,) for _ in names)
        grading = tuple(tuple(int(x) for x in g) for g in grading)
        if len(grading) != len(names):
            raise ValueError("one degree vector per variable")
        if len({len(g) for g in grading}) != 1 or len(grading[0]) not in (1, 2):
            raise ValueError("degree vectors must all have length 1 or 2")
        object.__setattr__(self, "grading", grading)

    @classmethod
    def standard(cls, names, field: FieldSpec | None = None) -> "RingSpec":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(names), field or FieldSpec.rationals())

    @classmethod
    def bigraded(cls, names, split: int, field: FieldSpec | None = None) -> "RingSpec":
        """First ``split`` variables get degree (1,0), the rest (0,1)."""
        if isinstance(names, str):
            names = names.split()
        grading = tuple((1, 0) if i < split else (0, 1) for i in range(len(names)))
        return cls(tuple(names), field or FieldSpec.rationals(), grading)

    @property
    def nvars(self) -> int:
        return len(self.variable_names)

    @property
    def grading_rank(self) -> int:
        return len(self.grading[0])

    @property
    def is_standard(self) -> bool:
        return all(g == (1,) for g in self.grading)

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def multidegree(self, exp) -> tuple[int, ...]:
        k = self.grading_rank
        return tuple(sum(e * g[j] for e, g in zip(exp, self.grading)) for j in range(k))

    def with_field(self, field: FieldSpec) -> "RingSpec":
        return RingSpec(self.variable_names, field, self.grading)

    def subring(self, keep) -> "RingSpec":
        keep = list(keep)
        return RingSpec(tuple(self.variable_names[i] for i in keep), self.field,
                        tuple(self.grading[i] for i in keep))

    def extended(self, names, degrees=None) -> "RingSpec":
        """Ring with extra variables appended (used by elimination tricks)."""
        names = tuple(names)
        if degrees is None:
            degrees = tuple(tuple(0 for _ in range(self.grading_rank)) for _ in names)
        return RingSpec(self.variable_names + names, self.field, self.grading + tuple(degrees))
