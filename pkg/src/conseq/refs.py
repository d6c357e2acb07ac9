"""Theory references: small structured values naming axiom sets.

A reference is how designated atoms point at a theory (Prf[EA], Prf[ext(EA,c)],
...).  References print inside atom parameter brackets and are Goedel-codable,
so they appear both in formula text and in machine codes.

Kinds:
  named name            -- a standard presentation (Q, EA, BSigma1, ...)
  ext(ref, c)           -- ref extended by the single sentence with code c
  slipext(ref, z, n)    -- ref plus the n-th slice of the binary formula coded z
  momega(m, ref)        -- ISigma(m) plus the uniform iterated m-reflection axiom
  mach(c)               -- the axiom enumerator described by machine code c
  craig(ref)            -- the padded (elementary) presentation of ref's stream
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class RefError(ValueError):
    pass


@dataclass(frozen=True)
class Named:
    name: str

    def text(self) -> str:
        return self.name


@dataclass(frozen=True)
class Ext:
    base: "TheoryRef"
    code: int

    def text(self) -> str:
        return f"ext({self.base.text()},{self.code})"


@dataclass(frozen=True)
class SlipExt:
    """Base theory together with slice n of the binary formula coded z."""

    base: "TheoryRef"
    z: int
    n: int

    def text(self) -> str:
        return f"slipext({self.base.text()},{self.z},{self.n})"


@dataclass(frozen=True)
class MOmega:
    m: int
    base: "TheoryRef"

    def text(self) -> str:
        return f"momega({self.m},{self.base.text()})"


@dataclass(frozen=True)
class Mach:
    code: int

    def text(self) -> str:
        return f"mach({self.code})"


@dataclass(frozen=True)
class CraigRef:
    base: "TheoryRef"

    def text(self) -> str:
        return f"craig({self.base.text()})"


TheoryRef = Union[Named, Ext, SlipExt, MOmega, Mach, CraigRef]


def ref_from_parts(head: str, items: list, pos: int = 0) -> TheoryRef:
    """Build a reference from parsed call syntax head(items)."""

    def as_ref(x):
        if isinstance(x, str):
            return Named(x)
        if isinstance(x, (Named, Ext, SlipExt, MOmega, Mach, CraigRef)):
            return x
        raise RefError(f"expected a theory reference, got {x!r}")

    if head == "ext" and len(items) == 2 and isinstance(items[1], int):
        return Ext(as_ref(items[0]), items[1])
    if head == "slipext" and len(items) == 3 and isinstance(items[1], int) and isinstance(items[2], int):
        return SlipExt(as_ref(items[0]), items[1], items[2])
    if head == "momega" and len(items) == 2 and isinstance(items[0], int):
        return MOmega(items[0], as_ref(items[1]))
    if head == "mach" and len(items) == 1 and isinstance(items[0], int):
        return Mach(items[0])
    if head == "craig" and len(items) == 1:
        return CraigRef(as_ref(items[0]))
    raise RefError(f"unknown reference form {head}({items}) at {pos}")
