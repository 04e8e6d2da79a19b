"""Built-in rational solids (integer embeddings of the standard coordinates)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable

from .errors import ParseError
from .polytope import VRep

TABLE1 = (
    "octahedron",
    "cube",
    "truncated-tetrahedron",
    "triakis-tetrahedron",
    "cuboctahedron",
    "rhombic-dodecahedron",
    "truncated-octahedron",
    "tetrakis-hexahedron",
)
TABLE2 = ("hyperoctahedron:3", "hyperoctahedron:4", "hyperoctahedron:5")
PARAMETRIC = ("hyperoctahedron", "hypercube")

_DISPLAY = {
    "octahedron": "Octahedron",
    "cube": "Cube",
    "truncated-tetrahedron": "Truncated tetrahedron",
    "triakis-tetrahedron": "Triakis tetrahedron",
    "cuboctahedron": "Cuboctahedron",
    "rhombic-dodecahedron": "Rhombic dodecahedron",
    "truncated-octahedron": "Truncated octahedron",
    "tetrakis-hexahedron": "Tetrakis hexahedron",
    "hyperoctahedron": "Hyper-octahedron",
    "hypercube": "Hypercube",
}


@dataclass(frozen=True)
class SolidSpec:
    name: str
    n: int | None = None

    @property
    def label(self) -> str:
        base = _DISPLAY.get(self.name, self.name)
        return f"{base} ({self.n}D)" if self.n is not None else base

    def __str__(self) -> str:
        return f"{self.name}:{self.n}" if self.n is not None else self.name


def _signed_perms(base: Iterable[int], parity: int | None = None) -> list[tuple[int, ...]]:
    """All coordinate permutations of ``base`` with all sign changes (optionally by parity of minus signs)."""
    out = set()
    for q in set(permutations(base)):
        for s in product((1, -1), repeat=len(q)):
            if parity is not None and s.count(-1) % 2 != parity:
                continue
            out.add(tuple(a * b for a, b in zip(q, s)))
    return sorted(out)


def _hyperoctahedron(n: int) -> list[tuple[int, ...]]:
    return _signed_perms((1,) + (0,) * (n - 1))


def _hypercube(n: int) -> list[tuple[int, ...]]:
    return sorted(product((1, -1), repeat=n))


def _triakis_tetrahedron() -> list[tuple[Fraction, ...]]:
    # polar of the truncated tetrahedron: degree-3 apexes at (1,1,1)-type points with an
    # odd number of minus signs, degree-6 base tetrahedron scaled by 3/5
    apex = [tuple(Fraction(x) for x in p) for p in _signed_perms((1, 1, 1), parity=1)]
    base = [tuple(Fraction(3, 5) * x for x in p) for p in _signed_perms((1, 1, 1), parity=0)]
    return sorted(apex + base)


_FIXED = {
    "octahedron": lambda: _hyperoctahedron(3),
    "cube": lambda: _hypercube(3),
    "truncated-tetrahedron": lambda: _signed_perms((1, 1, 3), parity=0),
    "triakis-tetrahedron": _triakis_tetrahedron,
    "cuboctahedron": lambda: _signed_perms((1, 1, 0)),
    "rhombic-dodecahedron": lambda: _hypercube(3) + _signed_perms((2, 0, 0)),
    "truncated-octahedron": lambda: _signed_perms((0, 1, 2)),
    # polar of the truncated octahedron, scaled by 2: cube plus octahedron apexes at distance 3/2
    "tetrakis-hexahedron": lambda: _hypercube(3) + [tuple(Fraction(3, 2) * x for x in p) for p in _hyperoctahedron(3)],
}

_SPEC_RE = re.compile(r"^([a-z-]+)(?:[:(](\d+)\)?)?$")


def parse_solid(text: str) -> SolidSpec:
    """Parse ``name``, ``name:n`` or ``name(n)``."""
    m = _SPEC_RE.match(text.strip().lower())
    if not m:
        raise ParseError(f"unknown solid {text!r}")
    name, n = m.group(1), m.group(2)
    if name in PARAMETRIC:
        if n is None:
            raise ParseError(f"{name} needs a dimension, e.g. {name}:4")
        if int(n) < 2:
            raise ParseError(f"{name} dimension must be >= 2")
        return SolidSpec(name, int(n))
    if name not in _FIXED:
        raise ParseError(f"unknown solid {text!r}; known: {', '.join(list(_FIXED) + list(PARAMETRIC))}")
    if n is not None:
        raise ParseError(f"{name} takes no dimension")
    return SolidSpec(name)


def generate_solid(spec: SolidSpec | str) -> VRep:
    if isinstance(spec, str):
        spec = parse_solid(spec)
    if spec.name == "hyperoctahedron":
        pts = _hyperoctahedron(spec.n)
    elif spec.name == "hypercube":
        pts = _hypercube(spec.n)
    elif spec.name in _FIXED:
        pts = _FIXED[spec.name]()
    else:
        raise ParseError(f"unknown solid {spec.name!r}")
    return VRep.of(pts)
