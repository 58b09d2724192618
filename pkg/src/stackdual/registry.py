"""Named groups such as ``SL(5)``, ``SO(8)``, ``GSp(4)`` or ``E6_sc``."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Tuple

from .errors import InvalidType
from .gtau import build_g_tau, standard_embedding
from .rootdata import (QuotientBy, RootDatum, SimpleType, center, euclidean_coroots, parse_types,
                       semisimple_root_datum, simple_root_datum)
from .zmod.matrix import rat_solve


def vector_class(t: SimpleType) -> Tuple[int, ...]:
    """Center element of Spin(2m) killed by Spin(2m) -> SO(2m): the class of e_1."""
    if t.family != "D":
        raise InvalidType("vector class is defined for type D")
    d = simple_root_datum(t)
    cols = euclidean_coroots(t)
    basis = [[cols[j][i] for j in range(t.rank)] for i in range(t.rank)]
    e1 = [Fraction(int(i == 0)) for i in range(t.rank)]
    coords = rat_solve(basis, e1)
    return center(d).class_of(coords)


def _spin_type(n: int) -> SimpleType:
    if n == 3:
        return SimpleType("A", 1)
    if n < 3:
        raise InvalidType(f"Spin({n}) is not semisimple")
    return SimpleType("B", (n - 1) // 2) if n % 2 else SimpleType("D", n // 2)


def _even(n: int) -> int:
    if n % 2 or n < 2:
        raise InvalidType(f"expected an even size, got {n}")
    return n // 2


def _sp_type(n2: int) -> SimpleType:
    m = _even(n2)
    return SimpleType("A", 1) if m == 1 else SimpleType("C", m)


def _named(name: str, n: int) -> RootDatum:
    if name == "SL":
        return _rename(simple_root_datum(SimpleType("A", n - 1)), f"SL({n})")
    if name == "PGL":
        return _rename(simple_root_datum(SimpleType("A", n - 1), "adjoint"), f"PGL({n})")
    if name == "GL":
        base = resolve_group(f"SL({n})")
        return _rename(build_g_tau(base, standard_embedding(center(base))).result, f"GL({n})")
    if name == "Spin":
        return _rename(simple_root_datum(_spin_type(n)), f"Spin({n})")
    if name == "SO":
        t = _spin_type(n)
        if n % 2:
            return _rename(simple_root_datum(t, "adjoint"), f"SO({n})")
        return _rename(simple_root_datum(t, QuotientBy((vector_class(t),))), f"SO({n})")
    if name == "Sp":
        return _rename(simple_root_datum(_sp_type(n)), f"Sp({n})")
    if name == "PSp":
        return _rename(simple_root_datum(_sp_type(n), "adjoint"), f"PSp({n})")
    if name == "GSp":
        base = resolve_group(f"Sp({n})")
        return _rename(build_g_tau(base, standard_embedding(center(base))).result, f"GSp({n})")
    if name == "Spin^c":
        if n % 2 == 0:
            raise InvalidType("Spin^c is provided for odd n only")
        base = resolve_group(f"Spin({n})")
        return _rename(build_g_tau(base, standard_embedding(center(base))).result, f"Spin^c({n})")
    raise InvalidType(f"unknown group family {name!r}")


def _rename(d: RootDatum, name: str) -> RootDatum:
    return RootDatum(d.cochar_lattice, d.roots, d.coroots, d.types, name=name)


_CALL = re.compile(r"^\s*(SL|PGL|GL|Spin\^c|Spin|SO|Sp|PSp|GSp)\s*\(\s*(\d+)\s*\)\s*$")
_LABEL = re.compile(r"^\s*([A-Ga-g]\d+(?:\s*[+x]\s*[A-Ga-g]\d+)*)\s*(?:_(sc|ad))?\s*$")


def resolve_group(name: str) -> RootDatum:
    """Parse a group name; bare Dynkin labels mean the simply connected form."""
    m = _CALL.match(name)
    if m:
        return _named(m.group(1), int(m.group(2)))
    m = _LABEL.match(name)
    if m:
        types = parse_types(m.group(1))
        form = "adjoint" if m.group(2) == "ad" else "simply_connected"
        d = semisimple_root_datum(types, form)
        return _rename(d, name.strip())
    raise InvalidType(f"unrecognized group {name!r}")
