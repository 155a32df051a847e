"""JSON file formats for posets, down-sets, points, and utilities.

Poset:     {"elements": ["e1", ...], "covers": [["a","b"], ...]} or {"leq": [...]}
Product:   {"product": [<poset>, ...]}
Down-set:  {"generators": [...]} or {"members": [...]}
Utility:   tabulated {"poset": <poset-or-path>, "values": {"e1": "3/2", ...}}
           or closed form {"type": "classical"|"power"|"price_matrix"|
           "min_product"|"affine"|"restrict", ...}

Rationals are "p/q" strings.  Product points appear either as arrays of
factor ids or as comma-joined strings ("2,3"); value-map keys always use the
comma-joined form.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Union

from .leontief import (
    Box,
    BoxAxis,
    TabulatedUtility,
    UtilityError,
    affine_transform,
    classical_leontief,
    min_product,
    power_leontief,
    price_matrix_leontief,
    restrict,
)
from .order import DownSet, FinitePoset, OrderError, ProductSpace


class InputError(ValueError):
    """Malformed input file or value."""


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def parse_rational(raw) -> Fraction:
    if isinstance(raw, bool):
        raise InputError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {raw!r}") from None
    if isinstance(raw, float):
        raise InputError(f"floats are not exact rationals: {raw!r}")
    raise InputError(f"not a rational: {raw!r}")


def parse_number(raw) -> Union[Fraction, float]:
    if isinstance(raw, float):
        return raw
    return parse_rational(raw)


def encode_value(v) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v
    return v


def encode_elem(e) -> Any:
    if isinstance(e, tuple):
        return [encode_elem(c) for c in e]
    if isinstance(e, Fraction):
        return str(e)
    return e


def elem_key(e) -> str:
    """Canonical string key for one element (comma-joined for product points)."""
    if isinstance(e, tuple):
        return ",".join(elem_key(c) for c in e)
    return str(e)


def poset_from_json(obj, *, base_dir: str = ".") -> Union[FinitePoset, ProductSpace]:
    if isinstance(obj, str):
        return poset_from_json(load_json(os.path.join(base_dir, obj)), base_dir=base_dir)
    if not isinstance(obj, dict):
        raise InputError("poset must be an object or a path string")
    if "product" in obj:
        factors = []
        for sub in obj["product"]:
            p = poset_from_json(sub, base_dir=base_dir)
            if not isinstance(p, FinitePoset):
                raise InputError("product factors must be plain posets")
            factors.append(p)
        return ProductSpace(factors)
    if "elements" not in obj:
        raise InputError("poset needs an 'elements' list")
    elements = list(obj["elements"])
    try:
        if "covers" in obj:
            return FinitePoset.from_covers(elements, [tuple(p) for p in obj["covers"]])
        if "leq" in obj:
            return FinitePoset.from_leq(elements, [tuple(p) for p in obj["leq"]])
    except OrderError as exc:
        raise InputError(f"invalid poset: {exc}") from exc
    raise InputError("poset needs 'covers' or 'leq'")


def resolve_element(space: Union[FinitePoset, ProductSpace], raw):
    """Match a raw JSON token (string, number, or array) to a domain element."""
    if isinstance(space, ProductSpace):
        if isinstance(raw, str):
            parts = raw.split(",")
        elif isinstance(raw, (list, tuple)):
            parts = list(raw)
        else:
            raise InputError(f"cannot read product point from {raw!r}")
        if len(parts) != space.n_axes:
            raise InputError(f"point {raw!r} has wrong arity")
        return tuple(
            resolve_element(f, c) for f, c in zip(space.factors, parts)
        )
    for e in space.elements:
        if e == raw or str(e) == str(raw).strip():
            return e
    raise InputError(f"unknown element {raw!r}")


def downset_from_json(obj, space) -> DownSet:
    if isinstance(obj, str):
        raise InputError("down-set must be inline JSON here")
    try:
        if "generators" in obj:
            gens = [resolve_element(space, g) for g in obj["generators"]]
            return DownSet.from_generators(space, gens)
        if "members" in obj:
            members = [resolve_element(space, m) for m in obj["members"]]
            return DownSet.from_members(space, members)
    except OrderError as exc:
        raise InputError(f"invalid down-set: {exc}") from exc
    raise InputError("down-set needs 'generators' or 'members'")


def _box_from_json(obj) -> Box:
    axes = []
    for ax in obj.get("axes", []):
        lo = parse_number(ax["lo"])
        hi = parse_number(ax["hi"])
        step = parse_number(ax["step"]) if "step" in ax else None
        axes.append(BoxAxis(lo, hi, step))
    if not axes:
        raise InputError("box needs a nonempty 'axes' list")
    return Box(axes)


def utility_from_json(obj, *, base_dir: str = "."):
    if isinstance(obj, str):
        return utility_from_json(load_json(os.path.join(base_dir, obj)), base_dir=base_dir)
    if not isinstance(obj, dict):
        raise InputError("utility must be an object or a path string")
    kind = obj.get("type", "tabulated" if "values" in obj else None)
    try:
        if kind == "tabulated":
            return _tabulated_from_json(obj, base_dir)
        if kind == "classical":
            a = [parse_number(c) for c in obj["a"]]
            return classical_leontief(a, _box_from_json(obj["box"]))
        if kind == "power":
            a = [parse_number(c) for c in obj["a"]]
            alpha = [parse_number(c) for c in obj["alpha"]]
            return power_leontief(a, alpha, _box_from_json(obj["box"]))
        if kind == "price_matrix":
            return price_matrix_leontief(obj["P"])
        if kind == "affine":
            base = utility_from_json(obj["base"], base_dir=base_dir)
            return affine_transform(base, parse_number(obj["a"]), parse_number(obj["b"]))
        if kind == "min_product":
            factors = [utility_from_json(f, base_dir=base_dir) for f in obj["factors"]]
            from .oracle import require_certified

            factors = [
                require_certified(f) if isinstance(f, TabulatedUtility) else f
                for f in factors
            ]
            return min_product(*factors)
        if kind == "restrict":
            base = utility_from_json(obj["base"], base_dir=base_dir)
            if isinstance(base, TabulatedUtility):
                space = base.space if base.space is not None else base.poset
                return restrict(base, downset_from_json(obj["downset"], space))
            gens = obj["downset"].get("generators")
            if gens is None:
                raise InputError("closed-form restriction needs generators")
            return restrict(base, [tuple(parse_number(c) for c in g) for g in gens])
    except KeyError as exc:
        raise InputError(f"utility object is missing field {exc}") from None
    except (OrderError, UtilityError) as exc:
        raise InputError(f"invalid utility: {exc}") from exc
    raise InputError(f"unknown utility type {kind!r}")


def _tabulated_from_json(obj, base_dir: str) -> TabulatedUtility:
    space = poset_from_json(obj["poset"], base_dir=base_dir)
    raw_values = obj["values"]
    values = {}
    if isinstance(space, ProductSpace):
        poset = space.as_poset()
        for key, val in raw_values.items():
            values[resolve_element(space, key)] = parse_rational(val)
        u = TabulatedUtility(poset, values, space=space)
    else:
        for key, val in raw_values.items():
            values[resolve_element(space, key)] = parse_rational(val)
        u = TabulatedUtility(space, values)
    return u


def point_from_json(obj, space):
    if isinstance(obj, dict):
        if "point" not in obj:
            raise InputError("point file needs a 'point' field")
        obj = obj["point"]
    return resolve_element(space, obj)


def dumps_report(report: dict) -> str:
    """Deterministic JSON text for a report object."""
    return json.dumps(report, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
