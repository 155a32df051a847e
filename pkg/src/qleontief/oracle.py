"""Brute-force certifiers for quasi-Leontief structure on finite posets.

Every certifier enumerates; a pass verdict is re-checkable by independent
re-enumeration and a fail verdict carries a concrete witness that violates
the stated predicate when replayed.  The certifiers cross-check each other:
on a finite poset, regular quasi-Leontief (every nonempty upper level set
has a least element) is equivalent to isotone + common-lower-bound minima
(property Phi) + lower-bounded level sets, and on inf-semilattices to the
meet-homomorphism identity u(x ^ y) = min(u(x), u(y)).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .leontief import TabulatedUtility
from .order import Element, OrderError


class InconsistencyError(AssertionError):
    """Two certifiers that must agree disagreed; this is a bug, not a verdict."""


class CertificationError(ValueError):
    """A required certification failed; carries the failing certificate."""

    def __init__(self, certificate: "Certificate"):
        self.certificate = certificate
        super().__init__(
            f"{certificate.prop} failed: {certificate.detail} "
            f"witnesses={list(certificate.witnesses)!r}"
        )


@dataclass
class Certificate:
    """Verdict of one certifier run.

    A failing certificate always carries witnesses re-checkable against the
    property named in ``prop``; a passing regularity certificate carries the
    dual table it built.
    """

    ok: bool
    prop: str
    witnesses: Tuple = ()
    dual_table: Optional[Dict[Any, Element]] = None
    detail: str = ""
    utility: Optional[TabulatedUtility] = None
    data: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        from .io import encode_elem, encode_value

        out: Dict[str, Any] = {
            "verdict": "pass" if self.ok else "fail",
            "property": self.prop,
            "witnesses": [encode_elem(w) for w in self.witnesses],
        }
        if self.dual_table is not None:
            out["dual_table"] = {
                str(encode_value(lam)): encode_elem(x)
                for lam, x in sorted(self.dual_table.items())
            }
        if self.detail:
            out["detail"] = self.detail
        if self.data:
            out["data"] = {k: self.data[k] for k in sorted(self.data)}
        return out


def _level_set(u: TabulatedUtility, lam) -> Tuple[Element, ...]:
    return tuple(x for x in u.poset.elements if u.scale.le(lam, u.values[x]))


def _least_of_upper_set(u: TabulatedUtility, lam):
    """Least element m with level set exactly the up-set of m, else a failure.

    The defining relation is the set equality u^-1(up(lam)) = up(m), not bare
    least-element existence: a level set of a non-isotone table can have a
    least element without being upward closed.  Returns (m, None) on success
    and (None, Certificate-args) on failure; an empty level set gives
    (None, None).
    """
    poset = u.poset
    level = _level_set(u, lam)
    if not level:
        return None, None
    least = poset.least(level)
    if least is None:
        mins = poset.minimal(level)
        return None, (mins[:2], f"level set at {lam!r} has no least element")
    level_mask = poset._mask(level)
    extra = poset._up[poset.index_of(least)] & ~level_mask
    if extra:
        y = poset.elements[(extra & -extra).bit_length() - 1]
        return None, (
            (least, y),
            f"level set at {lam!r} is not the up-set of {least!r}: "
            f"{y!r} lies above it with a smaller value",
        )
    return least, None


def _probe_levels(u: TabulatedUtility, extra: Iterable = ()) -> List:
    """Attained values plus midpoints between consecutive distinct values.

    On a finite domain level sets only change at these thresholds; scales
    without arithmetic (any totally ordered values work) probe the attained
    values alone, which already decides every verdict.
    """
    img = u.image()
    probes = list(img)
    for a, b in zip(img, img[1:]):
        try:
            probes.append((a + b) / 2)
        except TypeError:
            break
    probes.extend(extra)
    return sorted(set(probes))


def certify_quasi_leontief(u: TabulatedUtility) -> Certificate:
    """Check that every upper level set u^-1(up(u(x))) is the up-set of a
    single point (its least element).

    On pass the certificate carries a certified copy of the utility with the
    interior table filled in.
    """
    poset = u.poset
    interior_table: Dict[Element, Element] = {}
    level_cache: Dict[Any, Tuple] = {}
    for x in poset.elements:
        lam = u.values[x]
        if lam in level_cache:
            least, failure = level_cache[lam]
        else:
            least, failure = _least_of_upper_set(u, lam)
            level_cache[lam] = (least, failure)
        if least is None:
            witnesses, detail = failure
            return Certificate(
                False,
                "quasi-leontief",
                witnesses=witnesses,
                detail=f"for {x!r}: {detail}",
            )
        interior_table[x] = least
    return Certificate(
        True, "quasi-leontief", utility=u._certified_copy(interior_table)
    )


def certify_regular(
    u: TabulatedUtility, probe_levels: Iterable = ()
) -> Certificate:
    """Check least elements of every nonempty level set over the probe levels.

    Probes default to the attained values plus midpoints between consecutive
    ones (level sets only change there); extra levels are merged in.  On pass
    the certificate carries the full dual table and a certified copy: on a
    finite domain the attained values sit among the probes, so regularity
    subsumes the quasi-Leontief property and the interior table falls out of
    the dual table.
    """
    poset = u.poset
    table: Dict[Any, Element] = {}
    for lam in _probe_levels(u, probe_levels):
        least, failure = _least_of_upper_set(u, lam)
        if least is None:
            if failure is None:
                continue
            witnesses, detail = failure
            return Certificate(False, "regular", witnesses=witnesses, detail=detail)
        table[lam] = least
    if u.certified:
        out = u._certified_copy(u._interior)
    else:
        out = u._certified_copy({x: table[u.values[x]] for x in poset.elements})
    out._dual_cache.update(table)
    return Certificate(True, "regular", dual_table=table, utility=out)


def check_isotone(u: TabulatedUtility) -> Certificate:
    """Monotonicity over all comparable pairs."""
    poset = u.poset
    for x in poset.elements:
        vx = u.values[x]
        for y in poset.up_set(x):
            if not u.scale.le(vx, u.values[y]):
                return Certificate(
                    False,
                    "isotone",
                    witnesses=(x, y),
                    detail=f"u({x!r})={vx!r} > u({y!r})={u.values[y]!r}",
                )
    return Certificate(True, "isotone")


def check_property_phi(u: TabulatedUtility) -> Certificate:
    """Every pair has a common lower bound attaining the min of their values."""
    poset = u.poset
    n = len(poset.elements)
    for i in range(n):
        x = poset.elements[i]
        for j in range(i, n):
            y = poset.elements[j]
            target = min(u.values[x], u.values[y])
            lows = poset._down[i] & poset._down[j]
            ok = False
            m = lows
            while m:
                low = m & -m
                k = low.bit_length() - 1
                if u.scale.eq(u.values[poset.elements[k]], target):
                    ok = True
                    break
                m ^= low
            if not ok:
                return Certificate(
                    False,
                    "property-phi",
                    witnesses=(x, y),
                    detail=f"no common lower bound attains {target!r}",
                )
    return Certificate(True, "property-phi")


def check_lower_bounded_level_sets(
    u: TabulatedUtility, probe_levels: Iterable = ()
) -> Certificate:
    """Every nonempty upper level set has a common lower bound in the domain."""
    poset = u.poset
    for lam in _probe_levels(u, probe_levels):
        idxs = [poset.index_of(x) for x in _level_set(u, lam)]
        if not idxs:
            continue
        m = poset._down[idxs[0]]
        for i in idxs[1:]:
            m &= poset._down[i]
            if m == 0:
                break
        if m == 0:
            return Certificate(
                False,
                "lower-bounded-level-sets",
                witnesses=tuple(poset.elements[i] for i in idxs[:2]),
                detail=f"level set at {lam!r} has no common lower bound",
            )
    return Certificate(True, "lower-bounded-level-sets")


def check_meet_homomorphism(u: TabulatedUtility) -> Certificate:
    """u(x ^ y) = min(u(x), u(y)) for all pairs; needs a total meet.

    On finite inf-semilattices this identity is equivalent to regular
    quasi-Leontief certification; the equivalence is asserted and a mismatch
    raises InconsistencyError (a bug, never a verdict).
    """
    poset = u.poset
    if not poset.is_inf_semilattice():
        raise OrderError("meet-homomorphism check needs a total meet")
    verdict: Optional[Certificate] = None
    for i, x in enumerate(poset.elements):
        for y in poset.elements[i:]:
            m = poset.meet(x, y)
            want = min(u.values[x], u.values[y])
            if not u.scale.eq(u.values[m], want):
                verdict = Certificate(
                    False,
                    "meet-homomorphism",
                    witnesses=(x, y),
                    detail=f"u({x!r} ^ {y!r})={u.values[m]!r} != {want!r}",
                )
                break
        if verdict is not None:
            break
    if verdict is None:
        verdict = Certificate(True, "meet-homomorphism")

    regular_side = _regular_by_definition(u)
    if regular_side != verdict.ok:
        raise InconsistencyError(
            f"meet-homomorphism={verdict.ok} but regular-certification={regular_side}"
        )
    return verdict


def _regular_by_definition(u: TabulatedUtility) -> bool:
    base = certify_quasi_leontief(u)
    if not base.ok:
        return False
    return certify_regular(base.utility).ok


def check_characterization_equivalence(u: TabulatedUtility) -> Certificate:
    """Cross-check the characterizations of regular quasi-Leontief functions.

    Side A: direct certification (least elements of all upper level sets).
    Side B: isotone + property Phi + lower-bounded level sets.
    Side C (only when meets are total): the meet-homomorphism identity.
    The certificate passes iff all computed sides agree.
    """
    side_a = _regular_by_definition(u)
    iso = check_isotone(u)
    phi = check_property_phi(u)
    lbd = check_lower_bounded_level_sets(u)
    side_b = iso.ok and phi.ok and lbd.ok
    sides = {"definition": side_a, "isotone+phi+lower-bounded": side_b}
    ok = side_a == side_b
    if u.poset.is_inf_semilattice():
        side_c = True
        for i, x in enumerate(u.poset.elements):
            if not side_c:
                break
            for y in u.poset.elements[i:]:
                m = u.poset.meet(x, y)
                if not u.scale.eq(u.values[m], min(u.values[x], u.values[y])):
                    side_c = False
                    break
        sides["meet-homomorphism"] = side_c
        ok = ok and side_a == side_c
    detail = ", ".join(f"{k}={v}" for k, v in sides.items())
    return Certificate(
        ok,
        "characterization-equivalence",
        witnesses=() if ok else tuple(u.poset.elements[:1]),
        detail=detail,
        data={"sides": sides},
    )


def verify_galois(
    u: TabulatedUtility, dual_table: Optional[Dict[Any, Element]] = None
) -> Certificate:
    """Exhaustive two-sided adjunction check: x >= u#(lam) iff u(x) >= lam."""
    if dual_table is None:
        cert = certify_regular(u)
        if not cert.ok:
            raise OrderError("no dual table: utility is not regular")
        dual_table = cert.dual_table
    poset = u.poset
    for lam, d in dual_table.items():
        for x in poset.elements:
            lhs = poset.leq(d, x)
            rhs = u.scale.le(lam, u.values[x])
            if lhs != rhs:
                return Certificate(
                    False,
                    "galois-adjunction",
                    witnesses=(x, lam),
                    detail=f"x>=u#({lam!r}) is {lhs} but u(x)>={lam!r} is {rhs}",
                )
    return Certificate(True, "galois-adjunction", dual_table=dict(dual_table))


def require_certified(u: TabulatedUtility) -> TabulatedUtility:
    """Certify and return a certified copy, or raise CertificationError."""
    if u.certified:
        return u
    cert = certify_quasi_leontief(u)
    if not cert.ok:
        raise CertificationError(cert)
    return cert.utility
