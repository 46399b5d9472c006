"""Divisor classes on the moduli of curves in the basis lambda, psi_j, delta_irr, delta_(i,S).

Implements the theta-divisor pullback for an arbitrary off-wall stability
parameter, the wall-crossing difference, and the Hain, Mueller, and
stable-pairs comparison classes, together with the boundary-twist
coefficients.  Comparisons are formal coefficientwise equalities: the basis
is treated as free for every (g, n).

The binomial coefficient C(m, 2) = m(m-1)/2 is taken over all integers,
negative included; this convention is what makes the pullback formula
telescope against the wall-crossing steps.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import BasisMismatch, InadmissiblePair, NoNegativeDegree
from .graphs import BoundaryPair, admissible_pairs, check_gn
from .stability import (
    StabilityParameter,
    _as_fraction,
    _check_degrees,
    degree_sum,
    polytope_label,
)


def binom2(m: int) -> int:
    """m(m-1)/2 for any integer m (an integer even when m is negative)."""
    return m * (m - 1) // 2


class DivisorClass:
    """A rational coefficient vector over {lambda, psi_1..psi_n, delta_irr, delta_(i,S)}.

    Zero coefficients are dropped on construction, so equality is
    coefficientwise.  Instances are immutable; arithmetic returns new values.
    """

    def __init__(
        self,
        g: int,
        n: int,
        lam=0,
        psi: Mapping[int, Fraction] | None = None,
        delta_irr=0,
        delta: Mapping[BoundaryPair, Fraction] | None = None,
    ):
        check_gn(g, n)
        self.g = g
        self.n = n
        self.lam = _as_fraction(lam)
        self.delta_irr = _as_fraction(delta_irr)

        psi_coeffs = {}
        for j, c in (psi or {}).items():
            if not isinstance(j, int) or not 1 <= j <= n:
                raise BasisMismatch(f"psi index must lie in 1..{n}, got {j!r}")
            c = _as_fraction(c)
            if c != 0:
                psi_coeffs[j] = c

        valid = set(admissible_pairs(g, n))
        delta_coeffs = {}
        for pair, c in (delta or {}).items():
            if pair not in valid:
                raise BasisMismatch(f"delta index {pair} is not admissible for (g,n)=({g},{n})")
            c = _as_fraction(c)
            if c != 0:
                delta_coeffs[pair] = c

        self._psi = psi_coeffs
        self._delta = delta_coeffs

    @property
    def psi(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._psi)

    @property
    def delta(self) -> Mapping[BoundaryPair, Fraction]:
        return MappingProxyType(self._delta)

    def psi_coeff(self, j: int) -> Fraction:
        if not 1 <= j <= self.n:
            raise BasisMismatch(f"psi index must lie in 1..{self.n}, got {j!r}")
        return self._psi.get(j, Fraction(0))

    def delta_coeff(self, pair: BoundaryPair) -> Fraction:
        return self._delta.get(pair, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.lam == 0 and self.delta_irr == 0 and not self._psi and not self._delta

    def _key(self):
        return (
            self.g,
            self.n,
            self.lam,
            tuple(sorted(self._psi.items())),
            self.delta_irr,
            tuple(sorted(self._delta.items(), key=lambda kv: kv[0].sort_key)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self._key() == other._key()

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return class_algebra(self, 1, other, 1)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return class_algebra(self, 1, other, -1)

    def __neg__(self) -> "DivisorClass":
        return self.scaled(-1)

    def scaled(self, c) -> "DivisorClass":
        c = _as_fraction(c)
        return DivisorClass(
            self.g,
            self.n,
            lam=c * self.lam,
            psi={j: c * v for j, v in self._psi.items()},
            delta_irr=c * self.delta_irr,
            delta={p: c * v for p, v in self._delta.items()},
        )

    def __rmul__(self, c) -> "DivisorClass":
        return self.scaled(c)

    def __repr__(self) -> str:
        terms = []
        if self.lam:
            terms.append(f"{self.lam}*lambda")
        for j in sorted(self._psi):
            terms.append(f"{self._psi[j]}*psi_{j}")
        if self.delta_irr:
            terms.append(f"{self.delta_irr}*delta_irr")
        for pair in sorted(self._delta, key=lambda p: p.sort_key):
            terms.append(f"{self._delta[pair]}*delta_{pair}")
        return "DivisorClass({})".format(" + ".join(terms) if terms else "0")


def zero_class(g: int, n: int) -> DivisorClass:
    return DivisorClass(g, n)


def class_algebra(a: DivisorClass, ca, b: DivisorClass, cb) -> DivisorClass:
    """The linear combination ca*a + cb*b, coefficientwise."""
    if (a.g, a.n) != (b.g, b.n):
        raise BasisMismatch(
            f"classes live over different spaces: (g,n)=({a.g},{a.n}) vs ({b.g},{b.n})"
        )
    ca = _as_fraction(ca)
    cb = _as_fraction(cb)
    psi = {j: ca * a.psi_coeff(j) + cb * b.psi_coeff(j) for j in set(a.psi) | set(b.psi)}
    delta = {
        p: ca * a.delta_coeff(p) + cb * b.delta_coeff(p) for p in set(a.delta) | set(b.delta)
    }
    return DivisorClass(
        a.g,
        a.n,
        lam=ca * a.lam + cb * b.lam,
        psi=psi,
        delta_irr=ca * a.delta_irr + cb * b.delta_irr,
        delta=delta,
    )


# -- the five class formulas ---------------------------------------------------


def theta_pullback(phi: StabilityParameter, degrees: Sequence[int]) -> DivisorClass:
    """Pullback of the theta class along the section twisting by the degree vector.

    -lambda + sum_j C(d_j+1, 2) psi_j
    + sum_(i,S) [C(d(i,S)-i+1, 2) - C(d_S-i+1, 2)] delta_(i,S),
    where d(i,S) is the polytope label of phi.
    """
    degrees = _check_degrees(phi.g, phi.n, degrees)
    label = polytope_label(phi)
    psi = {j: binom2(degrees[j - 1] + 1) for j in range(1, phi.n + 1)}
    delta = {}
    for pair in label.pairs:
        d_s = degree_sum(degrees, pair)
        delta[pair] = binom2(label.d(pair) - pair.i + 1) - binom2(d_s - pair.i + 1)
    return DivisorClass(phi.g, phi.n, lam=-1, psi=psi, delta=delta)


def wall_crossing_single(g: int, n: int, pair: BoundaryPair, d: int) -> DivisorClass:
    """Change of the theta class when crossing one wall, from label d-1 to label d: (d-i) delta_(i,S)."""
    check_gn(g, n)
    if not pair.is_admissible(g, n):
        raise InadmissiblePair(f"pair {pair} is not admissible for (g,n)=({g},{n})")
    return DivisorClass(g, n, delta={pair: d - pair.i})


def wall_crossing(phi1: StabilityParameter, phi2: StabilityParameter) -> DivisorClass:
    """Difference of theta classes between two off-wall parameters.

    Computed in closed form, sum of [C(d2-i+1, 2) - C(d1-i+1, 2)] delta_(i,S)
    over the labels of the two parameters, and cross-checked against the
    composition of unit wall crossings.
    """
    if (phi1.g, phi1.n) != (phi2.g, phi2.n):
        raise BasisMismatch(
            f"parameters live over different spaces: ({phi1.g},{phi1.n}) vs ({phi2.g},{phi2.n})"
        )
    label1 = polytope_label(phi1)
    label2 = polytope_label(phi2)
    g, n = phi1.g, phi1.n

    delta = {}
    for pair in label1.pairs:
        delta[pair] = binom2(label2.d(pair) - pair.i + 1) - binom2(label1.d(pair) - pair.i + 1)
    closed = DivisorClass(g, n, delta=delta)

    stepped = zero_class(g, n)
    for pair in label1.pairs:
        d1, d2 = label1.d(pair), label2.d(pair)
        for d in range(d1 + 1, d2 + 1):
            stepped = stepped + wall_crossing_single(g, n, pair, d)
        for d in range(d2 + 1, d1 + 1):
            stepped = stepped - wall_crossing_single(g, n, pair, d)
    assert stepped == closed, "telescoped wall crossings disagree with the closed form"
    return closed


def stable_pairs_class(g: int, n: int, degrees: Sequence[int]) -> DivisorClass:
    """Pullback of the theta divisor of the family of stable semiabelic pairs.

    -lambda + sum_j C(d_j+1, 2) psi_j - sum_(i,S) C(d_S-i+1, 2) delta_(i,S);
    equals the theta pullback for every parameter whose polytope touches the
    canonical one.
    """
    check_gn(g, n)
    degrees = _check_degrees(g, n, degrees)
    psi = {j: binom2(degrees[j - 1] + 1) for j in range(1, n + 1)}
    delta = {
        pair: -binom2(degree_sum(degrees, pair) - pair.i + 1) for pair in admissible_pairs(g, n)
    }
    return DivisorClass(g, n, lam=-1, psi=psi, delta=delta)


def hain_class(g: int, n: int, degrees: Sequence[int]) -> DivisorClass:
    """The theta-function extension: the stable-pairs class plus delta_irr/8."""
    base = stable_pairs_class(g, n, degrees)
    return DivisorClass(
        g,
        n,
        lam=base.lam,
        psi=base.psi,
        delta_irr=Fraction(1, 8),
        delta=base.delta,
    )


def mueller_class(g: int, n: int, degrees: Sequence[int]) -> DivisorClass:
    """The Zariski-closure extension, defined when some degree is negative.

    Pairs whose markings all carry positive degree contribute
    -C(|d_S-i|+1, 2); all others contribute -C(d_S-i+1, 2).
    """
    check_gn(g, n)
    degrees = _check_degrees(g, n, degrees)
    if not any(d < 0 for d in degrees):
        raise NoNegativeDegree(f"at least one degree must be negative, got {degrees}")
    s_plus = {j + 1 for j, d in enumerate(degrees) if d > 0}
    psi = {j: binom2(degrees[j - 1] + 1) for j in range(1, n + 1)}
    delta = {}
    for pair in admissible_pairs(g, n):
        d_s = degree_sum(degrees, pair)
        if pair.S <= s_plus:
            delta[pair] = -binom2(abs(d_s - pair.i) + 1)
        else:
            delta[pair] = -binom2(d_s - pair.i + 1)
    return DivisorClass(g, n, lam=-1, psi=psi, delta=delta)


def mueller_comparison(
    g: int, n: int, degrees: Sequence[int]
) -> tuple[list[BoundaryPair], DivisorClass]:
    """The pairs where the Mueller and stable-pairs classes disagree, and their difference.

    T collects the admissible (i, S) with every degree on S positive and
    d_S < i; the difference class sum_(T) (i - d_S) delta_(i,S) satisfies
    stable_pairs = mueller + diff.
    """
    check_gn(g, n)
    degrees = _check_degrees(g, n, degrees)
    mueller = mueller_class(g, n, degrees)
    t_set = []
    delta = {}
    for pair in admissible_pairs(g, n):
        d_s = degree_sum(degrees, pair)
        if all(degrees[j - 1] > 0 for j in pair.S) and d_s < pair.i:
            t_set.append(pair)
            delta[pair] = pair.i - d_s
    diff = DivisorClass(g, n, delta=delta)
    assert mueller + diff == stable_pairs_class(g, n, degrees), (
        "comparison difference disagrees with the class formulas"
    )
    return t_set, diff


def twist_divisor_coeffs(
    phi: StabilityParameter, degrees: Sequence[int]
) -> dict[BoundaryPair, int]:
    """Coefficients of the S-side boundary components in the twisted marking divisor.

    (i, S) maps to d_S - d(i, S); the result is identically zero exactly when
    phi lies in the polytope of the degree vector's own parameter.
    """
    degrees = _check_degrees(phi.g, phi.n, degrees)
    label = polytope_label(phi)
    return {pair: degree_sum(degrees, pair) - label.d(pair) for pair in label.pairs}
