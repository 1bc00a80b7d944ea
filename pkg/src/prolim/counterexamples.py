"""Two boundary cases of the closure phenomenon, computable exactly.

The first is an integer band system p_k - 2 p_{k+1} = q_k: solvable at
every finite level by back-substitution, yet the admissible values of
p_1 form a single residue class mod 2^i at level i, so the minimal
absolute value can grow like 2^i/3 and no global integer solution
exists.  Over a field the very same band map is handled by the closure
solver without fuss -- the dichotomy in executable form.

The second is the subgroup of reals m*sqrt(2) + n*sqrt(3): dense, so any
target is approximable, but only a search with certified error control
can *prove* a hit.  Square roots are kept as decimal lower bounds
a <= sqrt(r) < a + 10^-digits, and every accept/reject decision is made
by integer comparisons that account for the bound error; ambiguous
candidates get their precision doubled until irrationality breaks the
tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import CertificateError, NotAFieldError, ShapeError
from .fields import QQ
from .linalg import Matrix
from .towers import (DEFAULT_WINDOW, BandMapSpec, coordinate_tower, reindex_cofinal,
                     towermap_from_band)
from .closure import construct_preimage, stabilization_table

__all__ = [
    "IntBandSystem",
    "DensityProbe",
    "DensityMatch",
    "example1_per_level_solvable",
    "example1_min_norm",
    "example1_min_norm_series",
    "example1_towermap",
    "example1_over_field",
    "difference_towermap",
    "coordinate_projection_towermap",
    "builtin_towermap",
    "sqrt_decimal",
    "example2_approximate",
]


# ---------------------------------------------------------------------------
# Example 1: the integer band system


@dataclass(frozen=True)
class IntBandSystem:
    """Target prefix q_1..q_D of the band relation p_k - 2 p_{k+1} = q_k."""

    q: tuple

    def __post_init__(self):
        q = tuple(int(x) for x in self.q)
        if any(not isinstance(x, int) for x in self.q):
            raise ShapeError("integer targets only")
        object.__setattr__(self, "q", q)

    @classmethod
    def alternating(cls, depth):
        return cls(tuple(1 - (k % 2) for k in range(depth)))

    @classmethod
    def zero(cls, depth):
        return cls((0,) * depth)

    @classmethod
    def unit(cls, depth):
        return cls((1,) + (0,) * (depth - 1)) if depth else cls(())

    @classmethod
    def from_text(cls, text, depth):
        text = text.strip()
        named = {"alternating": cls.alternating, "zero": cls.zero, "unit": cls.unit}
        if text in named:
            return named[text](depth)
        try:
            entries = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise ValueError(f"unknown target pattern {text!r}: expected "
                             f"alternating|zero|unit or a comma-separated integer list") from None
        if depth > len(entries):
            raise ValueError(f"target list has {len(entries)} entries but depth {depth} was asked")
        return cls(entries[:depth])

    @property
    def depth(self):
        return len(self.q)

    def prefix(self, i):
        if not 0 <= i <= self.depth:
            raise ShapeError(f"level {i} outside the stored prefix of depth {self.depth}")
        return self.q[:i]


def example1_per_level_solvable(sys, i):
    """Level-i truncation is always solvable over the integers: set the
    free tail variable to zero and back-substitute.  Returns (True,
    witness) with the witness checked exactly."""
    q = sys.prefix(i)
    x = [0] * (i + 1)
    for k in range(i - 1, -1, -1):
        x[k] = q[k] + 2 * x[k + 1]
    witness = tuple(x)
    if any(witness[k] - 2 * witness[k + 1] != q[k] for k in range(i)):
        raise CertificateError("back-substitution witness failed to check")
    return True, witness


def example1_min_norm(sys, i):
    """Least |p_1| over all integer solutions of the level-i truncation.

    p_1 ranges over the residue class (sum_k 2^{k-1} q_k) + 2^i Z, so the
    answer is the distance of that class from zero.
    """
    q = sys.prefix(i)
    if i == 0:
        return 0
    s = sum(qk << k for k, qk in enumerate(q))  # q_{k+1} * 2^k
    r = s % (1 << i)
    return min(r, (1 << i) - r)


def example1_min_norm_series(sys, upto=None):
    upto = sys.depth if upto is None else upto
    return tuple(example1_min_norm(sys, i) for i in range(1, upto + 1))


def _band_matrix(domain, rows, coefficient):
    c = domain.coerce(coefficient)
    one, zero = domain.one, domain.zero
    data = tuple(tuple(one if j == k else c if j == k + 1 else zero
                       for j in range(rows + 1)) for k in range(rows))
    return Matrix(domain, data, cols=rows + 1, _coerce=False)


def _band_towermap(domain, coefficient, name):
    source = coordinate_tower(domain, name=f"{name}-source")
    target = coordinate_tower(domain, name=f"{name}-target")
    spec = BandMapSpec(input_level=lambda j: j + 1,
                       level_matrix=lambda j: _band_matrix(domain, j, coefficient))
    return towermap_from_band(spec, source, target, name=name)


def example1_towermap(domain):
    """The band map (p_1 - 2p_2, p_2 - 2p_3, ...) on coordinate towers.
    Output level j reads input coordinates up to j + 1, so the band bound
    is i_j = j + 1; reindex_cofinal turns it identity-indexed."""
    return _band_towermap(domain, -2, "band(1,-2)")


def difference_towermap(domain):
    """The sibling band map with coefficient -1 (successive differences)."""
    return _band_towermap(domain, -1, "band(1,-1)")


def coordinate_projection_towermap(domain):
    """Leading-half projection domain^{2j} -> domain^j; its kernel chains
    shrink one dimension per level and empty out at level 2i."""
    source = coordinate_tower(domain, lambda j: 2 * j, name="proj-source")
    target = coordinate_tower(domain, lambda j: j, name="proj-target")

    def level(j):
        one, zero = domain.one, domain.zero
        data = tuple(tuple(one if t == s else zero for s in range(2 * j))
                     for t in range(j))
        return Matrix(domain, data, cols=2 * j, _coerce=False)

    spec = BandMapSpec(input_level=lambda j: j, level_matrix=level)
    return towermap_from_band(spec, source, target, name="leading-half")


_BUILTIN_MAPS = {
    "example1_field": example1_towermap,
    "example1_integer": example1_towermap,
    "difference_map": difference_towermap,
    "coordinate_projection": coordinate_projection_towermap,
}


def builtin_towermap(name, domain):
    try:
        build = _BUILTIN_MAPS[name]
    except KeyError:
        raise KeyError(f"unknown builtin map {name!r}; have "
                       f"{sorted(_BUILTIN_MAPS)}") from None
    return build(domain)


def example1_over_field(sys, depth, *, domain=QQ, window=DEFAULT_WINDOW):
    """Solve the band system over a field: the closure solver succeeds at
    any depth the target prefix covers, in contrast to the integer case."""
    if not domain.is_field:
        raise NotAFieldError(f"{domain.tag} is not a field; the dichotomy is the point")
    if depth > sys.depth:
        raise ShapeError(f"depth {depth} exceeds the stored target prefix ({sys.depth})")
    tmap = reindex_cofinal(example1_towermap(domain))
    target = [tuple(domain.coerce(x) for x in sys.prefix(j)) for j in range(1, depth + 1)]
    records = stabilization_table(tmap, depth, window=window)
    return construct_preimage(tmap, target, depth, records=records,
                              strict=True, window=window)


# ---------------------------------------------------------------------------
# Example 2: certified density scanning


DEFAULT_RADICANDS = (2, 3)


def sqrt_decimal(n, digits):
    """Largest multiple of 10^-digits whose square is <= n: a Fraction a
    with a <= sqrt(n) < a + 10^-digits."""
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    scale = 10 ** digits
    return Fraction(isqrt(n * scale * scale), scale)


@dataclass(frozen=True)
class DensityProbe:
    """Search instance: approximate `target` by m*sqrt(r1) + n*sqrt(r2)
    with |m|, |n| <= bound, to within `tolerance`."""

    target: Fraction
    tolerance: Fraction
    bound: int
    radicands: tuple = DEFAULT_RADICANDS

    def __post_init__(self):
        object.__setattr__(self, "target", Fraction(self.target))
        object.__setattr__(self, "tolerance", Fraction(self.tolerance))
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.bound < 1:
            raise ValueError("search bound must be >= 1")
        rads = tuple(int(r) for r in self.radicands)
        if len(rads) != 2 or any(r <= 0 for r in rads):
            raise ValueError("need two positive radicands")
        if any(isqrt(r) ** 2 == r for r in rads):
            raise ValueError("radicands must not be perfect squares "
                             "(the scan's termination leans on irrationality)")
        object.__setattr__(self, "radicands", rads)

    def initial_digits(self):
        """Smallest digit count making the worst-case approximation error
        2*bound*10^-digits smaller than tolerance/100."""
        digits = 1
        need = 200 * self.bound * self.tolerance.denominator
        while 10 ** digits * self.tolerance.numerator <= need:
            digits += 1
        return digits


@dataclass(frozen=True)
class DensityMatch:
    """An accepted pair with a certified residual bound
    |m*sqrt(r1) + n*sqrt(r2) - target| <= residual < tolerance."""

    m: int
    n: int
    residual: Fraction
    digits: int


def _shell(radius):
    if radius == 0:
        return ((0, 0),)
    pairs = []
    for m in range(-radius, radius + 1):
        if abs(m) == radius:
            pairs.extend((m, n) for n in range(-radius, radius + 1))
        else:
            pairs.append((m, -radius))
            pairs.append((m, radius))
    return tuple(sorted(pairs))


def _decision(m, n, probe, digits, roots):
    """(verdict, residual_bound) by integer comparison; verdict None means
    the error interval straddles the tolerance at this precision."""
    a, b = roots
    tn, td = probe.target.numerator, probe.target.denominator
    en, ed = probe.tolerance.numerator, probe.tolerance.denominator
    scale = 10 ** digits
    v = (m * a + n * b) * td - tn * scale
    err = (abs(m) + abs(n)) * td
    rhs = en * scale * td
    upper = abs(v) + err
    if upper * ed < rhs:
        return True, Fraction(upper, scale * td)
    if (abs(v) - err) * ed >= rhs:
        return False, None
    return None, None


def _roots(probe, digits, cache):
    got = cache.get(digits)
    if got is None:
        scale2 = 10 ** (2 * digits)
        got = tuple(isqrt(r * scale2) for r in probe.radicands)
        cache[digits] = got
    return got


def example2_approximate(probe, *, digits=None):
    """Scan pairs by increasing max-norm (lexicographic within a shell) and
    return the first certified hit as a DensityMatch, or None if no pair
    within the bound is accepted.

    Every decision is certified at the working precision; a pair whose
    error interval straddles the tolerance is retried at doubled precision
    (termination: m*sqrt(r1) + n*sqrt(r2) is irrational unless m = n = 0,
    so the residual never *equals* the tolerance).
    """
    base_digits = probe.initial_digits() if digits is None else digits
    cache = {}
    for radius in range(probe.bound + 1):
        for m, n in _shell(radius):
            d = base_digits
            while True:
                verdict, residual = _decision(m, n, probe, d, _roots(probe, d, cache))
                if verdict is True:
                    return DensityMatch(m, n, residual, d)
                if verdict is False:
                    break
                if d > 64 * base_digits + 1024:
                    raise RuntimeError(f"undecidable at ({m}, {n}); "
                                       "is the target scale far beyond the tolerance?")
                d *= 2
    return None
