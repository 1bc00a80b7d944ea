"""Bar-resolution group cohomology with exact coefficients.

Degree-p cochains are functions G^p -> V.  Restricted to word balls they
form a tower: level n holds the values on ball(n)^p (dimension
|B_n|^p * dim V), and the connecting maps are coordinate restrictions.
The coboundary

    (d f)(g_1, ..., g_p) = g_1 . f(g_2, ..., g_p)
                           + sum_{i=1}^{p-1} (-1)^i f(g_1, ..., g_i g_{i+1}, ..., g_p)
                           + (-1)^p f(g_1, ..., g_{p-1})

reads products of pairs, so as a tower map the target level n draws on
source level 2n (word balls multiply into the doubled ball); for finite
groups the balls saturate and the bound is n.  Level maps are produced
row by row and only densified when small enough, which keeps free-group
towers workable.

Flat coordinate layout at level n: tuple index (product enumeration of
the ball, last position fastest) times the coefficient dimension, plus
the coefficient coordinate.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass

from .errors import CertificateError, DepthInsufficientError, ShapeError
from .linalg import LazyRows, Selection, kernel_basis, matrix_image, vec_add
from .towers import DEFAULT_WINDOW, Tower, TowerMap, constant_tower, reindex_cofinal
from .closure import construct_preimage, stabilization_table

__all__ = [
    "CochainPrefix",
    "DefectReport",
    "cochain_tower",
    "coboundary",
    "reindexed_coboundary",
    "coboundary_value",
    "coboundary_apply",
    "cocycle_defect",
    "solve_coboundary",
    "certificate_cochain",
    "finite_cohomology_dims",
]

DEFAULT_MAX_ENTRIES = 1_500_000  # cap for densifying a level map


def _decode_tuple(idx, base, p):
    ks = []
    for _ in range(p):
        idx, k = divmod(idx, base)
        ks.append(k)
    ks.reverse()
    return ks


def _encode_tuple(ks, base):
    idx = 0
    for k in ks:
        idx = idx * base + k
    return idx


# ---------------------------------------------------------------------------
# cochain data


class CochainPrefix:
    """A degree-p cochain materialized on ball(radius)^p.

    `values` holds one coefficient vector per argument tuple, in the
    canonical product enumeration order of the ball.
    """

    __slots__ = ("rep", "degree", "radius", "values")

    def __init__(self, rep, degree, radius, values):
        if degree < 0:
            raise ShapeError(f"cochain degree must be >= 0, got {degree}")
        if radius < 0:
            raise ShapeError(f"block radius must be >= 0, got {radius}")
        ball = rep.group.ball(radius)
        expect = len(ball) ** degree
        values = tuple(tuple(rep.domain.coerce(x) for x in v) for v in values)
        if len(values) != expect:
            raise ShapeError(f"degree-{degree} block on {len(ball)} elements needs "
                             f"{expect} values, got {len(values)}")
        for v in values:
            if len(v) != rep.dim:
                raise ShapeError(f"coefficient vector of length {len(v)}, expected {rep.dim}")
        self.rep = rep
        self.degree = degree
        self.radius = radius
        self.values = values

    @classmethod
    def zero(cls, rep, degree, radius):
        n = len(rep.group.ball(radius)) ** degree
        z = (rep.domain.zero,) * rep.dim
        return cls(rep, degree, radius, (z,) * n)

    @classmethod
    def from_function(cls, rep, degree, radius, fn):
        ball = rep.group.ball(radius)
        vals = [fn(t) for t in itertools.product(ball, repeat=degree)]
        return cls(rep, degree, radius, vals)

    @classmethod
    def from_flat(cls, rep, degree, radius, flat):
        d = rep.dim
        n = len(rep.group.ball(radius)) ** degree
        flat = tuple(flat)
        if len(flat) != n * d:
            raise ShapeError(f"flat vector of length {len(flat)}, expected {n * d}")
        vals = [flat[k * d:(k + 1) * d] for k in range(n)]
        return cls(rep, degree, radius, vals)

    def value(self, g_tuple):
        if len(g_tuple) != self.degree:
            raise ShapeError(f"expected a {self.degree}-tuple, got {len(g_tuple)} entries")
        index = self.rep.group.ball_index(self.radius)
        try:
            ks = [index[g] for g in g_tuple]
        except KeyError:
            raise KeyError(f"argument tuple leaves the radius-{self.radius} block") from None
        return self.values[_encode_tuple(ks, len(index))]

    def as_function(self):
        return self.value

    def restrict(self, radius):
        if radius == self.radius:
            return self
        if radius > self.radius:
            raise ShapeError(f"cannot restrict radius {self.radius} to larger radius {radius}")
        small = len(self.rep.group.ball(radius))
        big = len(self.rep.group.ball(self.radius))
        vals = []
        for idx in range(small ** self.degree):
            ks = _decode_tuple(idx, small, self.degree)
            vals.append(self.values[_encode_tuple(ks, big)])
        return CochainPrefix(self.rep, self.degree, radius, vals)

    def flat(self):
        return tuple(x for v in self.values for x in v)

    def __eq__(self, other):
        return (isinstance(other, CochainPrefix) and other.rep is self.rep
                and other.degree == self.degree and other.radius == self.radius
                and other.values == self.values)

    def __repr__(self):
        return (f"<CochainPrefix degree {self.degree} radius {self.radius} "
                f"({len(self.values)} values)>")


# ---------------------------------------------------------------------------
# towers and coboundary maps


def _ball_sizes(group):
    return lambda n: len(group.ball(n))


def cochain_tower(rep, degree):
    """The tower of degree-`degree` cochain blocks for `rep`."""
    if degree < 0:
        raise ShapeError(f"cochain degree must be >= 0, got {degree}")
    group, domain, d = rep.group, rep.domain, rep.dim
    if degree == 0:
        return constant_tower(domain, d, name=f"C^0({group.kind})")
    size = _ball_sizes(group)

    def dim_fn(n):
        return size(n) ** degree * d

    def connect_fn(n):
        b_small, b_big = size(n), size(n + 1)
        cols = b_big ** degree * d
        col_index = []
        for idx in range(b_small ** degree):
            ks = _decode_tuple(idx, b_small, degree)
            base = _encode_tuple(ks, b_big) * d
            col_index.extend(range(base, base + d))
        return Selection(domain, cols, col_index)

    return Tower(domain, dim_fn, connect_fn, name=f"C^{degree}({group.kind})")


def _coboundary_terms(group, g_tuple):
    """(sign, acting element or None, source tuple) triples of d at g_tuple."""
    p = len(g_tuple)
    terms = [(1, g_tuple[0], tuple(g_tuple[1:]))]
    for i in range(1, p):
        sign = -1 if i % 2 else 1
        merged = g_tuple[:i - 1] + (group.mul(g_tuple[i - 1], g_tuple[i]),) + g_tuple[i + 1:]
        terms.append((sign, None, merged))
    terms.append((-1 if p % 2 else 1, None, tuple(g_tuple[:p - 1])))
    return terms


def coboundary_value(rep, f, g_tuple):
    """d f evaluated at `g_tuple`; `f` is a callable on (p-1)-tuples."""
    dom = rep.domain
    acc = None
    for sign, act_g, src in _coboundary_terms(rep.group, g_tuple):
        vec = tuple(f(src))
        if act_g is not None:
            vec = rep.act(act_g).apply(vec)
        if sign < 0:
            vec = tuple(dom.neg(x) for x in vec)
        acc = vec if acc is None else vec_add(dom, acc, vec)
    return acc


def coboundary_apply(z):
    """d z materialized on the largest uniformly safe block: the same radius
    for finite groups, half the radius otherwise."""
    rep = z.rep
    radius = z.radius if rep.group.is_finite else z.radius // 2
    return CochainPrefix.from_function(rep, z.degree + 1, radius,
                                       lambda t: coboundary_value(rep, z.value, t))


def coboundary(rep, degree):
    """The coboundary d_degree : C^{degree-1} -> C^degree as a band tower map."""
    if degree < 1:
        raise ShapeError(f"coboundary degree must be >= 1, got {degree}")
    group, domain, d = rep.group, rep.domain, rep.dim
    p = degree
    source = cochain_tower(rep, p - 1)
    target = cochain_tower(rep, p)
    finite = group.is_finite

    def index_fn(n):
        return n if finite else 2 * n

    def map_fn(n):
        src_radius = index_fn(n)
        ball = group.ball(n)
        b = len(ball)
        src_index = group.ball_index(src_radius)
        b_src = len(src_index)
        rows = b ** p * d
        cols = (b_src ** (p - 1) if p > 1 else 1) * d
        one = domain.one
        neg_one = domain.neg(one)

        def row_fn(t):
            tuple_idx, r = divmod(t, d)
            g_tuple = tuple(ball[k] for k in _decode_tuple(tuple_idx, b, p))
            entries = {}
            for sign, act_g, src in _coboundary_terms(group, g_tuple):
                base = _encode_tuple([src_index[g] for g in src], b_src) * d
                if act_g is not None:
                    mat_row = rep.act(act_g).data[r]
                    sgn = one if sign > 0 else neg_one
                    for s, a in enumerate(mat_row):
                        if a:
                            col = base + s
                            v = domain.mul(sgn, a)
                            prev = entries.get(col)
                            entries[col] = v if prev is None else domain.add(prev, v)
                else:
                    col = base + r
                    v = one if sign > 0 else neg_one
                    prev = entries.get(col)
                    entries[col] = v if prev is None else domain.add(prev, v)
            return {c: v for c, v in entries.items() if v}

        return LazyRows(domain, rows, cols, row_fn)

    return TowerMap(source, target, index_fn, map_fn,
                    name=f"d_{p}({group.kind})")


_rep_caches = weakref.WeakKeyDictionary()


def _rep_cache(rep):
    got = _rep_caches.get(rep)
    if got is None:
        got = {}
        _rep_caches[rep] = got
    return got


def reindexed_coboundary(rep, degree):
    """coboundary(rep, degree) reindexed to identity level indexing; cached
    per representation so kernel and connect caches are shared."""
    cache = _rep_cache(rep)
    key = ("reindexed", degree)
    got = cache.get(key)
    if got is None:
        got = reindex_cofinal(coboundary(rep, degree))
        cache[key] = got
    return got


# ---------------------------------------------------------------------------
# cocycle checking and solving


@dataclass(frozen=True)
class DefectReport:
    """Result of evaluating d z on every tuple the block can support."""

    degree: int
    radius: int
    checked: int
    defects: tuple

    @property
    def is_cocycle(self):
        return self.checked > 0 and not self.defects


def cocycle_defect(z):
    """Evaluate d z on every (p+1)-tuple whose required reads stay inside
    the radius-`z.radius` block; report the nonzero values."""
    rep = z.rep
    group = rep.group
    if z.degree < 1:
        raise ShapeError("defect checking needs degree >= 1")
    ball = group.ball(z.radius)
    inside = group.ball_index(z.radius)
    zero = (rep.domain.zero,) * rep.dim
    checked = 0
    defects = []
    for t in itertools.product(ball, repeat=z.degree + 1):
        if any(group.mul(t[i], t[i + 1]) not in inside for i in range(len(t) - 1)):
            continue
        checked += 1
        val = coboundary_value(rep, z.value, t)
        if val != zero:
            defects.append((t, val))
    return DefectReport(z.degree, z.radius, checked, tuple(defects))


def solve_coboundary(z, depth, *, window=DEFAULT_WINDOW, strict=False,
                     max_entries=DEFAULT_MAX_ENTRIES):
    """Find a degree-(p-1) cochain whose coboundary matches the cocycle `z`.

    Returns a PreimageCertificate over the reindexed coboundary map (level
    j of its source tower is the block of radius 2j, or j for finite
    groups; use `certificate_cochain` to read the solution back off).
    Raises NotInImageError with the earliest failing level when z is not a
    coboundary on the certified range, and DepthInsufficientError when the
    block is too shallow to certify anything.
    """
    if z.degree < 1:
        raise ShapeError("solving needs degree >= 1")
    if z.radius < 1:
        raise DepthInsufficientError("need a block of radius >= 1")
    report = cocycle_defect(z)
    if report.defects:
        t, _ = report.defects[0]
        raise ValueError(f"not a cocycle on its block: defect at {t!r}")
    rep = z.rep
    tmap = reindexed_coboundary(rep, z.degree)
    depth = min(depth, z.radius)
    if depth < 1:
        raise DepthInsufficientError("requested depth must be >= 1")
    records = stabilization_table(tmap, depth, window=window, max_entries=max_entries)
    while depth >= 1 and records[depth - 1].ell > z.radius:
        depth -= 1
    if depth < 1:
        raise DepthInsufficientError(
            f"stabilization needs level {records[0].ell} but the block has radius {z.radius}")
    records = records[:depth]
    prefix = [z.restrict(j).flat() for j in range(1, records[-1].ell + 1)]
    return construct_preimage(tmap, prefix, depth, records=records,
                              strict=strict, window=window, max_entries=max_entries)


def certificate_cochain(rep, degree, cert, level=None):
    """The certified solution at `level` (default: deepest) as a cochain of
    degree `degree - 1` on its source block."""
    if level is None:
        level = cert.depth
    radius = level if rep.group.is_finite else 2 * level
    return CochainPrefix.from_flat(rep, degree - 1, radius, cert.v[level - 1])


# ---------------------------------------------------------------------------
# finite groups: exact cohomology dimensions


def finite_cohomology_dims(rep, degree, *, max_entries=DEFAULT_MAX_ENTRIES):
    """(dim Z^p, dim B^p, dim H^p) for a finite group, by exact rank
    computations on the saturated blocks.  Also machine-checks the
    inclusion B^p <= Z^p."""
    group = rep.group
    if not group.is_finite:
        raise ShapeError("exact cohomology dimensions need a finite group")
    if degree < 0:
        raise ShapeError(f"degree must be >= 0, got {degree}")
    p = degree
    d_next = coboundary(rep, p + 1).level_matrix(1, max_entries)
    cocycles = kernel_basis(d_next)
    z_dim = cocycles.dim
    if p == 0:
        b_dim = 0
    else:
        d_here = coboundary(rep, p).level_matrix(1, max_entries)
        image = matrix_image(d_here)
        b_dim = image.dim
        if not cocycles.contains(image):
            raise CertificateError("image of d_p escapes the kernel of d_{p+1}")
    return z_dim, b_dim, z_dim - b_dim
