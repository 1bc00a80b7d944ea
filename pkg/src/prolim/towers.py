"""Towers of finite-dimensional spaces and the maps between them.

A tower is a sequence of levels V_1, V_2, ... with connecting maps
q_i : V_{i+1} -> V_i, materialized lazily from a provider and immutable
once seen.  `connect(i, j)` composes q_i ... q_{j-1} and is memoized.

A tower map T assigns to each target level j a source level index(j)
(non-decreasing) and a level map T_j : V_{index(j)} -> W_j making all
squares commute; `reindex_cofinal` relabels the source so that
index(j) = j, the form the closure solver works with.

Band specifications describe maps whose target coordinates each read a
bounded-level window of the source; they cover coordinate difference
maps and coboundary maps alike.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    FieldMismatchError,
    LevelProviderError,
    ShapeError,
    SquareCommutationError,
)
from .linalg import Selection, Subspace, compose_maps, product_row, vec_sub

__all__ = [
    "Tower",
    "TowerVector",
    "TowerMap",
    "BandMapSpec",
    "tower_from_levels",
    "coordinate_tower",
    "constant_tower",
    "first_inconsistency",
    "towermap_from_band",
    "towermap_from_levels",
    "verify_squares",
    "reindex_cofinal",
    "stable_images",
    "push_subspace",
]

DEFAULT_WINDOW = 3  # extra unchanged levels required to call a chain stabilized


class Tower:
    """Inverse system of finite-dimensional spaces, materialized lazily.

    `dim_fn(i)` gives the dimension of level i >= 1; `connect_fn(i)` gives
    the connecting map q_i : V_{i+1} -> V_i.  Levels are cached and never
    recomputed, so re-querying yields identical data.
    """

    def __init__(self, domain, dim_fn, connect_fn, name="tower"):
        self.domain = domain
        self.name = name
        self._dim_fn = dim_fn
        self._connect_fn = connect_fn
        self._dims = []
        self._qs = []
        self._connects = {}

    @property
    def explored_depth(self):
        return len(self._dims)

    def dim(self, i):
        if i < 1:
            raise ShapeError(f"levels are indexed from 1, got {i}")
        while len(self._dims) < i:
            k = len(self._dims) + 1
            try:
                d = self._dim_fn(k)
            except LevelProviderError:
                raise
            except Exception as exc:
                raise LevelProviderError(f"{self.name}: no dimension at level {k}: {exc}") from exc
            if not isinstance(d, int) or d < 0:
                raise LevelProviderError(f"{self.name}: bad dimension {d!r} at level {k}")
            self._dims.append(d)
        return self._dims[i - 1]

    def q(self, i):
        """The connecting map q_i : V_{i+1} -> V_i."""
        if i < 1:
            raise ShapeError(f"connecting maps are indexed from 1, got {i}")
        while len(self._qs) < i:
            k = len(self._qs) + 1
            rows, cols = self.dim(k), self.dim(k + 1)
            try:
                m = self._connect_fn(k)
            except LevelProviderError:
                raise
            except Exception as exc:
                raise LevelProviderError(f"{self.name}: no connecting map at level {k}: {exc}") from exc
            if m.domain != self.domain:
                raise FieldMismatchError(f"{self.name}: connecting map at level {k} is over {m.domain.tag}")
            if (m.rows, m.cols) != (rows, cols):
                raise ShapeError(
                    f"{self.name}: q_{k} must be {rows}x{cols}, got {m.rows}x{m.cols}")
            self._qs.append(m)
        return self._qs[i - 1]

    def ensure(self, depth):
        self.dim(depth)
        if depth > 1:
            self.q(depth - 1)
        return self

    def connect(self, i, j):
        """The composite V_j -> V_i for i <= j (identity when i == j)."""
        if i < 1 or j < i:
            raise ShapeError(f"need 1 <= i <= j, got ({i}, {j})")
        if i == j:
            return Selection.identity(self.domain, self.dim(i))
        key = (i, j)
        cached = self._connects.get(key)
        if cached is None:
            cached = compose_maps(self.connect(i, j - 1), self.q(j - 1))
            self._connects[key] = cached
        return cached


def tower_from_levels(domain, dims, q_maps, name="tower"):
    """A tower from explicit finite lists; levels past the lists fail."""
    dims = list(dims)
    q_maps = list(q_maps)

    def dim_fn(i):
        if i > len(dims):
            raise LevelProviderError(f"{name}: only {len(dims)} levels provided")
        return dims[i - 1]

    def connect_fn(i):
        if i > len(q_maps):
            raise LevelProviderError(f"{name}: only {len(q_maps)} connecting maps provided")
        return q_maps[i - 1]

    return Tower(domain, dim_fn, connect_fn, name=name)


def coordinate_tower(domain, dims=None, name="coordinate_projection"):
    """Levels K^{dims(i)} with non-decreasing dims; connecting maps drop the
    trailing coordinates.  Default dims(i) = i."""
    if dims is None:
        dim_of = lambda i: i
    elif callable(dims):
        dim_of = dims
    else:
        seq = list(dims)
        def dim_of(i):
            if i > len(seq):
                raise LevelProviderError(f"{name}: only {len(seq)} levels provided")
            return seq[i - 1]

    def connect_fn(i):
        lo, hi = dim_of(i), dim_of(i + 1)
        if lo > hi:
            raise ShapeError(f"{name}: dims must be non-decreasing, got {lo} then {hi}")
        return Selection.leading(domain, lo, hi)

    return Tower(domain, dim_of, connect_fn, name=name)


def constant_tower(domain, d, name="constant"):
    return Tower(domain, lambda i: d, lambda i: Selection.identity(domain, d), name=name)


# ---------------------------------------------------------------------------
# consistent prefixes


def first_inconsistency(tower, prefix):
    """Earliest level i with q_i(prefix[i]) != prefix[i-1], or None if the
    prefix is consistent.  Entry k of `prefix` lives in level k+1."""
    dom = tower.domain
    vecs = []
    for k, v in enumerate(prefix):
        v = tuple(dom.coerce(x) for x in v)
        if len(v) != tower.dim(k + 1):
            raise ShapeError(f"prefix entry {k + 1} has length {len(v)}, level needs {tower.dim(k + 1)}")
        vecs.append(v)
    for k in range(1, len(vecs)):
        if tower.q(k).apply(vecs[k]) != vecs[k - 1]:
            return k
    return None


@dataclass(frozen=True)
class TowerVector:
    """A consistent prefix (v_1, ..., v_D) of an inverse-limit element."""

    tower: Tower
    prefix: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix",
                           tuple(tuple(self.tower.domain.coerce(x) for x in v) for v in self.prefix))
        bad = first_inconsistency(self.tower, self.prefix)
        if bad is not None:
            raise ValueError(f"prefix inconsistent at level {bad}")

    @property
    def depth(self):
        return len(self.prefix)

    def level(self, i):
        return self.prefix[i - 1]


# ---------------------------------------------------------------------------
# tower maps


class TowerMap:
    """A level-indexed family T_j : V_{index(j)} -> W_j with commuting squares."""

    def __init__(self, source, target, index_fn, level_map_fn, name="towermap"):
        if source.domain != target.domain:
            raise FieldMismatchError("source and target towers over different domains")
        self.source = source
        self.target = target
        self.domain = source.domain
        self.name = name
        self._index_fn = index_fn
        self._level_map_fn = level_map_fn
        self._indices = []
        self._maps = []
        self._kernels = {}
        self._ranks = {}

    def index(self, j):
        if j < 1:
            raise ShapeError(f"levels are indexed from 1, got {j}")
        while len(self._indices) < j:
            k = len(self._indices) + 1
            i = self._index_fn(k)
            if not isinstance(i, int) or i < 1:
                raise ShapeError(f"{self.name}: bad source index {i!r} at level {k}")
            if self._indices and i < self._indices[-1]:
                raise ShapeError(f"{self.name}: index function decreases at level {k}")
            self._indices.append(i)
        return self._indices[j - 1]

    def level_map(self, j):
        if j < 1:
            raise ShapeError(f"levels are indexed from 1, got {j}")
        while len(self._maps) < j:
            k = len(self._maps) + 1
            m = self._level_map_fn(k)
            rows, cols = self.target.dim(k), self.source.dim(self.index(k))
            if m.domain != self.domain:
                raise FieldMismatchError(f"{self.name}: level map {k} over {m.domain.tag}")
            if (m.rows, m.cols) != (rows, cols):
                raise ShapeError(f"{self.name}: T_{k} must be {rows}x{cols}, got {m.rows}x{m.cols}")
            self._maps.append(m)
        return self._maps[j - 1]

    def level_matrix(self, j, max_entries=None):
        return self.level_map(j).to_matrix(max_entries)

    def ensure(self, depth):
        for j in range(1, depth + 1):
            self.level_map(j)
        return self

    def kernel_at(self, j, max_entries=None):
        """ker T_j as a canonical subspace of V_{index(j)} (cached)."""
        sub = self._kernels.get(j)
        if sub is None:
            from .linalg import kernel_basis
            sub = kernel_basis(self.level_matrix(j, max_entries))
            self._kernels[j] = sub
        return sub

    def rank_at(self, j, max_entries=None):
        r = self._ranks.get(j)
        if r is None:
            r = self.source.dim(self.index(j)) - self.kernel_at(j, max_entries).dim
            self._ranks[j] = r
        return r

    def has_identity_index(self, depth):
        return all(self.index(j) == j for j in range(1, depth + 1))


def towermap_from_levels(source, target, indices, level_maps, name="towermap"):
    """A tower map from explicit finite lists of indices and level maps."""
    indices = list(indices)
    level_maps = list(level_maps)

    def index_fn(j):
        if j > len(indices):
            raise LevelProviderError(f"{name}: only {len(indices)} levels provided")
        return indices[j - 1]

    def map_fn(j):
        if j > len(level_maps):
            raise LevelProviderError(f"{name}: only {len(level_maps)} level maps provided")
        return level_maps[j - 1]

    return TowerMap(source, target, index_fn, map_fn, name=name)


@dataclass
class BandMapSpec:
    """Per target level j: the highest source level its coordinates read
    (`input_level(j)`) and the coefficient rows over that source level
    (`level_matrix(j)`, a map V_{input_level(j)} -> W_j)."""

    input_level: object
    level_matrix: object


def towermap_from_band(spec, source, target, *, verify_depth=0, name="band map"):
    """Assemble a tower map from a band spec.  index(j) is the running
    maximum of input levels; rows over lower levels are composed with the
    source connects.  With `verify_depth` > 0 the commuting squares are
    checked immediately and a failure raises."""

    bounds = []

    def input_bound(j):
        while len(bounds) < j:
            k = len(bounds) + 1
            b = spec.input_level(k)
            if not isinstance(b, int) or b < 1:
                raise ShapeError(f"{name}: bad input level {b!r} at {k}")
            bounds.append(b)
        return bounds[j - 1]

    def index_fn(j):
        return max(input_bound(k) for k in range(1, j + 1))

    def map_fn(j):
        b = input_bound(j)
        i_j = max(input_bound(k) for k in range(1, j + 1))
        m = spec.level_matrix(j)
        if m.cols != source.dim(b):
            raise ShapeError(f"{name}: level {j} rows read V_{b} of dim {source.dim(b)}, got {m.cols}")
        if b == i_j:
            return m
        return compose_maps(m, source.connect(b, i_j))

    tmap = TowerMap(source, target, index_fn, map_fn, name=name)
    if verify_depth:
        bad = verify_squares(tmap, verify_depth)
        if bad is not None:
            raise SquareCommutationError(bad, f"{name}: square check failed at {bad}")
    return tmap


def verify_squares(tmap, depth):
    """Check r^j_{j'} . T_j == T_{j'} . q^{index(j)}_{index(j')} for all
    j' < j <= depth, row by row.  Returns the first failing pair (j', j)
    or None.  Works on lazily represented maps without densifying."""
    tmap.ensure(depth)
    for j in range(2, depth + 1):
        t_j = tmap.level_map(j)
        for jp in range(1, j):
            r = tmap.target.connect(jp, j)
            q = tmap.source.connect(tmap.index(jp), tmap.index(j))
            t_jp = tmap.level_map(jp)
            for t in range(tmap.target.dim(jp)):
                if product_row(r, t_j, t) != product_row(t_jp, q, t):
                    return (jp, j)
    return None


def reindex_cofinal(tmap, name=None):
    """Relabel the source along index(.) so the result has index(j) = j.
    Level j of the new source is V_{index(j)}; its connecting maps are the
    composites q^{index(j+1)}_{index(j)}.  Level maps are unchanged."""
    src = tmap.source
    new_source = Tower(
        tmap.domain,
        lambda j: src.dim(tmap.index(j)),
        lambda j: src.connect(tmap.index(j), tmap.index(j + 1)),
        name=f"{src.name}[reindexed]",
    )
    return TowerMap(new_source, tmap.target, lambda j: j, tmap.level_map,
                    name=name or f"{tmap.name}[cofinal]")


# ---------------------------------------------------------------------------
# image chains


def push_subspace(mapping, sub):
    """The image of a subspace under a linear map, in canonical form."""
    return Subspace.from_spanning(mapping.domain, mapping.rows,
                                  [mapping.apply(row) for row in sub.basis.data])


def stable_images(tower, subspaces, i, depth, *, window=DEFAULT_WINDOW):
    """Intersect the chain q^j_i(S_j) for i <= j <= depth.

    `subspaces` maps j (or indexes j - i) to a subspace of V_j.  Returns
    (value, stabilized, ell) where `value` is the running intersection at
    `depth`, `ell` is the least level attaining it, and `stabilized` is
    True when the chain held constant for `window` further levels.
    """
    if depth < i:
        raise ShapeError(f"need depth >= {i}, got {depth}")
    get = subspaces if callable(subspaces) else (lambda j: subspaces[j - i])
    current = None
    ell = i
    for j in range(i, depth + 1):
        s = get(j)
        if s.ambient_dim != tower.dim(j):
            raise ShapeError(f"subspace at level {j} lives in K^{s.ambient_dim}, level has dim {tower.dim(j)}")
        x = push_subspace(tower.connect(i, j), s)
        if current is None:
            current, ell = x, j
        else:
            y = current.intersection(x)
            if y != current:
                current, ell = y, j
    return current, depth - ell >= window, ell
