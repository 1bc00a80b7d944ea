"""Exact dense linear algebra plus canonical subspaces.

Three linear-map representations share a small duck-typed protocol
(`rows`, `cols`, `row_dict`, `apply`, `to_matrix`):

* `Matrix` - immutable dense matrix of raw domain values;
* `Selection` - a 0/1 matrix with exactly one 1 per row (coordinate
  projections, restrictions); composes without densifying;
* `LazyRows` - rows produced on demand by a callback, for maps whose
  dense form would not fit in memory.

Elimination is Gauss-Jordan with zero-skipping, so banded and
selection-shaped inputs cost far less than the dense worst case.
No floating point anywhere.
"""

from __future__ import annotations

from .errors import NotAFieldError, ShapeError, SizeCapError
from .fields import FieldMismatchError

__all__ = [
    "Matrix",
    "Selection",
    "LazyRows",
    "Subspace",
    "rref",
    "kernel_basis",
    "solve_particular",
    "preimage_subspace",
    "matrix_image",
    "compose_maps",
    "matrix_inverse",
    "vec_add",
    "vec_sub",
    "vec_scale",
]

# ---------------------------------------------------------------------------
# vectors (plain tuples of raw values)


def vec_add(domain, u, v):
    return tuple(domain.add(a, b) for a, b in zip(u, v, strict=True))


def vec_sub(domain, u, v):
    return tuple(domain.sub(a, b) for a, b in zip(u, v, strict=True))


def vec_scale(domain, c, u):
    return tuple(domain.mul(c, a) for a in u)


def _is_zero_vec(domain, u):
    z = domain.zero
    return all(a == z for a in u)


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    """Immutable dense matrix; `data` is a tuple of row tuples of raw values."""

    __slots__ = ("domain", "rows", "cols", "data", "_rref")

    def __init__(self, domain, data, cols=None, _coerce=True):
        if _coerce:
            data = tuple(tuple(domain.coerce(x) for x in row) for row in data)
        else:
            data = tuple(tuple(row) for row in data)
        self.domain = domain
        self.rows = len(data)
        if data:
            self.cols = len(data[0])
            if any(len(r) != self.cols for r in data):
                raise ShapeError("ragged rows")
        else:
            if cols is None:
                raise ShapeError("empty matrix needs an explicit column count")
            self.cols = cols
        if cols is not None and data and cols != self.cols:
            raise ShapeError(f"expected {cols} columns, got {self.cols}")
        self.data = data
        self._rref = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, domain, n):
        z, o = domain.zero, domain.one
        return cls(domain, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
                   cols=n, _coerce=False)

    @classmethod
    def zeros(cls, domain, rows, cols):
        z = domain.zero
        return cls(domain, tuple((z,) * cols for _ in range(rows)), cols=cols, _coerce=False)

    @classmethod
    def from_columns(cls, domain, columns, rows=None):
        cols = tuple(tuple(domain.coerce(x) for x in c) for c in columns)
        if cols:
            rows = len(cols[0])
        elif rows is None:
            raise ShapeError("empty column list needs an explicit row count")
        data = tuple(tuple(c[r] for c in cols) for r in range(rows))
        return cls(domain, data, cols=len(cols), _coerce=False)

    @classmethod
    def stack(cls, domain, matrices, cols=None):
        data = []
        for m in matrices:
            if m.domain != domain:
                raise FieldMismatchError("stacking matrices over different domains")
            if cols is None:
                cols = m.cols
            elif m.cols != cols:
                raise ShapeError("stacking matrices of different widths")
            data.extend(m.data)
        if cols is None:
            raise ShapeError("empty stack needs an explicit column count")
        return cls(domain, tuple(data), cols=cols, _coerce=False)

    # -- protocol ------------------------------------------------------------

    def row_dict(self, t):
        return {j: v for j, v in enumerate(self.data[t]) if v}

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ShapeError(f"matrix is {self.rows}x{self.cols}, vector has {len(vec)} entries")
        dom = self.domain
        out = []
        for row in self.data:
            s = dom.zero
            for a, x in zip(row, vec):
                if a and x:
                    s = dom.add(s, dom.mul(a, x))
            out.append(s)
        return tuple(out)

    def to_matrix(self, max_entries=None):
        if max_entries is not None and self.rows * self.cols > max_entries:
            raise SizeCapError(f"{self.rows}x{self.cols} exceeds cap {max_entries}")
        return self

    # -- arithmetic ----------------------------------------------------------

    def _peer(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.domain != self.domain:
            raise FieldMismatchError(f"{self.domain.tag} vs {other.domain.tag}")
        return other

    def __add__(self, other):
        other = self._peer(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("adding matrices of different shapes")
        dom = self.domain
        return Matrix(dom, tuple(tuple(dom.add(a, b) for a, b in zip(r1, r2))
                                 for r1, r2 in zip(self.data, other.data)),
                      cols=self.cols, _coerce=False)

    def __sub__(self, other):
        other = self._peer(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("subtracting matrices of different shapes")
        dom = self.domain
        return Matrix(dom, tuple(tuple(dom.sub(a, b) for a, b in zip(r1, r2))
                                 for r1, r2 in zip(self.data, other.data)),
                      cols=self.cols, _coerce=False)

    def __neg__(self):
        dom = self.domain
        return Matrix(dom, tuple(tuple(dom.neg(a) for a in row) for row in self.data),
                      cols=self.cols, _coerce=False)

    def scale(self, c):
        dom = self.domain
        c = dom.coerce(c)
        return Matrix(dom, tuple(tuple(dom.mul(c, a) for a in row) for row in self.data),
                      cols=self.cols, _coerce=False)

    def __matmul__(self, other):
        if isinstance(other, Selection):
            return compose_maps(self, other)
        other = self._peer(other)
        if self.cols != other.rows:
            raise ShapeError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        dom = self.domain
        z = dom.zero
        bdata = other.data
        out = []
        for arow in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(arow):
                if not a:
                    continue
                for j, b in enumerate(bdata[k]):
                    if b:
                        acc[j] = dom.add(acc[j], dom.mul(a, b))
            out.append(tuple(acc))
        return Matrix(dom, tuple(out), cols=other.cols, _coerce=False)

    def transpose(self):
        if self.rows == 0:
            return Matrix(self.domain, ((),) * self.cols if self.cols else (),
                          cols=0, _coerce=False)
        return Matrix(self.domain, tuple(zip(*self.data)), cols=self.rows, _coerce=False)

    def is_zero(self):
        z = self.domain.zero
        return all(a == z for row in self.data for a in row)

    # -- comparison / display --------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.domain == self.domain
                and other.cols == self.cols and other.data == self.data)

    def __hash__(self):
        return hash((self.domain, self.cols, self.data))

    def __repr__(self):
        if self.rows * self.cols > 64:
            return f"<Matrix {self.rows}x{self.cols} over {self.domain.tag}>"
        body = "; ".join(" ".join(self.domain.format(a) for a in row) for row in self.data)
        return f"Matrix[{body}]"

    def format_rows(self):
        """Rows as lists of serialized scalar strings (for JSON)."""
        fmt = self.domain.format
        return [[fmt(a) for a in row] for row in self.data]


class Selection:
    """A map sending coordinate `col_index[t]` of the source to output `t`."""

    __slots__ = ("domain", "rows", "cols", "col_index")

    def __init__(self, domain, cols, col_index):
        col_index = tuple(col_index)
        if any(c < 0 or c >= cols for c in col_index):
            raise ShapeError("selection index out of range")
        self.domain = domain
        self.rows = len(col_index)
        self.cols = cols
        self.col_index = col_index

    @classmethod
    def identity(cls, domain, n):
        return cls(domain, n, range(n))

    @classmethod
    def leading(cls, domain, rows, cols):
        """Projection onto the first `rows` coordinates of a `cols`-dim space."""
        if rows > cols:
            raise ShapeError("leading projection cannot gain coordinates")
        return cls(domain, cols, range(rows))

    def row_dict(self, t):
        return {self.col_index[t]: self.domain.one}

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ShapeError(f"selection is {self.rows}x{self.cols}, vector has {len(vec)}")
        return tuple(vec[c] for c in self.col_index)

    def to_matrix(self, max_entries=None):
        if max_entries is not None and self.rows * self.cols > max_entries:
            raise SizeCapError(f"{self.rows}x{self.cols} exceeds cap {max_entries}")
        z, o = self.domain.zero, self.domain.one
        data = []
        for c in self.col_index:
            row = [z] * self.cols
            row[c] = o
            data.append(tuple(row))
        return Matrix(self.domain, tuple(data), cols=self.cols, _coerce=False)

    def is_identity(self):
        return self.rows == self.cols and self.col_index == tuple(range(self.cols))

    def __eq__(self, other):
        return (isinstance(other, Selection) and other.domain == self.domain
                and other.cols == self.cols and other.col_index == self.col_index)

    def __hash__(self):
        return hash((self.domain, self.cols, self.col_index))

    def __repr__(self):
        return f"<Selection {self.rows}x{self.cols}>"


class LazyRows:
    """Linear map whose rows are produced on demand by `row_fn(t) -> dict`."""

    _CACHE_LIMIT = 20000

    __slots__ = ("domain", "rows", "cols", "_row_fn", "_cache")

    def __init__(self, domain, rows, cols, row_fn):
        self.domain = domain
        self.rows = rows
        self.cols = cols
        self._row_fn = row_fn
        self._cache = {} if rows <= self._CACHE_LIMIT else None

    def row_dict(self, t):
        if self._cache is not None:
            try:
                return self._cache[t]
            except KeyError:
                row = self._row_fn(t)
                self._cache[t] = row
                return row
        return self._row_fn(t)

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ShapeError(f"map is {self.rows}x{self.cols}, vector has {len(vec)}")
        dom = self.domain
        out = []
        for t in range(self.rows):
            s = dom.zero
            for j, a in self.row_dict(t).items():
                x = vec[j]
                if x:
                    s = dom.add(s, dom.mul(a, x))
            out.append(s)
        return tuple(out)

    def to_matrix(self, max_entries=None):
        if max_entries is not None and self.rows * self.cols > max_entries:
            raise SizeCapError(f"{self.rows}x{self.cols} exceeds cap {max_entries}")
        z = self.domain.zero
        data = []
        for t in range(self.rows):
            row = [z] * self.cols
            for j, a in self.row_dict(t).items():
                row[j] = a
            data.append(tuple(row))
        return Matrix(self.domain, tuple(data), cols=self.cols, _coerce=False)

    def __repr__(self):
        return f"<LazyRows {self.rows}x{self.cols}>"


def compose_maps(a, b, max_entries=None):
    """The composition a . b (apply `b` first) without needless densification."""
    if a.domain != b.domain:
        raise FieldMismatchError(f"{a.domain.tag} vs {b.domain.tag}")
    if a.cols != b.rows:
        raise ShapeError(f"{a.rows}x{a.cols} after {b.rows}x{b.cols}")
    if isinstance(a, Selection) and isinstance(b, Selection):
        return Selection(a.domain, b.cols, (b.col_index[c] for c in a.col_index))
    if isinstance(a, Selection):
        if isinstance(b, Matrix):
            return Matrix(a.domain, tuple(b.data[c] for c in a.col_index),
                          cols=b.cols, _coerce=False)
        return LazyRows(a.domain, a.rows, b.cols, lambda t: b.row_dict(a.col_index[t]))
    if isinstance(a, Matrix) and isinstance(b, Selection):
        z = a.domain.zero
        out = []
        for arow in a.data:
            row = [z] * b.cols
            dom = a.domain
            for k, v in enumerate(arow):
                if v:
                    c = b.col_index[k]
                    row[c] = dom.add(row[c], v)
            out.append(tuple(row))
        return Matrix(a.domain, tuple(out), cols=b.cols, _coerce=False)
    if isinstance(a, Matrix) and isinstance(b, Matrix):
        return a @ b
    # fall back to dense composition under the cap
    return a.to_matrix(max_entries) @ b.to_matrix(max_entries)


def product_row(a, b, t):
    """Row `t` of the composition a . b, as a sparse dict."""
    dom = a.domain
    acc = {}
    for k, av in a.row_dict(t).items():
        for c, bv in b.row_dict(k).items():
            prev = acc.get(c)
            acc[c] = dom.mul(av, bv) if prev is None else dom.add(prev, dom.mul(av, bv))
    return {c: v for c, v in acc.items() if v}


# ---------------------------------------------------------------------------
# elimination


def _rref_data(domain, data, ncols, aug=0):
    """Gauss-Jordan on a copy of `data`; pivots are sought left of the last
    `aug` columns.  Returns (rows, pivot_cols)."""
    if not domain.is_field:
        raise NotAFieldError("elimination needs a field; the integer ring is refused")
    rows = [list(r) for r in data]
    m = len(rows)
    pivots = []
    pr = 0
    for c in range(ncols - aug):
        pivot = None
        for r in range(pr, m):
            if rows[r][c]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        prow = rows[pr]
        lead = prow[c]
        if lead != domain.one:
            inv = domain.div(domain.one, lead)
            prow = [domain.mul(inv, v) if v else v for v in prow]
            rows[pr] = prow
        nz = [(j, prow[j]) for j in range(c, ncols) if prow[j]]
        for r in range(m):
            if r == pr:
                continue
            row = rows[r]
            f = row[c]
            if not f:
                continue
            for j, v in nz:
                row[j] = domain.sub(row[j], domain.mul(f, v))
        pivots.append(c)
        pr += 1
    return rows, pivots


def rref(m):
    """Reduced row echelon form.  Returns (canonical matrix, rank, pivot columns)."""
    if m._rref is None:
        rows, pivots = _rref_data(m.domain, m.data, m.cols)
        canon = Matrix(m.domain, tuple(tuple(r) for r in rows), cols=m.cols, _coerce=False)
        m._rref = (canon, len(pivots), tuple(pivots))
    return m._rref


def kernel_basis(m):
    """The solution space of m x = 0, as a canonical `Subspace` of K^cols."""
    reduced, rank, pivots = rref(m)
    dom = m.domain
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for f in free_cols:
        v = [dom.zero] * m.cols
        v[f] = dom.one
        for r, c in enumerate(pivots):
            coeff = reduced.data[r][f]
            if coeff:
                v[c] = dom.neg(coeff)
        vectors.append(tuple(v))
    return Subspace.from_spanning(dom, m.cols, vectors)


def solve_particular(m, b):
    """One exact solution of m x = b with every free variable set to zero,
    or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise ShapeError(f"matrix has {m.rows} rows, right side has {len(b)}")
    dom = m.domain
    b = tuple(dom.coerce(x) for x in b)
    if m.rows == 0:
        return (dom.zero,) * m.cols
    aug = tuple(row + (bx,) for row, bx in zip(m.data, b))
    rows, pivots = _rref_data(dom, aug, m.cols + 1, aug=1)
    rank = len(pivots)
    for r in range(rank, len(rows)):
        if rows[r][m.cols]:
            return None
    x = [dom.zero] * m.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][m.cols]
    return tuple(x)


def matrix_inverse(m):
    """Exact inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise ShapeError("only square matrices invert")
    n = m.rows
    dom = m.domain
    ident = Matrix.identity(dom, n)
    aug = tuple(row + irow for row, irow in zip(m.data, ident.data))
    rows, pivots = _rref_data(dom, aug, 2 * n, aug=n)
    if len(pivots) != n:
        return None
    return Matrix(dom, tuple(tuple(r[n:]) for r in rows), cols=n, _coerce=False)


def matrix_image(m):
    """The column space of `m`, as a subspace of K^rows."""
    return Subspace.from_spanning(m.domain, m.rows, m.transpose().data)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace in canonical form: basis rows in RREF, equality is
    data equality."""

    __slots__ = ("domain", "ambient_dim", "basis", "pivots")

    def __init__(self, domain, ambient_dim, basis, pivots):
        self.domain = domain
        self.ambient_dim = ambient_dim
        self.basis = basis  # Matrix, rows = dim, already RREF with no zero rows
        self.pivots = pivots

    @classmethod
    def from_spanning(cls, domain, ambient_dim, vectors):
        vectors = [tuple(domain.coerce(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeError(f"spanning vector of length {len(v)} in K^{ambient_dim}")
        if not vectors:
            return cls.zero(domain, ambient_dim)
        m = Matrix(domain, tuple(vectors), cols=ambient_dim, _coerce=False)
        reduced, rank, pivots = rref(m)
        basis = Matrix(domain, reduced.data[:rank], cols=ambient_dim, _coerce=False)
        return cls(domain, ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, domain, ambient_dim):
        return cls(domain, ambient_dim, Matrix(domain, (), cols=ambient_dim, _coerce=False), ())

    @classmethod
    def full(cls, domain, ambient_dim):
        return cls(domain, ambient_dim, Matrix.identity(domain, ambient_dim),
                   tuple(range(ambient_dim)))

    @property
    def dim(self):
        return self.basis.rows

    def contains_vector(self, v):
        if len(v) != self.ambient_dim:
            raise ShapeError(f"vector of length {len(v)} in K^{self.ambient_dim}")
        dom = self.domain
        v = [dom.coerce(x) for x in v]
        for row, c in zip(self.basis.data, self.pivots):
            coeff = v[c]
            if coeff:
                for j, a in enumerate(row):
                    if a:
                        v[j] = dom.sub(v[j], dom.mul(coeff, a))
        z = dom.zero
        return all(x == z for x in v)

    def contains(self, other):
        self._peer(other)
        return all(self.contains_vector(row) for row in other.basis.data)

    def intersection(self, other):
        self._peer(other)
        eqs = Matrix.stack(self.domain, [self.equations(), other.equations()],
                           cols=self.ambient_dim)
        return kernel_basis(eqs)

    def __and__(self, other):
        return self.intersection(other)

    def sum(self, other):
        self._peer(other)
        return Subspace.from_spanning(self.domain, self.ambient_dim,
                                      self.basis.data + other.basis.data)

    def __add__(self, other):
        return self.sum(other)

    def equations(self):
        """A matrix N with self = {y : N y = 0}."""
        return kernel_basis(self.basis).basis

    def _peer(self, other):
        if not isinstance(other, Subspace):
            raise TypeError(f"expected Subspace, got {type(other).__name__}")
        if other.domain != self.domain:
            raise FieldMismatchError(f"{self.domain.tag} vs {other.domain.tag}")
        if other.ambient_dim != self.ambient_dim:
            raise ShapeError(f"K^{self.ambient_dim} vs K^{other.ambient_dim}")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.domain == self.domain
                and other.ambient_dim == self.ambient_dim and other.basis == self.basis)

    def __hash__(self):
        return hash((self.domain, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"<Subspace dim {self.dim} of K^{self.ambient_dim} over {self.domain.tag}>"


def preimage_subspace(m, s):
    """{x : m x in s} as a canonical subspace of the source."""
    if s.ambient_dim != m.rows:
        raise ShapeError(f"subspace lives in K^{s.ambient_dim}, map lands in K^{m.rows}")
    if s.domain != m.domain:
        raise FieldMismatchError(f"{m.domain.tag} vs {s.domain.tag}")
    eqs = s.equations()
    if eqs.rows == 0:
        return Subspace.full(m.domain, m.cols)
    return kernel_basis(eqs @ m)
