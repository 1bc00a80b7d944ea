"""Finitely generated group models with deterministic word-ball enumeration,
and exact linear representations.

Balls are enumerated breadth-first by word length with lexicographic
tie-breaking over the alphabet a < a^-1 < b < b^-1 < ...; the identity
comes first, and ball(n) is always a prefix of ball(n+1).  Finite groups
return all elements in table order regardless of the radius.

Element encodings: indices into the multiplication table for finite
groups, freely reduced letter tuples for free groups (letter k > 0 is
generator k, -k its inverse), and exponent vectors for free abelian
groups.
"""

from __future__ import annotations

import itertools

from .errors import ShapeError
from .linalg import Matrix, kernel_basis, matrix_inverse

__all__ = [
    "Group",
    "FiniteTableGroup",
    "FreeGroup",
    "FreeAbelianGroup",
    "cyclic",
    "finite_table",
    "free",
    "free_abelian",
    "ball_enumerate",
    "Representation",
    "fixed_subspace",
]


def _letter_rank(letter):
    # a=+1 -> 0, a^-1=-1 -> 1, b=+2 -> 2, b^-1=-2 -> 3, ...
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


class Group:
    kind = "?"
    is_finite = False

    def __init__(self):
        self._balls = {}
        self._ball_indices = {}

    @property
    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def generators(self):
        """The distinguished generating tuple (representation matrices are
        given in this order)."""
        raise NotImplementedError

    def _enumerate_ball(self, n):
        raise NotImplementedError

    def ball(self, n):
        if n < 0:
            raise ShapeError(f"ball radius must be >= 0, got {n}")
        got = self._balls.get(n)
        if got is None:
            got = tuple(self._enumerate_ball(n))
            self._balls[n] = got
        return got

    def ball_index(self, n):
        got = self._ball_indices.get(n)
        if got is None:
            got = {g: k for k, g in enumerate(self.ball(n))}
            self._ball_indices[n] = got
        return got

    def format_element(self, g):
        raise NotImplementedError


def ball_enumerate(group, n):
    """Deterministic enumeration of the radius-n word ball."""
    return group.ball(n)


class FiniteTableGroup(Group):
    """A finite group given by its multiplication table (indices 0..n-1)."""

    kind = "finite_table"
    is_finite = True

    def __init__(self, table, generator_indices=None):
        super().__init__()
        table = tuple(tuple(row) for row in table)
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square")
        if any(not (0 <= x < n) for row in table for x in row):
            raise ValueError("table entries must be element indices")
        ident = None
        for e in range(n):
            if all(table[e][x] == x and table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("table has no identity element")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == ident and table[b][a] == ident:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ValueError(f"element {a} has no inverse")
        # associativity: all triples for small tables, a fixed sample otherwise
        triples = (itertools.product(range(n), repeat=3) if n <= 24
                   else itertools.islice(itertools.product(range(n), repeat=3), 20000))
        for a, b, c in triples:
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValueError(f"table is not associative at ({a}, {b}, {c})")
        self.table = table
        self.order = n
        self._identity = ident
        self._inv = tuple(inv)
        if generator_indices is None:
            generator_indices = tuple(x for x in range(n) if x != ident)
        self._gens = tuple(generator_indices)
        if self._closure(self._gens) != set(range(n)):
            raise ValueError("given generators do not generate the group")

    def _closure(self, gens):
        seen = {self._identity}
        frontier = [self._identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    @property
    def identity(self):
        return self._identity

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def generators(self):
        return self._gens

    def _enumerate_ball(self, n):
        # the ball saturates immediately: all elements in table order
        return range(self.order)

    def format_element(self, g):
        return f"e{g}"


class CyclicGroup(FiniteTableGroup):
    kind = "cyclic"

    def __init__(self, n):
        if n < 1:
            raise ValueError("cyclic group order must be >= 1")
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        super().__init__(table, generator_indices=(1 % n,))
        self.n = n

    def format_element(self, g):
        if g == 0:
            return "e"
        return "g" if g == 1 else f"g^{g}"


class FreeGroup(Group):
    """Free group of given rank; elements are freely reduced letter tuples."""

    kind = "free"

    def __init__(self, rank):
        super().__init__()
        if rank < 1:
            raise ValueError("free group rank must be >= 1")
        self.rank = rank
        self._alphabet = sorted(
            [k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)],
            key=_letter_rank)

    @property
    def identity(self):
        return ()

    def mul(self, a, b):
        a = list(a)
        i = 0
        while a and i < len(b) and a[-1] == -b[i]:
            a.pop()
            i += 1
        return tuple(a) + tuple(b[i:])

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def generators(self):
        return tuple((k,) for k in range(1, self.rank + 1))

    def _enumerate_ball(self, n):
        out = [()]
        layer = [()]
        for _ in range(n):
            nxt = []
            for w in layer:
                last = w[-1] if w else 0
                for letter in self._alphabet:
                    if letter == -last:
                        continue
                    nxt.append(w + (letter,))
            out.extend(nxt)
            layer = nxt
        return out

    def format_element(self, g):
        if not g:
            return "e"
        names = "abcdefgh"
        parts = []
        for letter in g:
            base = names[abs(letter) - 1] if abs(letter) <= len(names) else f"x{abs(letter)}"
            parts.append(base if letter > 0 else base + "^-1")
        return "*".join(parts)


class FreeAbelianGroup(Group):
    """Z^rank; elements are exponent tuples, word length is the l1 norm."""

    kind = "free_abelian"

    def __init__(self, rank):
        super().__init__()
        if rank < 1:
            raise ValueError("free abelian rank must be >= 1")
        self.rank = rank

    @property
    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def generators(self):
        gens = []
        for k in range(self.rank):
            v = [0] * self.rank
            v[k] = 1
            gens.append(tuple(v))
        return tuple(gens)

    def _word_key(self, g):
        # the normal form a^{x_1} b^{x_2} ... as a sequence of letter ranks
        key = []
        for k, x in enumerate(g):
            rank = 2 * k + (0 if x > 0 else 1)
            key.extend([rank] * abs(x))
        return tuple(key)

    def _enumerate_ball(self, n):
        vectors = []
        for v in itertools.product(range(-n, n + 1), repeat=self.rank):
            if sum(abs(x) for x in v) <= n:
                vectors.append(v)
        vectors.sort(key=lambda v: (sum(abs(x) for x in v), self._word_key(v)))
        return vectors

    def format_element(self, g):
        if all(x == 0 for x in g):
            return "e"
        names = "abcdefgh"
        parts = []
        for k, x in enumerate(g):
            if x == 0:
                continue
            base = names[k] if k < len(names) else f"x{k + 1}"
            parts.append(base if x == 1 else f"{base}^{x}")
        return "*".join(parts)


def cyclic(n):
    return CyclicGroup(n)


def finite_table(table, generator_indices=None):
    return FiniteTableGroup(table, generator_indices)


def free(rank):
    return FreeGroup(rank)


def free_abelian(rank):
    return FreeAbelianGroup(rank)


# ---------------------------------------------------------------------------
# representations


class Representation:
    """An exact linear action: one invertible matrix per group generator.

    Construction validates invertibility and the group's defining
    relations: the full multiplication law for finite groups (built by
    breadth-first closure, checking well-definedness on every edge) and
    pairwise commutation for free abelian groups.  Free groups have no
    relations to check.
    """

    def __init__(self, group, domain, generator_matrices):
        gens = group.generators()
        mats = [m if isinstance(m, Matrix) else Matrix(domain, m) for m in generator_matrices]
        if len(mats) != len(gens):
            raise ShapeError(f"group has {len(gens)} generators, got {len(mats)} matrices")
        if not mats:
            raise ShapeError("need at least one generator matrix")
        dim = mats[0].rows
        for m in mats:
            if m.domain != domain:
                raise ShapeError("generator matrix over the wrong domain")
            if m.rows != dim or m.cols != dim:
                raise ShapeError("generator matrices must be square of equal size")
        invs = []
        for k, m in enumerate(mats):
            mi = matrix_inverse(m)
            if mi is None:
                raise ValueError(f"generator matrix {k} is singular")
            invs.append(mi)
        self.group = group
        self.domain = domain
        self.dim = dim
        self._gen_mats = tuple(mats)
        self._gen_invs = tuple(invs)
        self._cache = {group.identity: Matrix.identity(domain, dim)}
        self._powers = {}
        if group.is_finite:
            self._build_finite_table()
        elif group.kind == "free_abelian":
            for a in range(len(mats)):
                for b in range(a + 1, len(mats)):
                    if mats[a] @ mats[b] != mats[b] @ mats[a]:
                        raise ValueError(f"generator matrices {a} and {b} do not commute")

    @classmethod
    def trivial(cls, group, domain, dim=1):
        ident = Matrix.identity(domain, dim)
        return cls(group, domain, [ident] * len(group.generators()))

    def _build_finite_table(self):
        group = self.group
        gens = group.generators()
        table = {group.identity: Matrix.identity(self.domain, self.dim)}
        frontier = [group.identity]
        while frontier:
            x = frontier.pop()
            for g, mg in zip(gens, self._gen_mats):
                y = group.mul(x, g)
                prod = table[x] @ mg
                seen = table.get(y)
                if seen is None:
                    table[y] = prod
                    frontier.append(y)
                elif seen != prod:
                    raise ValueError(
                        f"matrices violate the group relations at {group.format_element(y)}")
        # confirm the inverse matrices agree with the table
        for g, mi in zip(gens, self._gen_invs):
            if table[group.inv(g)] != mi:
                raise ValueError("matrices violate the group relations on an inverse")
        self._cache = table

    def _gen_power(self, k, e):
        """Matrix of generator k raised to exponent e (cached)."""
        key = (k, e)
        got = self._powers.get(key)
        if got is None:
            if e >= 0:
                base, steps = self._gen_mats[k], e
            else:
                base, steps = self._gen_invs[k], -e
            got = Matrix.identity(self.domain, self.dim)
            for _ in range(steps):
                got = got @ base
            self._powers[key] = got
        return got

    def act(self, g):
        """The matrix of g (cached per element)."""
        got = self._cache.get(g)
        if got is not None:
            return got
        kind = self.group.kind
        if kind == "free":
            m = Matrix.identity(self.domain, self.dim)
            for letter in g:
                m = m @ (self._gen_mats[letter - 1] if letter > 0
                         else self._gen_invs[-letter - 1])
        elif kind == "free_abelian":
            m = Matrix.identity(self.domain, self.dim)
            for k, e in enumerate(g):
                if e:
                    m = m @ self._gen_power(k, e)
        else:
            raise KeyError(f"element {g!r} is not in the group")
        self._cache[g] = m
        return m


def fixed_subspace(rep):
    """{v : g v = v for every group element}, via the generators."""
    blocks = []
    ident = Matrix.identity(rep.domain, rep.dim)
    for g in rep.group.generators():
        blocks.append(rep.act(g) - ident)
    stacked = Matrix.stack(rep.domain, blocks, cols=rep.dim)
    return kernel_basis(stacked)
