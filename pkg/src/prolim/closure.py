"""Stabilized kernel images and constructive preimages along tower maps.

For an identity-indexed tower map T (reindex first if necessary) the
chain q^j_i(ker T_j) is non-increasing in j, so it eventually holds a
final value.  `stabilization_index` observes the least level ell(i)
attaining it; the observation is semi-decidable, so a record carries a
`stabilized` flag meaning the value survived a confirmation window, and
`deepen_and_recheck` extends the chain later.

`construct_preimage` runs the level-by-level recursion: solve at level
ell(i), correct the defect against the previous partial solution inside
ker T_{ell(i)}, push down.  Every certificate re-checks its own defining
equations exactly before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CertificateError,
    DepthInsufficientError,
    NotInImageError,
    ShapeError,
    SizeCapError,
    UnstabilizedError,
)
from .linalg import (
    Matrix,
    Subspace,
    _rref_data,
    solve_particular,
    vec_add,
    vec_scale,
    vec_sub,
)
from .towers import DEFAULT_WINDOW, first_inconsistency, push_subspace

__all__ = [
    "StabilizationRecord",
    "PreimageCertificate",
    "stabilization_index",
    "stabilization_table",
    "kernel_level_image",
    "deepen_and_recheck",
    "per_level_membership",
    "construct_preimage",
    "verify_certificate",
]


def _require_identity_index(tmap, depth):
    if not tmap.has_identity_index(depth):
        raise ShapeError("tower map must be reindexed (index(j) = j); call reindex_cofinal first")


@dataclass(frozen=True)
class StabilizationRecord:
    """Observed stabilization of q^j_level(ker T_j) at j = ell."""

    level: int
    ell: int
    stabilized: bool
    kernel_image: Subspace
    chain_depth: int


def _kernel_chain(tmap, i, chain_depth, *, window, max_entries):
    """Walk the chain at base level i up to chain_depth (shrinking the walk
    when level maps exceed the size cap).  Returns a StabilizationRecord."""
    current = None
    ell = i
    reached = i - 1
    for j in range(i, chain_depth + 1):
        try:
            ker = tmap.kernel_at(j, max_entries)
        except SizeCapError:
            if current is None:
                raise
            break
        x = push_subspace(tmap.source.connect(i, j), ker)
        if current is None:
            current, ell = x, j
        elif x != current:
            # chains nest for commuting level maps, so the running value is
            # usually x itself; fall back to a true intersection otherwise
            y = x if current.contains(x) else current.intersection(x)
            if y != current:
                current, ell = y, j
        reached = j
    return StabilizationRecord(
        level=i,
        ell=ell,
        stabilized=reached - ell >= window,
        kernel_image=current,
        chain_depth=reached,
    )


def stabilization_index(tmap, i, depth, *, window=DEFAULT_WINDOW, max_entries=None):
    """Observe ell(i) for the chain q^j_i(ker T_j), j = i..depth."""
    _require_identity_index(tmap, i)
    if i < 1:
        raise ShapeError(f"levels are indexed from 1, got {i}")
    if depth < i:
        raise ShapeError(f"need depth >= {i}, got depth = {depth}")
    return _kernel_chain(tmap, i, depth, window=window, max_entries=max_entries)


def stabilization_table(tmap, depth, *, chain_depth=None, window=DEFAULT_WINDOW,
                        max_entries=None):
    """Records for levels 1..depth, with ell floored to stay non-decreasing.
    Chains run to `chain_depth` (default depth + window) so that the last
    levels can still be confirmed."""
    if chain_depth is None:
        chain_depth = depth + window
    _require_identity_index(tmap, depth)
    records = []
    floor = 1
    for i in range(1, depth + 1):
        rec = _kernel_chain(tmap, i, max(i, chain_depth), window=window,
                            max_entries=max_entries)
        if rec.ell < floor:
            rec = StabilizationRecord(i, floor, rec.stabilized, rec.kernel_image,
                                      rec.chain_depth)
        floor = rec.ell
        records.append(rec)
    return records


def kernel_level_image(tmap, i, depth, *, window=DEFAULT_WINDOW, max_entries=None):
    """q^{ell(i)}_i(ker T_{ell(i)}) together with the stabilized flag.  When
    the flag is False the value is the depth-truncated chain value."""
    rec = stabilization_index(tmap, i, depth, window=window, max_entries=max_entries)
    return rec.kernel_image, rec.stabilized


def deepen_and_recheck(tmap, record, new_depth, *, window=DEFAULT_WINDOW,
                       max_entries=None):
    """Extend a record's chain to `new_depth` and re-observe."""
    if new_depth < record.chain_depth:
        return record
    return _kernel_chain(tmap, record.level, new_depth, window=window,
                         max_entries=max_entries)


# ---------------------------------------------------------------------------
# membership and construction


def per_level_membership(tmap, prefix, *, max_entries=None):
    """Least level j with T_j x = w_j unsolvable, or None when every level
    of the prefix passes the rank test."""
    dom = tmap.domain
    for k, w in enumerate(prefix):
        j = k + 1
        a = tmap.level_matrix(j, max_entries)
        w = tuple(dom.coerce(x) for x in w)
        if len(w) != a.rows:
            raise ShapeError(f"target vector at level {j} has length {len(w)}, level has dim {a.rows}")
        aug = tuple(row + (wx,) for row, wx in zip(a.data, w))
        if a.rows == 0:
            continue
        rows, pivots = _rref_data(dom, aug, a.cols + 1, aug=1)
        if any(rows[r][a.cols] for r in range(len(pivots), len(rows))):
            return j
    return None


@dataclass(frozen=True)
class PreimageCertificate:
    """A checked partial preimage: consistent v_1..v_D in the source tower,
    lifts v~_i at levels ell(i) solving T exactly, and the recorded exact
    check results (always all True for a certificate that was returned)."""

    depth: int
    ell: tuple
    stabilized: tuple
    depth_conditional: bool
    v: tuple
    v_lift: tuple
    target_prefix: tuple
    lift_solves: tuple
    lift_projects: tuple
    consistent: tuple

    def all_checks_pass(self):
        return all(self.lift_solves) and all(self.lift_projects) and all(self.consistent)


def construct_preimage(tmap, prefix, depth, *, records=None, window=DEFAULT_WINDOW,
                       strict=True, max_entries=None):
    """Build a certified preimage prefix of `prefix` under `tmap` to `depth`.

    Preconditions checked here: the map is identity-indexed, the target
    prefix is consistent and long enough (length >= ell(depth)), and every
    level up to ell(depth) passes per_level_membership.  With strict=True
    an unconfirmed stabilization record raises; otherwise the certificate
    is stamped depth-conditional.
    """
    if depth < 1:
        raise ShapeError(f"depth must be >= 1, got {depth}")
    _require_identity_index(tmap, depth)
    dom = tmap.domain
    src, tgt = tmap.source, tmap.target

    if records is None:
        records = stabilization_table(tmap, depth, window=window, max_entries=max_entries)
    if len(records) < depth:
        raise DepthInsufficientError(f"need records for {depth} levels, got {len(records)}")
    records = list(records[:depth])

    if strict:
        for rec in records:
            if not rec.stabilized:
                raise UnstabilizedError(rec.level)

    prefix = tuple(tuple(dom.coerce(x) for x in w) for w in prefix)
    bad = first_inconsistency(tgt, prefix)
    if bad is not None:
        raise ValueError(f"target prefix inconsistent at level {bad}")

    need = records[-1].ell
    if len(prefix) < need:
        raise DepthInsufficientError(
            f"target prefix has {len(prefix)} levels but level ell({depth}) = {need} is needed")
    fail = per_level_membership(tmap, prefix[:need], max_entries=max_entries)
    if fail is not None:
        raise NotInImageError(fail)

    v = []
    lifts = []
    for i in range(1, depth + 1):
        ell = records[i - 1].ell
        a = tmap.level_matrix(ell, max_entries)
        particular = solve_particular(a, prefix[ell - 1])
        if particular is None:  # membership said solvable; cannot happen
            raise CertificateError(f"level {ell} became unsolvable during construction")
        if i == 1:
            lift = particular
        else:
            down = src.connect(i - 1, ell)
            defect = vec_sub(dom, v[i - 2], down.apply(particular))
            kernel = tmap.kernel_at(ell, max_entries)
            pushed = [down.apply(row) for row in kernel.basis.data]
            coeff_matrix = Matrix.from_columns(dom, pushed, rows=src.dim(i - 1))
            coeffs = solve_particular(coeff_matrix, defect)
            if coeffs is None:
                raise DepthInsufficientError(
                    f"defect at level {i} leaves the observed kernel image; "
                    f"stabilization needs a deeper chain")
            correction = (dom.zero,) * src.dim(ell)
            for c, row in zip(coeffs, kernel.basis.data):
                if c:
                    correction = vec_add(dom, correction, vec_scale(dom, c, row))
            lift = vec_add(dom, particular, correction)
        lifts.append(lift)
        v.append(src.connect(i, ell).apply(lift))

    lift_solves = []
    lift_projects = []
    consistent = []
    for i in range(1, depth + 1):
        ell = records[i - 1].ell
        lift_solves.append(tmap.level_map(ell).apply(lifts[i - 1]) == prefix[ell - 1])
        lift_projects.append(src.connect(i, ell).apply(lifts[i - 1]) == v[i - 1])
        if i >= 2:
            consistent.append(src.connect(i - 1, i).apply(v[i - 1]) == v[i - 2])

    cert = PreimageCertificate(
        depth=depth,
        ell=tuple(rec.ell for rec in records),
        stabilized=tuple(rec.stabilized for rec in records),
        depth_conditional=not all(rec.stabilized for rec in records),
        v=tuple(v),
        v_lift=tuple(lifts),
        target_prefix=prefix[:need],
        lift_solves=tuple(lift_solves),
        lift_projects=tuple(lift_projects),
        consistent=tuple(consistent),
    )
    if not cert.all_checks_pass():
        raise CertificateError("constructed certificate failed its own exact checks")
    return cert


def verify_certificate(tmap, cert, *, max_entries=None):
    """Re-check a certificate from scratch: lift equations, projections,
    consistency of the v chain, and agreement with the stored target
    prefix.  Returns (ok, failures) where failures is a list of strings."""
    dom = tmap.domain
    src = tmap.source
    failures = []
    if len(cert.v) != cert.depth or len(cert.v_lift) != cert.depth or len(cert.ell) != cert.depth:
        return False, ["certificate arrays do not match its depth"]
    _require_identity_index(tmap, cert.depth)
    for i in range(1, cert.depth + 1):
        ell = cert.ell[i - 1]
        if ell < i:
            failures.append(f"ell({i}) = {ell} < {i}")
            continue
        lift = tuple(dom.coerce(x) for x in cert.v_lift[i - 1])
        vi = tuple(dom.coerce(x) for x in cert.v[i - 1])
        if len(cert.target_prefix) < ell:
            failures.append(f"target prefix too short for ell({i}) = {ell}")
            continue
        w = tuple(dom.coerce(x) for x in cert.target_prefix[ell - 1])
        if tmap.level_map(ell).apply(lift) != w:
            failures.append(f"lift at level {i} does not solve T_{ell}")
        if src.connect(i, ell).apply(lift) != vi:
            failures.append(f"lift at level {i} does not project to v_{i}")
        if i >= 2:
            prev = tuple(dom.coerce(x) for x in cert.v[i - 2])
            if src.connect(i - 1, i).apply(vi) != prev:
                failures.append(f"v chain breaks between levels {i - 1} and {i}")
    bad = first_inconsistency(tmap.target, cert.target_prefix)
    if bad is not None:
        failures.append(f"stored target prefix inconsistent at level {bad}")
    return not failures, failures
