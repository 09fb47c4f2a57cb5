"""Exact GF(p) linear algebra on the fixed monomial order.

Subspaces store one reduced row echelon matrix per (cdeg, parity) block.
Because the global monomial order sorts by (cdeg, parity) first, blockwise
echelon data concatenates to a global echelon basis; every vector appearing
in the bulk flows is homogeneous, i.e. lives in a single block, which keeps
each elimination dense-small.  Batch reduction uses float64 matrix products,
exact as long as rows * (p-1)^2 stays below 2^53 (asserted).

Derived subalgebras, generated closures and ideal closures all consume a
certified sparse spanning family where one is attached: by bilinearity the
span of pairwise brackets does not depend on the choice of spanning family,
and iterated right-normed brackets of generators span the generated
subalgebra (Jacobi), so bracketing against the family is exact, not a
heuristic.
"""

from __future__ import annotations

import weakref

import numpy as np

from .primefield import finv
from .superalgebra import AlgebraContext, SuperElement


class BlockIndex:
    """Partition of the sorted basis into contiguous (cdeg, parity) blocks."""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        basis = ctx.enumerate_basis()
        self.basis = basis
        self.index_of = {m: i for i, m in enumerate(basis)}
        keys, offset, width = [], {}, {}
        for i, m in enumerate(basis):
            k = (m.cdeg(), m.parity())
            if k not in offset:
                keys.append(k)
                offset[k] = i
                width[k] = 0
            width[k] += 1
        self.keys = keys
        self.offset = offset
        self.width = width
        self.key_pos = {k: j for j, k in enumerate(keys)}
        starts = np.array([offset[k] for k in keys], dtype=np.int64)
        self._starts = starts
        self.key_of_idx = np.searchsorted(starts, np.arange(len(basis)),
                                          side="right") - 1
        self.dim = len(basis)

    def rows_of(self, el: SuperElement):
        """Element -> {block key: (local col array, coeff array)}."""
        per: dict = {}
        for m, c in el:
            k = (m.cdeg(), m.parity())
            per.setdefault(k, ([], []))
            per[k][0].append(self.index_of[m] - self.offset[k])
            per[k][1].append(c)
        return per


_INDEX_CACHE: "weakref.WeakKeyDictionary[AlgebraContext, BlockIndex]" = (
    weakref.WeakKeyDictionary())


def block_index(ctx: AlgebraContext) -> BlockIndex:
    bi = _INDEX_CACHE.get(ctx)
    if bi is None:
        bi = BlockIndex(ctx)
        _INDEX_CACHE[ctx] = bi
    return bi


def _batch_reduce(M: np.ndarray, R: np.ndarray, piv, p: int) -> np.ndarray:
    """M minus its projection onto the echelon rows R, all mod p."""
    M = M % p
    if not len(piv) or not M.shape[0]:
        return M
    assert R.shape[0] * (p - 1) ** 2 < 2 ** 53
    f = M[:, piv].astype(np.float64)
    prod = f @ R.astype(np.float64)
    return (M - prod.astype(np.int64)) % p


class Subspace:
    """Blockwise reduced row echelon span with exact membership tests."""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self.bi = block_index(ctx)
        self._blocks: dict = {}
        self._tail: tuple[np.ndarray, list[int]] | None = None
        self._dim = 0
        self.gen_family: list[SuperElement] | None = None

    @property
    def dim(self) -> int:
        return self._dim

    def copy(self) -> "Subspace":
        out = Subspace(self.ctx)
        for k, (R, piv) in self._blocks.items():
            out._blocks[k] = (R.copy(), list(piv))
        if self._tail is not None:
            out._tail = (self._tail[0].copy(), list(self._tail[1]))
        out._dim = self._dim
        return out

    # ---- block internals -------------------------------------------------

    def block(self, key):
        st = self._blocks.get(key)
        if st is None:
            w = self.bi.width[key]
            st = (np.zeros((0, w), dtype=np.int64), [])
            self._blocks[key] = st
        return st

    def reduce_dense(self, key, M: np.ndarray) -> np.ndarray:
        """Reduce rows (dense in block coordinates) without absorbing."""
        R, piv = self.block(key)
        return _batch_reduce(M, R, piv, self.ctx.p)

    def absorb_dense(self, key, M: np.ndarray) -> int:
        """RREF-absorb dense block rows; returns the rank increase.

        Rows are reduced against the current echelon in bulk, survivors get
        re-echelonized a slice at a time; the loop saturates after at most
        width slices, so large batches cost one matrix product each pass.
        """
        if self._tail is not None and self._tail[1]:
            raise ValueError("cannot add block rows after general rows")
        p = self.ctx.p
        R, piv = self.block(key)
        w = self.bi.width[key]
        before = len(piv)
        M = np.atleast_2d(M)
        while M.shape[0]:
            M = _batch_reduce(M, R, piv, p)
            live = M.any(axis=1)
            if not live.any():
                break
            M = M[live]
            take = min(M.shape[0], 4 * w)
            piv, R = _plain_rref(np.vstack([R, M[:take]]), p)
            R = R[:len(piv)]
            M = M[take:]
        added = len(piv) - before
        if added:
            self._blocks[key] = (R, list(piv))
            self._dim += added
        return added

    # ---- element interface -----------------------------------------------

    def _dense_rows(self, el: SuperElement):
        for k, (cols, cs) in self.bi.rows_of(el).items():
            row = np.zeros(self.bi.width[k], dtype=np.int64)
            row[cols] = cs
            yield k, row

    def add_element(self, el: SuperElement) -> int:
        """Absorb one (cdeg, parity) homogeneous element.

        Splitting an inhomogeneous vector into its graded components would
        silently enlarge the span, so multi-block input raises; use
        add_general for the strict span of an inhomogeneous vector.
        """
        rows = list(self._dense_rows(el))
        if len(rows) > 1:
            raise ValueError("element is not (cdeg, parity) homogeneous; "
                             "use add_general")
        added = 0
        for k, row in rows:
            added += self.absorb_dense(k, row[None, :])
        return added

    def add_elements(self, els) -> int:
        return sum(self.add_element(e) for e in els)

    def _full_residual(self, el: SuperElement) -> np.ndarray:
        """Dense full-width residual after blockwise and tail reduction."""
        p = self.ctx.p
        full = np.zeros(self.bi.dim, dtype=np.int64)
        for k, row in self._dense_rows(el):
            off = self.bi.offset[k]
            full[off:off + len(row)] = self.reduce_dense(k, row[None, :])[0]
        if self._tail is not None and full.any():
            T, tpiv = self._tail
            full = _batch_reduce(full[None, :], T, tpiv, p)[0]
        return full

    def add_general(self, el: SuperElement) -> int:
        """Absorb an arbitrary element without splitting it by blocks.

        The row is first reduced against the block echelons (so tail rows
        never carry block pivot columns), then echelonized into a full
        width tail; membership tests reduce by blocks, then by the tail.
        """
        full = self._full_residual(el)
        if not full.any():
            return 0
        T, tpiv = self._tail if self._tail is not None else (
            np.zeros((0, self.bi.dim), dtype=np.int64), [])
        tpiv, T = _plain_rref(np.vstack([T, full[None, :]]), self.ctx.p)
        self._tail = (T[:len(tpiv)], list(tpiv))
        self._dim += 1
        return 1

    def residual_of(self, el: SuperElement) -> SuperElement:
        full = self._full_residual(el)
        terms = {self.bi.basis[int(c)]: int(full[c])
                 for c in np.flatnonzero(full)}
        return self.ctx.element(terms)

    def contains(self, el: SuperElement) -> bool:
        return not self._full_residual(el).any()

    def coords(self, el: SuperElement) -> np.ndarray | None:
        """Coefficients over the echelon basis rows, or None if outside."""
        if self._tail is not None and self._tail[1]:
            raise ValueError("coords undefined with general rows present")
        out = np.zeros(self._dim, dtype=np.int64)
        row_offsets = self._row_offsets()
        for k, row in self._dense_rows(el):
            R, piv = self.block(key=k)
            if not len(piv):
                if row.any():
                    return None
                continue
            co = row[piv]
            if _batch_reduce(row[None, :], R, piv, self.ctx.p).any():
                return None
            out[row_offsets[k]:row_offsets[k] + len(piv)] = co
        return out

    def _row_offsets(self):
        offs, a = {}, 0
        for k in self.bi.keys:
            st = self._blocks.get(k)
            offs[k] = a
            a += len(st[1]) if st else 0
        return offs

    def basis_elements(self) -> list[SuperElement]:
        out = []
        for k in self.bi.keys:
            st = self._blocks.get(k)
            if not st:
                continue
            R, _ = st
            off = self.bi.offset[k]
            for row in R:
                terms = {self.bi.basis[off + int(c)]: int(row[c])
                         for c in np.flatnonzero(row)}
                out.append(self.ctx.element(terms))
        if self._tail is not None:
            for row in self._tail[0]:
                terms = {self.bi.basis[int(c)]: int(row[c])
                         for c in np.flatnonzero(row)}
                out.append(self.ctx.element(terms))
        return out

    def block_dims(self) -> dict:
        return {k: len(st[1]) for k, st in self._blocks.items() if st[1]}

    def dims_by_gdeg(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (cdeg, _), (_, piv) in self._blocks.items():
            if piv:
                out[cdeg - 2] = out.get(cdeg - 2, 0) + len(piv)
        return out

    def leq(self, other: "Subspace") -> bool:
        other_tail = other._tail is not None and other._tail[1]
        for k, (R, piv) in self._blocks.items():
            if not len(piv):
                continue
            red = other.reduce_dense(k, R)
            if not red.any():
                continue
            if not other_tail:
                return False
            off = self.bi.offset[k]
            T, tpiv = other._tail
            full = np.zeros((red.shape[0], self.bi.dim), dtype=np.int64)
            full[:, off:off + red.shape[1]] = red
            if _batch_reduce(full, T, tpiv, self.ctx.p).any():
                return False
        if self._tail is not None:
            for row in self._tail[0]:
                terms = {self.bi.basis[int(c)]: int(row[c])
                         for c in np.flatnonzero(row)}
                if not other.contains(self.ctx.element(terms)):
                    return False
        return True

    def equals(self, other: "Subspace") -> bool:
        return self._dim == other._dim and self.leq(other)

    # ---- bulk absorption ---------------------------------------------------

    def absorb_bulk(self, pair: np.ndarray, idx: np.ndarray,
                    coeff: np.ndarray) -> int:
        """Absorb sparse rows keyed by pair id; each row must be homogeneous.

        idx carries global sorted positions.  Rows spanning two blocks would
        silently change the span if split, so they raise instead.
        """
        if not len(pair):
            return 0
        kid = self.bi.key_of_idx[idx]
        first = np.concatenate(([True], pair[1:] != pair[:-1]))
        starts = np.flatnonzero(first)
        same = np.concatenate((kid[1:] == kid[:-1], [True]))
        same[starts[1:] - 1] = True
        if not same.all():
            raise ValueError("bulk rows must be (cdeg, parity) homogeneous")
        added = 0
        row_of = np.cumsum(first) - 1
        kfirst = kid[starts]
        entry_key = kfirst[row_of]
        for kpos in np.unique(kfirst):
            key = self.bi.keys[kpos]
            rsel = np.flatnonzero(kfirst == kpos)
            esel = np.flatnonzero(entry_key == kpos)
            local_rows = np.searchsorted(rsel, row_of[esel])
            M = np.zeros((len(rsel), self.bi.width[key]), dtype=np.int64)
            M[local_rows, idx[esel] - self.bi.offset[key]] = coeff[esel]
            added += self.absorb_dense(key, M)
        return added


def span_of(vectors, ctx: AlgebraContext | None = None) -> Subspace:
    """Echelon span; attaches the input list as the certified family."""
    vectors = list(vectors)
    if ctx is None:
        if not vectors:
            raise ValueError("empty span needs an explicit context")
        ctx = vectors[0].ctx
    S = Subspace(ctx)
    S.add_elements(vectors)
    S.gen_family = [v for v in vectors if v]
    return S


def attach_family(S: Subspace, fam) -> None:
    """Certify fam as a spanning family of S, then attach it."""
    fam = [v for v in fam if v]
    check = Subspace(S.ctx)
    for v in fam:
        if not S.contains(v):
            raise ValueError(f"family vector outside the subspace: {v.render()}")
        check.add_element(v)
    if check.dim != S.dim:
        raise ValueError(f"family spans {check.dim} of {S.dim} dimensions")
    S.gen_family = fam


def kernel_of(ctx: AlgebraContext, image_fn, domain_pred=None) -> Subspace:
    """Null space of a graded linear map given on basis monomials.

    image_fn: Monomial -> SuperElement.  domain_pred restricts the domain to
    a subset of the monomial basis (the kernel is then taken inside that
    span).  Images of one input block must stay inside one output block.
    """
    bi = block_index(ctx)
    p = ctx.p
    S = Subspace(ctx)
    by_block: dict = {}
    for m in bi.basis:
        if domain_pred is None or domain_pred(m):
            by_block.setdefault((m.cdeg(), m.parity()), []).append(m)
    for key, monos in by_block.items():
        cols = []
        out_key = None
        for m in monos:
            img = image_fn(m)
            rows = bi.rows_of(img)
            if len(rows) > 1:
                raise ValueError("image is not homogeneous")
            if rows:
                k2 = next(iter(rows))
                if out_key is None:
                    out_key = k2
                elif out_key != k2:
                    raise ValueError("images of one block hit two blocks")
            cols.append(img)
        w_out = bi.width[out_key] if out_key else 1
        M = np.zeros((w_out, len(monos)), dtype=np.int64)
        if out_key:
            off = bi.offset[out_key]
            for j, img in enumerate(cols):
                for mm, c in img:
                    M[bi.index_of[mm] - off, j] = c
        piv, R = _plain_rref(M, p)
        pivset = set(piv)
        off_in = bi.offset[key]
        rows_out, cols_out, vals_out, rid = [], [], [], 0
        for f in range(len(monos)):
            if f in pivset:
                continue
            rows_out.append(rid)
            cols_out.append(bi.index_of[monos[f]] - off_in)
            vals_out.append(1)
            for r, c in enumerate(piv):
                v = int(R[r, f])
                if v:
                    rows_out.append(rid)
                    cols_out.append(bi.index_of[monos[c]] - off_in)
                    vals_out.append((-v) % p)
            rid += 1
        if rid:
            M2 = np.zeros((rid, bi.width[key]), dtype=np.int64)
            M2[rows_out, cols_out] = vals_out
            S.absorb_dense(key, M2)
    return S


def _plain_rref(M: np.ndarray, p: int):
    """In-place RREF; returns (pivot column list, matrix)."""
    M = M % p
    piv = []
    r = 0
    rows, cols = M.shape
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * finv(int(M[r, c]), p)) % p
        f = M[:, c].copy()
        f[r] = 0
        if f.any():
            M = (M - np.outer(f, M[r])) % p
        piv.append(c)
        r += 1
    return piv, M


def divergence_kernel(ctx: AlgebraContext) -> Subspace:
    from .contact_ops import div_lam

    return kernel_of(ctx, lambda m: div_lam(ctx.from_monomial(m)))


def _family_of(h: Subspace):
    return h.gen_family if h.gen_family is not None else h.basis_elements()


def derived_subalgebra(h: Subspace, samples: int = 24, seed: int = 0) -> Subspace:
    """Span of all pairwise brackets of h, via its spanning family.

    Bilinearity makes the result independent of the family choice.  Closure
    of h under the bracket is asserted on random sample pairs first; a
    violation raises with the witness pair.
    """
    ctx = h.ctx
    eng = ctx.engine()
    fam = _family_of(h)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        i, j = int(rng.integers(len(fam))), int(rng.integers(len(fam)))
        br = eng.bracket_elements(fam[i], fam[j])
        if not h.contains(br):
            raise ValueError(
                f"not bracket-closed: [{fam[i].render()}, {fam[j].render()}]")
    P = eng.pack(fam)
    ia, ib = np.triu_indices(len(fam))
    out = Subspace(ctx)
    for pr, gid, c in eng.bracket_pairs(P, P, ia, ib):
        out.absorb_bulk(pr, eng.gid_to_sorted[gid], c)
    return out


def generated_closure(gens, ctx: AlgebraContext | None = None) -> Subspace:
    """Smallest bracket-closed subspace containing gens.

    Right-normed iterated brackets of generators span the generated
    subalgebra (Jacobi rewrites any iterated bracket into right-normed
    ones), so the fixpoint brackets the frontier against the generators
    only.  Generators must be (cdeg, parity) homogeneous.
    """
    gens = [g for g in gens if g]
    if ctx is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit context")
        ctx = gens[0].ctx
    bi = block_index(ctx)
    for g in gens:
        if len(bi.rows_of(g)) > 1:
            raise ValueError("generators must be (cdeg, parity) homogeneous")
    eng = ctx.engine()
    S = Subspace(ctx)
    frontier = [g for g in gens if S.add_element(g)]
    collected = list(frontier)
    G = eng.pack(gens)
    while frontier:
        F = eng.pack(frontier)
        ia = np.repeat(np.arange(len(frontier)), len(gens))
        ib = np.tile(np.arange(len(gens)), len(frontier))
        fresh = []
        for pr, gid, c in eng.bracket_pairs(F, G, ia, ib):
            cuts = np.concatenate(([0], np.flatnonzero(np.diff(pr)) + 1,
                                   [len(pr)]))
            for s, e in zip(cuts[:-1], cuts[1:]):
                el = eng.element_from(gid[s:e], c[s:e])
                if S.add_element(el):
                    fresh.append(el)
        collected.extend(fresh)
        frontier = fresh
    S.gen_family = collected
    return S


def _bulk_coords(ambient: Subspace, pair, idx, coeff, row_offsets):
    """Coordinates of sparse bulk rows over the ambient echelon basis.

    Returns (unique pair ids, coord matrix).  Any row with a component
    outside the ambient raises: the flows calling this assume the ambient
    is bracket-closed and that assumption is verified here for free, since
    the residual falls out of the same reduction that yields coordinates.
    """
    bi = ambient.bi
    p = ambient.ctx.p
    if not len(pair):
        return pair, np.zeros((0, ambient.dim), dtype=np.int64)
    first = np.concatenate(([True], pair[1:] != pair[:-1]))
    rinv = np.cumsum(first) - 1
    upair = pair[first]
    out = np.zeros((len(upair), ambient.dim), dtype=np.int64)
    kid = bi.key_of_idx[idx]
    for kpos in np.unique(kid):
        key = bi.keys[kpos]
        esel = np.flatnonzero(kid == kpos)
        rows_here = np.unique(rinv[esel])
        local = np.searchsorted(rows_here, rinv[esel])
        M = np.zeros((len(rows_here), bi.width[key]), dtype=np.int64)
        M[local, idx[esel] - bi.offset[key]] = coeff[esel]
        R, pv = ambient.block(key)
        if not pv:
            if M.any():
                raise ValueError("ambient is not bracket-closed")
            continue
        if _batch_reduce(M, R, pv, p).any():
            raise ValueError("ambient is not bracket-closed")
        off = row_offsets[key]
        out[rows_here, off:off + len(pv)] = M[:, pv] % p
    return upair, out


def _absorb_track(C, piv, M, p):
    """Echelon-absorb coord rows; returns (C, piv, indices of rows kept).

    The kept rows, together with the previous echelon, span the union; the
    caller uses them as the next bracketing frontier, so overcounting kept
    rows costs time but never correctness.
    """
    taken: list[int] = []
    M = np.atleast_2d(M)
    ids = np.arange(M.shape[0])
    D = M.shape[1]
    while M.shape[0]:
        M = _batch_reduce(M, C, piv, p)
        live = M.any(axis=1)
        if not live.any():
            break
        M = M[live]
        ids = ids[live]
        take = min(M.shape[0], D - len(piv) + 256)
        piv, C = _plain_rref(np.vstack([C, M[:take]]), p)
        C = C[:len(piv)]
        taken.extend(int(i) for i in ids[:take])
        M = M[take:]
        ids = ids[take:]
        if len(piv) == D:
            break
    return C, piv, taken


def ideal_closure(seed: SuperElement, ambient: Subspace,
                  gens=None) -> Subspace:
    """Smallest ambient-stable subspace containing seed.

    Without gens the run brackets against a spanning family of the ambient;
    stability under a spanning family equals stability under the ambient
    (bilinearity).  With gens the run brackets against those vectors only,
    which is exact provided gens generate the ambient as an algebra: the
    stabilizer of the fixpoint is a subalgebra (Jacobi), so containing the
    generators forces it to contain everything.  Callers must certify that
    premise (generated_closure(gens) == ambient) themselves.  The growing
    ideal is tracked in ambient coordinates, which keeps the elimination
    dense and small.  Seeds outside the ambient raise.
    """
    ctx = ambient.ctx
    eng = ctx.engine()
    co = ambient.coords(seed)
    if co is None or not seed:
        raise ValueError("seed is not a nonzero ambient element")
    if gens is not None:
        fam = [g for g in gens if g]
        for g in fam:
            if not ambient.contains(g):
                raise ValueError("generator outside the ambient")
    else:
        fam = _family_of(ambient)
    A = eng.pack(fam)
    D = ambient.dim
    row_offsets = ambient._row_offsets()
    C = np.zeros((0, D), dtype=np.int64)
    piv: list[int] = []
    C, piv, _ = _absorb_track(C, piv, co[None, :], ctx.p)
    frontier = [seed]
    while frontier and len(piv) < D:
        F = eng.pack(frontier)
        ia = np.repeat(np.arange(len(fam)), len(frontier))
        ib = np.tile(np.arange(len(frontier)), len(fam))
        fresh: list[SuperElement] = []
        for pr, gid, c in eng.bracket_pairs(A, F, ia, ib):
            idx = eng.gid_to_sorted[gid]
            starts = np.concatenate(
                ([0], np.flatnonzero(np.diff(pr)) + 1, [len(pr)]))
            npairs = len(starts) - 1
            for lo in range(0, npairs, 8192):
                hi = min(lo + 8192, npairs)
                s, e = starts[lo], starts[hi]
                _, co_rows = _bulk_coords(
                    ambient, pr[s:e], idx[s:e], c[s:e], row_offsets)
                C, piv, taken = _absorb_track(C, piv, co_rows, ctx.p)
                for rid in taken:
                    a, b = starts[lo + rid], starts[lo + rid + 1]
                    fresh.append(eng.element_from(gid[a:b], c[a:b]))
                if len(piv) == D:
                    break
            if len(piv) == D:
                break
        frontier = fresh

    if len(piv) == D:
        return ambient.copy()
    out = Subspace(ctx)
    amb_basis = ambient.basis_elements()
    for row in C:
        el = ctx.element({})
        for k in np.flatnonzero(row):
            el = el + amb_basis[int(k)].scale(int(row[k]))
        out.add_element(el)
    return out
