"""Named verification suites over one parameter instance.

Each suite function takes a Workspace and a numpy Generator and returns
{"name": ..., "checks": [...]} where every check carries a claim
sentence, a stable anchor slug, expected and computed values, and a pass
flag.  Sampled families draw a fixed number of cases from the seeded
generator, so identical configurations reproduce identical reports.
"""

from __future__ import annotations

import itertools
import time
from functools import cached_property

import numpy as np

from . import formulas
from .contact_ops import bracket as op_bracket
from .contact_ops import d_ko, div_lam, index_report
from .derivations import (ad_endo, graded_der_dimension, h_bracket_rhs,
                          lie_parity, normalizer_centralizer, outer_der_suite)
from .linalg import (derived_subalgebra, divergence_kernel,
                     generated_closure, ideal_closure, span_of)
from .primefield import binom
from .spanning import (build_E, build_G, build_S_sets, build_X,
                       exceptional_G, first_derived_proposal,
                       generator_sets, kernel_spanning_list,
                       second_derived_proposal, x_tuples)
from .spanning import delta_prime as enum_delta
from .spanning import sigma_set as enum_sigma
from .superalgebra import AlgebraContext


class Workspace:
    """Lazily built shared objects for one (p, n, t, lambda) instance."""

    def __init__(self, p: int, n: int, t, lam: int):
        self.ctx = AlgebraContext(p, n, tuple(t), lam)

    @cached_property
    def engine(self):
        return self.ctx.engine()

    @cached_property
    def basis(self):
        return list(self.ctx.enumerate_basis())

    @cached_property
    def kernel(self):
        """Divergence kernel, the big algebra of the construction."""
        return divergence_kernel(self.ctx)

    @cached_property
    def derived1(self):
        return derived_subalgebra(self.kernel)

    @cached_property
    def core(self):
        """Second derived term, the simple algebra."""
        return derived_subalgebra(self.derived1)

    @cached_property
    def core_basis(self):
        return self.core.basis_elements()

    @cached_property
    def gens(self):
        """Generating family of the core: both monomial lines plus 1."""
        tf, sf = generator_sets(self.ctx)
        return tf + sf + [self.ctx.one()]

    @cached_property
    def s_sets(self):
        return build_S_sets(self.ctx)


def _plain(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _rec(checks: list, claim: str, anchor: str, expected, computed) -> None:
    e, c = _plain(expected), _plain(computed)
    checks.append({"claim": claim, "anchor": anchor, "expected": e,
                   "computed": c, "pass": e == c})


def _rec_enum(checks: list, claim: str, anchor: str,
              total: int, fails: int) -> None:
    """Record an exhaustive enumeration; empty enumerations never pass."""
    checks.append({"claim": claim, "anchor": anchor,
                   "expected": {"instances": int(total), "failures": 0},
                   "computed": {"instances": int(total),
                                "failures": int(fails)},
                   "pass": bool(total > 0 and fails == 0)})


def _rand_element(ctx, pool, rng, terms: int = 2):
    """Random element supported on at most terms basis monomials."""
    out = {}
    idx = rng.integers(0, len(pool), size=terms)
    for k in idx:
        m = pool[int(k)]
        out[m] = (out.get(m, 0) + int(rng.integers(1, ctx.p))) % ctx.p
    el = ctx.element(out)
    return el if el else ctx.from_monomial(pool[int(idx[0])])


def _parity_pools(basis):
    return ([m for m in basis if m.parity() == 0],
            [m for m in basis if m.parity() == 1])


# -- axioms of the underlying associative structure -------------------------


def suite_algebra_axioms(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    basis = ws.basis
    even, odd = _parity_pools(basis)
    checks: list = []

    fails = 0
    for _ in range(200):
        a = _rand_element(ctx, basis, rng)
        b = _rand_element(ctx, basis, rng)
        c = _rand_element(ctx, basis, rng)
        if (a * b) * c != a * (b * c):
            fails += 1
    _rec_enum(checks, "the divided power product is associative on 200 "
              "random triples", "axioms.assoc", 200, fails)

    fails = 0
    for _ in range(200):
        pa, pb = int(rng.integers(2)), int(rng.integers(2))
        a = _rand_element(ctx, even if pa == 0 else odd, rng)
        b = _rand_element(ctx, even if pb == 0 else odd, rng)
        sg = -1 if pa * pb else 1
        if a * b != (b * a).scale(sg % ctx.p):
            fails += 1
    _rec_enum(checks, "the product is supercommutative for the "
              "multiplication parity on 200 homogeneous pairs",
              "axioms.supercomm", 200, fails)

    fails = total = 0
    for r in range(1, ctx.num_vars + 1):
        for _ in range(30):
            pa = int(rng.integers(2))
            a = _rand_element(ctx, even if pa == 0 else odd, rng)
            b = _rand_element(ctx, basis, rng)
            sg = -1 if ctx.mu(r) * pa else 1
            lhs = (a * b).partial(r)
            rhs = a.partial(r) * b + (a * b.partial(r)).scale(sg % ctx.p)
            total += 1
            if lhs != rhs:
                fails += 1
    _rec_enum(checks, "each left partial satisfies the signed Leibniz rule "
              "on 30 homogeneous pairs per variable",
              "axioms.leibniz", total, fails)

    x1 = ctx.var(1)
    sq = ctx.element({(ctx.epsilon(1, 2), (), 0): 2})
    topm = ctx.element({(ctx.epsilon(1, ctx.pi[0]), (), 0): 1})
    ok = (x1 * x1 == sq) and not (topm * x1)
    _rec(checks, "x_1 squared is twice the second divided power and the "
         "height cap annihilates", "axioms.divided-powers", True, ok)

    v1, v2 = ctx.var(ctx.n + 1), ctx.var(ctx.n + 2)
    vt = ctx.var(ctx.num_vars)
    ok = (not (v1 * v1) and not (vt * vt)
          and v1 * v2 == (v2 * v1).scale(ctx.p - 1))
    _rec(checks, "odd generators square to zero and anticommute",
         "axioms.odd-signs", True, ok)

    one = ctx.one()
    fails = sum(1 for _ in range(20)
                if (lambda a: one * a != a or a * one != a)
                (_rand_element(ctx, basis, rng)))
    _rec_enum(checks, "the unit is neutral on 20 random elements",
              "axioms.unit", 20, fails)

    return {"name": "algebra-axioms", "checks": checks}


# -- bracket identities ------------------------------------------------------


def _tadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _ordered_u(*seq):
    """Sign and sorted tuple of an ordered odd index list."""
    return formulas.sgn(*seq), tuple(sorted(seq))


class _Ident:
    """Shared shorthands for the display identity enumerations."""

    def __init__(self, ws: Workspace):
        self.ctx = ws.ctx
        self.eng = ws.engine
        self.p = ws.ctx.p
        self.n = ws.ctx.n
        self.pi = ws.ctx.pi
        self.zero = (0,) * ws.ctx.n

    def eps(self, i: int, k: int):
        return self.ctx.epsilon(i, k) if k else self.zero

    def prim(self, i: int) -> int:
        return self.ctx.prime_index(i)

    def top(self, alpha, u, q):
        return build_E(self.ctx, alpha, u, q=q, top=True)

    def plain(self, alpha, u):
        return build_E(self.ctx, alpha, u)

    def avec(self, alpha, u, q):
        return build_E(self.ctx, alpha, u, q=q)

    def gvec(self, alpha, u, q):
        return build_G(self.ctx, alpha, u, q)

    def br(self, a, b):
        return self.eng.bracket_elements(a, b)

    def scl(self, v, c):
        return v.scale(c % self.p)

    def itld(self, alpha, u):
        m = self.ctx.monomial(alpha, u, 0)
        return set(index_report(self.ctx, m).Itilde)

    def common_q(self, *labels):
        s: set | None = None
        for alpha, u in labels:
            r = self.itld(alpha, u)
            s = r if s is None else s & r
        return sorted(s or ())


def _ident_height_merge(ix: _Ident):
    """Two single-height tops on a shared slot off both lines merge with
    the height difference as coefficient.  On a slot meeting one of the
    lines the coefficient instead follows the general split formula, so
    those instances are excluded here and covered by the split check."""
    tot = fails = 0
    for i, j in itertools.permutations(range(1, ix.n + 1), 2):
        for ki in range(ix.pi[i - 1] + 1):
            for kj in range(ix.pi[j - 1] + 1):
                a1, a2 = ix.eps(i, ki), ix.eps(j, kj)
                asum = _tadd(a1, a2)
                for q in ix.common_q((a1, ()), (a2, ()), (asum, ())):
                    if q in (i, j):
                        continue
                    lhs = ix.br(ix.top(a1, (), q), ix.top(a2, (), q))
                    rhs = ix.scl(ix.top(asum, (), q), ki - kj)
                    tot += 1
                    fails += lhs != rhs
    return tot, fails


def _ident_height_sum(ix: _Ident):
    """A single-primed top lowers a mixed-height top onto the G vector
    with the height sum as coefficient, on a shared slot off both lines.
    On the i line the coefficient picks up a lambda-dependent deviation
    that only vanishes when n lambda = 1."""
    tot = fails = 0
    for i, j in itertools.permutations(range(1, ix.n + 1), 2):
        uj = (ix.prim(j),)
        for ki in range(ix.pi[i - 1] + 1):
            for kj in range(ix.pi[j - 1]):
                al = _tadd(ix.eps(i, ki), ix.eps(j, kj + 1))
                for q in ix.common_q((al, ()), (ix.zero, uj), (al, uj)):
                    if q in (i, j):
                        continue
                    lhs = ix.br(ix.top(al, (), q), ix.top(ix.zero, uj, q))
                    rhs = ix.scl(ix.gvec(al, uj, q), ki + kj)
                    tot += 1
                    fails += lhs != rhs
    return tot, fails


def _ident_cap_merge(ix: _Ident):
    """At the height caps the merge coefficient closes the two lines."""
    tot = fails = 0
    for i, j in itertools.permutations(range(1, ix.n + 1), 2):
        pii, pij = ix.pi[i - 1], ix.pi[j - 1]
        al = _tadd(ix.eps(i, pii), ix.eps(j, pij - 1))
        ar = ix.eps(j, 1)
        asum = _tadd(ix.eps(i, pii), ix.eps(j, pij))
        c = pij * (pii + pij - 2)
        for q in ix.common_q((al, ()), (ar, ()), (asum, ())):
            lhs = ix.br(ix.top(al, (), q), ix.top(ar, (), q))
            rhs = ix.scl(ix.top(asum, (), q), c)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_plain_top_split(ix: _Ident):
    """A plain mixed monomial against a primed top on slot i splits into
    a lowered top plus a slot transfer."""
    ctx = ix.ctx
    tot = fails = 0
    nl1 = ix.n * ctx.lam - 1
    for i, j in itertools.permutations(range(1, ix.n + 1), 2):
        ui, uj = (ix.prim(i),), (ix.prim(j),)
        for ki in range(ix.pi[i - 1]):
            for kj in range(ix.pi[j - 1]):
                if i not in ix.itld(ix.zero, uj):
                    continue
                low = _tadd(ix.eps(i, ki), ix.eps(j, kj))
                if j not in ix.itld(low, ()):
                    continue
                al = _tadd(ix.eps(i, ki), ix.eps(j, kj + 1))
                lhs = ix.br(ix.plain(al, ()), ix.top(ix.zero, uj, i))
                rhs = (ix.top(low, (), j)
                       + ix.scl(ix.avec(_tadd(ix.eps(i, ki + 1),
                                              ix.eps(j, kj)), ui, j),
                                (ki + 1) * nl1))
                tot += 1
                fails += lhs != rhs
    return tot, fails


def _ident_adjoin_primed(ix: _Ident):
    """A primed top adjoins its odd factor to a height two top, on a
    shared slot off both lines."""
    tot = fails = 0
    for k, i in itertools.permutations(range(1, ix.n + 1), 2):
        a2, ui = ix.eps(k, 2), (ix.prim(i),)
        for q in ix.common_q((a2, ()), (ix.zero, ui), (a2, ui)):
            if q in (k, i):
                continue
            lhs = ix.br(ix.top(a2, (), q), ix.top(ix.zero, ui, q))
            tot += 1
            fails += lhs != ix.top(a2, ui, q)
    return tot, fails


def _ident_double_primed(ix: _Ident):
    """Adjoining the paired odd factor lands on the G vector with
    coefficient -2."""
    tot = fails = 0
    for k, i in itertools.permutations(range(1, ix.n + 1), 2):
        a2 = ix.eps(k, 2)
        ui, uk = (ix.prim(i),), (ix.prim(k),)
        sg, uki = _ordered_u(ix.prim(k), ix.prim(i))
        for q in ix.common_q((a2, ui), (ix.zero, uk), (a2, uki)):
            lhs = ix.br(ix.top(a2, ui, q), ix.top(ix.zero, uk, q))
            rhs = ix.scl(ix.gvec(a2, uki, q), -2 * sg)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_extend_primed(ix: _Ident):
    """The G vector extends by a further primed factor into the slotted
    plain vector, on a slot off the extending line."""
    tot = fails = 0
    for k, i, j in itertools.permutations(range(1, ix.n + 1), 3):
        a2 = ix.eps(k, 2)
        sg, uki = _ordered_u(ix.prim(k), ix.prim(i))
        sg3, ukij = _ordered_u(ix.prim(k), ix.prim(i), ix.prim(j))
        for q in sorted(ix.itld(a2, uki)):
            if q == j:
                continue
            lhs = ix.br(ix.scl(ix.gvec(a2, uki, q), sg),
                        ix.plain(ix.zero, (ix.prim(j),)))
            rhs = ix.scl(ix.avec(a2, ukij, q), sg3)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_strip_primed(ix: _Ident):
    """Multiplying in the even variable x_j strips the primed factor j'
    from the slotted vector, on a slot off the stripped line."""
    tot = fails = 0
    for k, i, j in itertools.permutations(range(1, ix.n + 1), 3):
        a2 = ix.eps(k, 2)
        sg3, ukij = _ordered_u(ix.prim(k), ix.prim(i), ix.prim(j))
        sg2, uki = _ordered_u(ix.prim(k), ix.prim(i))
        for q in range(1, ix.n + 1):
            if q == j:
                continue
            lhs = ix.br(ix.scl(ix.avec(a2, ukij, q), sg3),
                        ix.plain(ix.eps(j, 1), ()))
            rhs = ix.scl(ix.avec(a2, uki, q), -sg2)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_lower_height(ix: _Ident):
    """Multiplying in x_{k'} lowers the even height of the slotted
    vector by one."""
    tot = fails = 0
    for k, i, j in itertools.permutations(range(1, ix.n + 1), 3):
        sg3, ukij = _ordered_u(ix.prim(k), ix.prim(i), ix.prim(j))
        for q in range(1, ix.n + 1):
            lhs = ix.br(ix.scl(ix.avec(ix.eps(k, 2), ukij, q), sg3),
                        ix.plain(ix.zero, (ix.prim(k),)))
            rhs = ix.scl(ix.avec(ix.eps(k, 1), ukij, q), sg3)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_lower_height_mixed(ix: _Ident):
    """On the top vector the same lowering also emits the paired primed
    transfer term."""
    tot = fails = 0
    for k, i in itertools.permutations(range(1, ix.n + 1), 2):
        a2, a1 = ix.eps(k, 2), ix.eps(k, 1)
        ui = (ix.prim(i),)
        sg, uki = _ordered_u(ix.prim(k), ix.prim(i))
        for q in ix.common_q((a2, ui), (a1, ui)):
            lhs = ix.br(ix.top(a2, ui, q), ix.plain(ix.zero, (ix.prim(k),)))
            rhs = ix.top(a1, ui, q) - ix.scl(ix.avec(a2, uki, q), sg)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_primed_extension(ix: _Ident):
    """A plain primed factor extends the odd part of a height one top,
    on a slot off the extending line.  The machine-checked sign of the
    extension is plus in the ascending orientation used here."""
    tot = fails = 0
    for k, i, j in itertools.permutations(range(1, ix.n + 1), 3):
        a1, ui = ix.eps(k, 1), (ix.prim(i),)
        sg, uij = _ordered_u(ix.prim(i), ix.prim(j))
        for q in ix.common_q((a1, ui)):
            if q == j:
                continue
            lhs = ix.br(ix.top(a1, ui, q), ix.plain(ix.zero, (ix.prim(j),)))
            rhs = ix.scl(ix.plain(a1, uij), sg)
            tot += 1
            fails += lhs != rhs
    return tot, fails


def _ident_tail_swap(ix: _Ident):
    """A doubly primed plain monomial against the paired primed top
    swaps its even height for the full odd tail, on a slot off all three
    lines."""
    tot = fails = 0
    for k, i, j in itertools.permutations(range(1, ix.n + 1), 3):
        a1, uk = ix.eps(k, 1), (ix.prim(k),)
        sg, uij = _ordered_u(ix.prim(i), ix.prim(j))
        sg3, ukij = _ordered_u(ix.prim(k), ix.prim(i), ix.prim(j))
        for q in ix.common_q((ix.zero, uk), (ix.zero, uij)):
            if q in (i, j):
                continue
            lhs = ix.br(ix.scl(ix.plain(a1, uij), sg),
                        ix.top(ix.zero, uk, q))
            rhs = (ix.scl(ix.top(ix.zero, uij, q), sg)
                   - ix.scl(ix.avec(a1, ukij, q), sg3))
            tot += 1
            fails += lhs != rhs
    return tot, fails


# Global sign of the split-product coefficient, resolved once by
# computing both sides; the enumeration records it and tests pin it.
SPLIT_SIGN = 1


def _ident_split_product(ix: _Ident):
    """General two-factor split of an admissible monomial: the bracket
    of the two top halves is the three-binomial coefficient times the
    top or G vector of the product, up to one global sign.

    Returns (total, failures under the recorded sign, resolved sign)
    where the resolved sign is +1, -1, or 0 if neither works.
    """
    ctx, p, n = ix.ctx, ix.p, ix.n
    nl = n * ctx.lam
    tot = fp = fm = 0
    for m in ctx.enumerate_basis(lambda mm: mm.eps == 0):
        alpha, u = m.alpha, m.u
        rep = index_report(ctx, m)
        qs = sorted(rep.Itilde)
        if not qs:
            continue
        rhs_base = {q: (ix.gvec(alpha, u, q) if rep.I
                        else ix.top(alpha, u, q)) for q in qs}
        for a1 in itertools.product(*[range(a + 1) for a in alpha]):
            a2 = tuple(x - y for x, y in zip(alpha, a1))
            for r in range(len(u) + 1):
                for u1 in itertools.combinations(u, r):
                    u2 = tuple(v for v in u if v not in u1)
                    if any(a1[k] and (k + 1 + n) in u1 for k in range(n)):
                        continue
                    if any(a2[k] and (k + 1 + n) in u2 for k in range(n)):
                        continue
                    sg = formulas.sgn(*u1, *u2) if u else 1
                    z1 = (sum(a1) + len(u1)) % p
                    z2 = (sum(a2) + len(u2)) % p
                    for q in qs:
                        lo = list(a1)
                        lo[q - 1] -= 1
                        hi = list(a1)
                        hi[q - 1] += 1
                        gam = ((nl - z2) * _mchoose(alpha, lo, p)
                               + (z1 - z2) * _mchoose(alpha, a1, p)
                               - (nl - z1) * _mchoose(alpha, hi, p)) % p
                        lhs = ix.br(ix.top(a1, u1, q), ix.top(a2, u2, q))
                        want = ix.scl(rhs_base[q], sg * gam)
                        tot += 1
                        if lhs != want:
                            fp += 1
                        if lhs != want.scale(p - 1):
                            fm += 1
    sign = 1 if fp == 0 else (-1 if fm == 0 else 0)
    fails = fp if SPLIT_SIGN == 1 else fm
    return tot, fails, sign


def _mchoose(alpha, beta, p: int) -> int:
    """Componentwise binomial product C(alpha, beta) mod p."""
    r = 1
    for a, b in zip(alpha, beta):
        r = r * binom(a, b, p) % p
        if not r:
            return 0
    return r


def suite_bracket_identities(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    eng = ws.engine
    basis = ws.basis
    even, odd = _parity_pools(basis)
    checks: list = []

    fails = 0
    for _ in range(100):
        a = _rand_element(ctx, basis, rng)
        b = _rand_element(ctx, basis, rng)
        if eng.bracket_elements(a, b) != op_bracket(a, b):
            fails += 1
    _rec_enum(checks, "the packed bracket tables agree with the operator "
              "form of the bracket on 100 random pairs",
              "bracket.engine-agrees", 100, fails)

    fails = 0
    for _ in range(100):
        pa, pb = int(rng.integers(2)), int(rng.integers(2))
        a = _rand_element(ctx, even if pa == 0 else odd, rng)
        b = _rand_element(ctx, even if pb == 0 else odd, rng)
        ab = eng.bracket_elements(a, b)
        sg = -1 if (lie_parity(a) * lie_parity(b)) % 2 else 1
        for _ in range(10):
            c = _rand_element(ctx, basis, rng)
            lhs = d_ko(a, d_ko(b, c)) - d_ko(b, d_ko(a, c)).scale(
                sg % ctx.p)
            if lhs != d_ko(ab, c):
                fails += 1
    _rec_enum(checks, "the operator map intertwines brackets of operators "
              "with brackets of contact fields, 100 pairs with 10 probes",
              "bracket.operator-morphism", 1000, fails)

    fails = 0
    for _ in range(200):
        pa, pb = int(rng.integers(2)), int(rng.integers(2))
        a = _rand_element(ctx, even if pa == 0 else odd, rng)
        b = _rand_element(ctx, even if pb == 0 else odd, rng)
        sg = -1 if (lie_parity(a) * lie_parity(b)) % 2 else 1
        if eng.bracket_elements(a, b) != eng.bracket_elements(
                b, a).scale((-sg) % ctx.p):
            fails += 1
    _rec_enum(checks, "the bracket is super skew for the shifted parity "
              "on 200 homogeneous pairs", "bracket.skew", 200, fails)

    fails = 0
    for _ in range(200):
        pa, pb = int(rng.integers(2)), int(rng.integers(2))
        a = _rand_element(ctx, even if pa == 0 else odd, rng)
        b = _rand_element(ctx, even if pb == 0 else odd, rng)
        c = _rand_element(ctx, basis, rng)
        sg = -1 if (lie_parity(a) * lie_parity(b)) % 2 else 1
        lhs = eng.bracket_elements(a, eng.bracket_elements(b, c))
        rhs = (eng.bracket_elements(eng.bracket_elements(a, b), c)
               + eng.bracket_elements(b, eng.bracket_elements(a, c))
               .scale(sg % ctx.p))
        if lhs != rhs:
            fails += 1
    _rec_enum(checks, "the graded Jacobi identity holds for the shifted "
              "parity on 200 homogeneous triples", "bracket.jacobi",
              200, fails)

    ix = _Ident(ws)
    probe = None
    for fn, claim, anchor in (
        (_ident_height_merge,
         "two single-height tops on a shared slot off both lines merge "
         "with the height difference as coefficient",
         "bracket.height-merge"),
        (_ident_height_sum,
         "a single-primed top lowers a mixed-height top onto the G "
         "vector with the height sum as coefficient, off both lines",
         "bracket.height-sum-transfer"),
        (_ident_cap_merge,
         "at the height caps the merge coefficient is pi_j (pi_i + pi_j "
         "- 2)", "bracket.cap-merge"),
        (_ident_plain_top_split,
         "a plain mixed monomial against a primed top splits into a "
         "lowered top plus a weighted slot transfer",
         "bracket.plain-top-split"),
        (_ident_adjoin_primed,
         "a primed top adjoins its odd factor to a height two top, off "
         "both lines", "bracket.adjoin-primed"),
        (_ident_double_primed,
         "adjoining the paired odd factor lands on the G vector with "
         "coefficient -2", "bracket.double-primed"),
        (_ident_extend_primed,
         "the G vector extends by a further primed factor into the "
         "slotted plain vector, off the extending line",
         "bracket.extend-primed"),
        (_ident_strip_primed,
         "multiplying in x_j strips the primed factor j' from the "
         "slotted vector, off the stripped line", "bracket.strip-primed"),
        (_ident_lower_height,
         "multiplying in x_k' lowers the even height of the slotted "
         "vector", "bracket.lower-height"),
        (_ident_lower_height_mixed,
         "on the top vector the lowering also emits the paired primed "
         "transfer term", "bracket.lower-height-mixed"),
        (_ident_primed_extension,
         "a plain primed factor extends the odd part of a height one "
         "top off the extending line, with the recorded plus sign",
         "bracket.primed-extension"),
        (_ident_tail_swap,
         "a doubly primed plain monomial against the paired primed top "
         "swaps its even height for the full odd tail, off all three "
         "lines", "bracket.tail-swap"),
    ):
        tot, fails = fn(ix)
        note = ", all admissible instances"
        if tot == 0:
            # identities needing a slot off three distinct lines have no
            # admissible instance at n = 3; rerun on a four line probe
            if probe is None:
                probe = _Ident(Workspace(ctx.p, 4, (1,) * 4, ctx.lam))
            tot, fails = fn(probe)
            note = ", all admissible instances on a four line probe"
        _rec_enum(checks, claim + note, anchor, tot, fails)

    tot, fails, sign = _ident_split_product(ix)
    _rec_enum(checks, "the two-factor split of an admissible monomial "
              "brackets to the three-binomial coefficient times the "
              "merged vector, all admissible splittings",
              "bracket.split-product", tot, fails)
    _rec(checks, "resolved global sign of the split-product coefficient",
         "bracket.split-product-sign", SPLIT_SIGN, sign)

    return {"name": "bracket-identities", "checks": checks}


# -- spanning families -------------------------------------------------------


def suite_spanning(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    checks: list = []
    sets = ws.s_sets
    vecs = kernel_spanning_list(ctx)

    fails = sum(1 for v in vecs if div_lam(v))
    _rec_enum(checks, "every family vector and the unit lies in the "
              "divergence kernel", "spanning.kernel-membership",
              len(vecs), fails)

    spanned = span_of(vecs, ctx)
    _rec(checks, "rank of S1..S5 plus the unit equals the divergence "
         "nullity", "spanning.rank-equals-nullity",
         {"rank": ws.kernel.dim, "nullity": ws.kernel.dim},
         {"rank": spanned.dim, "nullity": ws.kernel.dim})

    _rec(checks, "the top class count matches its binomial formula",
         "spanning.top-class-count",
         formulas.sigma_binom_sum(ctx.p, ctx.n, ctx.lam, 0),
         len(sets["S5"]))

    bad = sum(1 for lab in sets["S3"]
              if lab.q != index_report(
                  ctx, ctx.monomial(lab.alpha, lab.u, 0)).qmin)
    _rec_enum(checks, "third family labels use the least raisable slot",
              "spanning.least-slot", len(sets["S3"]), bad)

    fails = sum(1 for g in ws.gens if not spanned.contains(g))
    _rec_enum(checks, "both generating families lie inside the kernel "
              "span", "spanning.generators-inside", len(ws.gens), fails)

    low = span_of([lab.element(ctx) for key in ("S1", "S2")
                   for lab in sets[key]], ctx)
    _rec(checks, "the first two families span their closed-form rank",
         "spanning.low-rank", formulas.dim_span_pairs_low(ctx.p, ctx.t),
         low.dim)

    pairs = low.copy()
    gained = pairs.add_elements([lab.element(ctx) for key in ("S3", "S4")
                                 for lab in sets[key]])
    _rec(checks, "the next two families add exactly their closed-form "
         "rank over the first two", "spanning.high-rank",
         formulas.dim_span_pairs_high(ctx.p, ctx.t), gained)

    tail = [lab.element(ctx) for lab in sets["S5"]] + [ctx.one()]
    gained = pairs.add_elements(tail)
    _rec(checks, "the top classes and the unit stack the family ranks "
         "exactly to the kernel dimension", "spanning.stacked-ranks",
         {"dim": ws.kernel.dim, "tail_new": len(tail)},
         {"dim": pairs.dim, "tail_new": gained})

    return {"name": "spanning", "checks": checks}


# -- derived series ----------------------------------------------------------


def suite_derived_series(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    checks: list = []
    kernel, d1, core = ws.kernel, ws.derived1, ws.core

    top_count = (len(ws.s_sets["S5"])
                 + sum(len(x_tuples(ctx, r))
                       for r in sorted(formulas.sigma_set(
                           ctx.p, ctx.n, ctx.lam, 2))))
    _rec(checks, "the kernel-to-first-derived gap counts the top classes",
         "derived.first-gap", top_count, kernel.dim - d1.dim)

    cp = d1.copy()
    extras = [lab.element(ctx) for lab in ws.s_sets["S5"]]
    extras += [build_X(ctx, tup)
               for r in sorted(formulas.sigma_set(ctx.p, ctx.n, ctx.lam, 2))
               for tup in x_tuples(ctx, r)]
    added = cp.add_elements(extras)
    _rec(checks, "the first derived term plus the top classes fills the "
         "kernel directly", "derived.first-decomposition",
         {"new": len(extras), "dim": kernel.dim, "equal": True},
         {"new": added, "dim": cp.dim, "equal": cp.equals(kernel)})

    dprime = formulas.delta_prime(ctx.p, ctx.n, ctx.lam)
    _rec(checks, "the first-to-second gap is the exceptional indicator",
         "derived.second-gap", dprime, d1.dim - core.dim)

    if dprime:
        g = exceptional_G(ctx)
        cp = core.copy()
        cp.add_element(g)
        _rec(checks, "the distinguished vector spans the exceptional gap",
             "derived.exceptional-vector",
             {"in_first": True, "in_core": False, "fills": True},
             {"in_first": d1.contains(g), "in_core": core.contains(g),
              "fills": cp.equals(d1)})
    else:
        _rec(checks, "without the exceptional indicator the series is "
             "stable after one step", "derived.exceptional-vector",
             True, core.equals(d1))

    _rec(checks, "the closed-form dimension matches the computed core",
         "derived.dimension-formula",
         formulas.dim_sko(ctx.p, ctx.n, ctx.t, ctx.lam), core.dim)

    _rec(checks, "the core is perfect",
         "derived.perfect", core.dim, derived_subalgebra(core).dim)

    prop1 = span_of(first_derived_proposal(ctx), ctx)
    _rec(checks, "the explicit first-derived family spans that term",
         "derived.first-proposal",
         {"dim": d1.dim, "inside": True},
         {"dim": prop1.dim, "inside": prop1.leq(d1)})

    prop2 = span_of(second_derived_proposal(ctx), ctx)
    _rec(checks, "the explicit second-derived family spans the core",
         "derived.second-proposal",
         {"dim": core.dim, "inside": True},
         {"dim": prop2.dim, "inside": prop2.leq(core)})

    return {"name": "derived-series", "checks": checks}


# -- simplicity --------------------------------------------------------------


def suite_simplicity(ws: Workspace, rng, trials: int = 2) -> dict:
    ctx = ws.ctx
    checks: list = []
    core = ws.core

    closure = generated_closure(ws.gens, ctx)
    _rec(checks, "the two monomial lines plus the unit generate the whole "
         "core", "simplicity.generators",
         {"dim": core.dim, "equal": True},
         {"dim": closure.dim, "equal": closure.equals(core)})

    cb = ws.core_basis
    fails = 0
    for _ in range(trials):
        i, j = rng.integers(0, len(cb), size=2)
        seed_el = (cb[int(i)].scale(int(rng.integers(1, ctx.p)))
                   + cb[int(j)].scale(int(rng.integers(1, ctx.p))))
        if not seed_el:
            seed_el = cb[int(i)]
        ideal = ideal_closure(seed_el, core, gens=ws.gens)
        if ideal.dim != core.dim:
            fails += 1
    _rec_enum(checks, "random nonzero elements generate the core as an "
              "ideal", "simplicity.ideal-closure", trials, fails)

    return {"name": "simplicity", "checks": checks}


# -- normalizer and centralizer ----------------------------------------------


def suite_normalizer(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    eng = ws.engine
    checks: list = []
    nor, cen = normalizer_centralizer(ctx, ws.core, ws.gens)

    _rec(checks, "the centralizer of the core is trivial",
         "normalizer.centralizer", 0, cen.dim)

    hs = [ctx.var(i) * ctx.var(ctx.prime_index(i))
          for i in range(1, ctx.n + 1)]
    sum_space = ws.kernel.copy()
    sum_space.add_elements(hs)
    _rec(checks, "the normalizer is the kernel plus the torus",
         "normalizer.kernel-plus-torus",
         {"dim": nor.dim, "equal": True},
         {"dim": sum_space.dim, "equal": sum_space.equals(nor)})

    diffs_inside = all(ws.core.contains(hs[k] - hs[0])
                       for k in range(1, ctx.n))
    _rec(checks, "the torus meets the kernel in codimension one: pair "
         "differences already lie in the core",
         "normalizer.torus-gap",
         {"gap": 1, "h1_outside": True, "diffs_inside": True},
         {"gap": nor.dim - ws.kernel.dim,
          "h1_outside": not ws.kernel.contains(hs[0]),
          "diffs_inside": diffs_inside})

    tot = fails = 0
    for i in range(1, ctx.n + 1):
        hi = hs[i - 1]
        for m in ws.basis:
            lhs = eng.bracket_elements(hi, ctx.from_monomial(m))
            tot += 1
            if lhs != h_bracket_rhs(ctx, i, m):
                fails += 1
    _rec_enum(checks, "each torus element acts on every basis monomial "
              "by the scalar d_i'(f) minus alpha_i",
              "normalizer.torus-action", tot, fails)

    probes = rejected = 0
    for m in ws.basis:
        if probes == 5:
            break
        el = ctx.from_monomial(m)
        if nor.contains(el):
            continue
        probes += 1
        try:
            ad_endo(ws.core, el, gens=ws.gens)
        except ValueError:
            rejected += 1
    _rec_enum(checks, "adjoint maps of non-normalizing elements are "
              "rejected", "normalizer.reject-outside", probes,
              probes - rejected)

    return {"name": "normalizer", "checks": checks}


# -- superderivations --------------------------------------------------------


def _slug(text: str) -> str:
    out = []
    for ch in text.lower():
        if ch.isalnum():
            out.append(ch)
        elif out and out[-1] != "-":
            out.append("-")
    return "".join(out).strip("-")


def suite_derivations(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    checks: list = []
    outer = outer_der_suite(ctx, ws.core, ws.gens, law_samples=160,
                            seed=int(rng.integers(2 ** 31)))
    for c in outer["checks"]:
        checks.append({"claim": c["claim"],
                       "anchor": "derivations." + _slug(c["claim"])[:48],
                       "expected": _plain(c["expected"]),
                       "computed": _plain(c["computed"]),
                       "pass": c["pass"]})

    shifts = {-2: 1, -3: 0, -4: 0}
    for d in range(1, max(ctx.t)):
        shifts[-ctx.p ** d] = sum(1 for ti in ctx.t if ti > d)
    for s in sorted(shifts, reverse=True):
        try:
            computed = graded_der_dimension(ctx, ws.core, s)
        except ValueError as e:
            computed = f"error: {e}"
        _rec(checks, f"derivations of degree shift {s} have exactly the "
             "exhibited dimension", f"derivations.graded-minus-{-s}",
             shifts[s], computed)

    return {"name": "derivations", "checks": checks}


# -- closed-form bookkeeping -------------------------------------------------


def suite_formulas(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    p, n, lam = ctx.p, ctx.n, ctx.lam
    checks: list = []

    for level in (0, 2):
        _rec(checks, f"the level {level} height set matches its "
             "enumerated definition", f"formulas.height-set-{level}",
             sorted(enum_sigma(ctx, level)),
             list(formulas.sigma_set(p, n, lam, level)))

    _rec(checks, "the exceptional indicator agrees with its enumerated "
         "definition", "formulas.exceptional-indicator",
         enum_delta(ctx), formulas.delta_prime(p, n, lam))

    _rec(checks, "binomial counts match the label enumerations",
         "formulas.binomial-counts",
         {"top": formulas.sigma_binom_sum(p, n, lam, 0),
          "tuples": formulas.sigma_binom_sum(p, n, lam, 2)},
         {"top": len(ws.s_sets["S5"]),
          "tuples": sum(len(x_tuples(ctx, r))
                        for r in formulas.sigma_set(p, n, lam, 2))})

    _rec(checks, "the even and odd top counts split the binomial total",
         "formulas.parity-split",
         formulas.sigma_binom_sum(p, n, lam, 0)
         + formulas.sigma_binom_sum(p, n, lam, 2),
         formulas.l_even(p, n, lam) + formulas.l_odd(p, n, lam))

    low = formulas.dim_span_pairs_low(p, ctx.t)
    high = formulas.dim_span_pairs_high(p, ctx.t)
    ledger = (formulas.dim_sko(p, n, ctx.t, lam)
              + formulas.sigma_binom_sum(p, n, lam, 2)
              + formulas.delta_prime(p, n, lam) - 1)
    _rec(checks, "the two family ranks tie to the dimension formula",
         "formulas.rank-ledger", ledger, low + high)

    _rec(checks, "the family dispatch agrees with the direct formula",
         "formulas.dispatch",
         formulas.dim_sko(p, n, ctx.t, lam),
         formulas.dim_family(formulas.FamilyParams(
             "SKO", p, n=n, t=ctx.t, lam=lam)))

    _rec(checks, "the kernel dimension decomposes over the formula "
         "ledger", "formulas.kernel-ledger",
         formulas.dim_sko(p, n, ctx.t, lam)
         + formulas.sigma_binom_sum(p, n, lam, 2)
         + formulas.delta_prime(p, n, lam)
         + formulas.sigma_binom_sum(p, n, lam, 0),
         ws.kernel.dim)

    _rec(checks, "the construction sits properly inside the ambient "
         "contact family", "formulas.proper-containment", True,
         formulas.dim_sko(p, n, ctx.t, lam)
         < formulas.dim_family(formulas.FamilyParams("KO", p, n=n, t=ctx.t)))

    return {"name": "formulas", "checks": checks}


# -- comparison corollaries --------------------------------------------------

# Brute-force core dimensions at the reference instance, frozen from the
# derived series computation; keyed by lambda.
REFERENCE_CORE_DIMS = {0: 999, 1: 1000, 2: 999, 3: 996, 4: 997}

DISTINGUISHED_POINT = {
    "dim_theorem": 9999964,
    "dim_corollary_display": 9999999,
    "omitted_sigma2_term": 35,
}


def suite_comparison(ws: Workspace, rng) -> dict:
    ctx = ws.ctx
    p, n = ctx.p, ctx.n
    checks: list = []

    rows = formulas.comparison_rows(p, n, ctx.t, ctx.lam)
    if (p, n, ctx.t) == (5, 3, (1, 1, 1)):
        expected = {"SKO": REFERENCE_CORE_DIMS[ctx.lam], "KO": 2000,
                    "SHO": 494, "HO": 999, "W": 14000, "S": 11998,
                    "H": 1998, "K": 2000}
        _rec(checks, "the matched-size dimension table reproduces the "
             "reference values", "comparison.dimension-table",
             expected, {r["family"]: r["dim"] for r in rows})
    else:
        _rec(checks, "the family dimension agrees with the computed table "
             "row", "comparison.dimension-table",
             formulas.dim_sko(p, n, ctx.t, ctx.lam),
             next(r["dim"] for r in rows if r["family"] == "SKO"))

    rep = formulas.corollary_parity_check(p)
    _rec(checks, "the two corollary readings differ exactly by the "
         "omitted height term", "comparison.readings-differ",
         rep["dim_theorem"] + rep["omitted_sigma2_term"],
         rep["dim_corollary_display"])
    if p == 5:
        for key, anchor in (
                ("dim_theorem", "comparison.theorem-value"),
                ("dim_corollary_display", "comparison.display-value"),
                ("omitted_sigma2_term", "comparison.omitted-term")):
            _rec(checks, f"distinguished point {key.replace('_', ' ')}",
                 anchor, DISTINGUISHED_POINT[key], rep[key])
    _rec(checks, "the display reading is odd at the distinguished point",
         "comparison.display-odd", True, rep["display_is_odd"])
    _rec(checks, "every comparison family dimension is even at the "
         "parity-argument sizes", "comparison.families-even", True,
         rep["comparison_families_all_even"])
    _rec(checks, "the distinguished point admits the exceptional vector",
         "comparison.exceptional-point", 1,
         formulas.delta_prime(p, p + 2, (p - 1) // 2))
    _rec(checks, "the distinguished point has outer superderivations",
         "comparison.outer-positive", True, rep["der_out_at_point"] > 0)

    return {"name": "comparison", "checks": checks}


# -- dispatch ----------------------------------------------------------------

SUITE_ORDER = ("algebra-axioms", "bracket-identities", "spanning",
               "derived-series", "simplicity", "normalizer",
               "derivations", "formulas", "comparison")

_DISPATCH = {
    "algebra-axioms": suite_algebra_axioms,
    "bracket-identities": suite_bracket_identities,
    "spanning": suite_spanning,
    "derived-series": suite_derived_series,
    "simplicity": suite_simplicity,
    "normalizer": suite_normalizer,
    "derivations": suite_derivations,
    "formulas": suite_formulas,
    "comparison": suite_comparison,
}

SUITE_INDEX = {name: k for k, name in enumerate(SUITE_ORDER)}


def run_suite(ws: Workspace, name: str, seed: int = 0, **kw) -> dict:
    """Run one named suite with its own deterministic substream."""
    if name not in _DISPATCH:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{', '.join(SUITE_ORDER)}")
    rng = np.random.default_rng([seed, SUITE_INDEX[name]])
    return _DISPATCH[name](ws, rng, **kw)


def run_suites(ws: Workspace, names=None, seed: int = 0,
               timings: bool = False) -> list[dict]:
    out = []
    for name in (names or SUITE_ORDER):
        t0 = time.perf_counter()
        rep = run_suite(ws, name, seed)
        if timings:
            rep["millis"] = int((time.perf_counter() - t0) * 1000)
        out.append(rep)
    return out
