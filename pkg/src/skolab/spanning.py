"""Labeled spanning families for the divergence kernel and its derived terms.

The kernel of the divergence is spanned by the unit together with five
families S1..S5 of short explicit vectors; the first and second derived
subalgebras are spanned by the same material minus small top classes.  Every
constructor here returns a SuperElement of at most a handful of monomials,
which is what keeps the bulk linear algebra cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .contact_ops import gamma, index_report, nabla, zd
from .superalgebra import AlgebraContext, Monomial, SuperElement


def _base_monomial(ctx: AlgebraContext, alpha, u) -> Monomial:
    m = ctx.monomial(alpha, u, 0)
    return m


def build_A(ctx: AlgebraContext, alpha, u, q: int) -> SuperElement:
    """x^(alpha) x_u minus its pair transfers into slot q."""
    m = _base_monomial(ctx, alpha, u)
    rep = index_report(ctx, m)
    out = ctx.from_monomial(m)
    for i in sorted(rep.I):
        out = out - gamma(i, q, ctx.from_monomial(m))
    return out


def build_B(ctx: AlgebraContext, alpha, u, q: int) -> SuperElement:
    """Signed multiple of the pair raise of x^(alpha) x_u into slot q."""
    m = _base_monomial(ctx, alpha, u)
    c = (ctx.n * ctx.lam - zd(ctx, m)) % ctx.p
    if len(m.u) & 1:
        c = -c % ctx.p
    return nabla(q, ctx.from_monomial(m)).scale(c)


def build_E(ctx: AlgebraContext, alpha, u, *, q: int | None = None,
            top: bool = False) -> SuperElement:
    """The four E-shaped spanning vectors.

    top=False, q=None      -> plain monomial x^(alpha) x_u
    top=False, q given     -> build_A(alpha, u, q)
    top=True,  q=None      -> x^(alpha) x_u x_{2n+1}
    top=True,  q given     -> x^(alpha) x_u x_{2n+1} + build_B(alpha, u, q)
    """
    if q is not None and not 1 <= q <= ctx.n:
        raise ValueError(f"slot index out of range: {q}")
    if not top:
        if q is None:
            return ctx.from_monomial(_base_monomial(ctx, alpha, u))
        return build_A(ctx, alpha, u, q)
    m = _base_monomial(ctx, alpha, u)
    lifted = ctx.from_monomial(Monomial(m.alpha, m.u, 1))
    if q is None:
        return lifted
    return lifted + build_B(ctx, alpha, u, q)


def build_G(ctx: AlgebraContext, alpha, u, q: int) -> SuperElement:
    """build_A times x_{2n+1} plus build_B."""
    if not 1 <= q <= ctx.n:
        raise ValueError(f"slot index out of range: {q}")
    a = build_A(ctx, alpha, u, q)
    return a * ctx.var(ctx.num_vars) + build_B(ctx, alpha, u, q)


def exceptional_G(ctx: AlgebraContext) -> SuperElement:
    """The distinguished top vector G(pi - e_1, <2'..n'>, 2n+1, 1)."""
    alpha = tuple(c - (1 if i == 0 else 0) for i, c in enumerate(ctx.pi))
    u = tuple(range(ctx.n + 2, 2 * ctx.n + 1))
    return build_G(ctx, alpha, u, 1)


def build_Y(ctx: AlgebraContext, f: SuperElement, q: int) -> SuperElement:
    """Lift f to f x_{2n+1} plus its signed slot-q raise.

    f must be parity- and zdeg-homogeneous with no x_{2n+1} factor.
    """
    if not f:
        return f
    if any(m.eps for m, _ in f):
        raise ValueError("argument must not involve the last odd variable")
    par = f.parity()
    zs = f.zdeg_values()
    if len(zs) > 1:
        raise ValueError("argument must be zdeg-homogeneous")
    lifted = nabla(q, f)
    if not lifted:
        raise ValueError(f"argument is not {q}-integral")
    c = (ctx.n * ctx.lam - zs.pop()) % ctx.p
    if par:
        c = -c % ctx.p
    return f * ctx.var(ctx.num_vars) + lifted.scale(c)


def sigma_set(ctx: AlgebraContext, l: int) -> set[int]:
    """{k in [0, n] : n*lam - n + 2k + l = 0 in GF(p)}."""
    return {
        k for k in range(ctx.n + 1)
        if (ctx.n * ctx.lam - ctx.n + 2 * k + l) % ctx.p == 0
    }


def delta_prime(ctx: AlgebraContext) -> int:
    """1 when n*lam = -1 in GF(p), else 0."""
    return 1 if (ctx.n * ctx.lam + 1) % ctx.p == 0 else 0


def build_X(ctx: AlgebraContext, idx: tuple[int, ...]) -> SuperElement:
    """Top-class monomial: full powers on idx, primed complement odd part."""
    idx = tuple(idx)
    if len(set(idx)) != len(idx) or any(not 1 <= i <= ctx.n for i in idx):
        raise ValueError(f"need distinct indices from 1..{ctx.n}, got {idx}")
    alpha = [0] * ctx.n
    for i in idx:
        alpha[i - 1] = ctx.pi[i - 1]
    u = tuple(ctx.prime_index(i) for i in range(1, ctx.n + 1) if i not in idx)
    return ctx.from_monomial(ctx.monomial(tuple(alpha), u, 0))


def x_tuples(ctx: AlgebraContext, r: int) -> list[tuple[int, ...]]:
    """All increasing index tuples of length r."""
    return list(itertools.combinations(range(1, ctx.n + 1), r))


@dataclass(frozen=True)
class SpanningLabel:
    """Name of one spanning vector: family, base monomial data, slot."""

    kind: str
    alpha: tuple[int, ...]
    u: tuple[int, ...]
    q: int | None = None

    def element(self, ctx: AlgebraContext) -> SuperElement:
        if self.kind == "S1":
            return build_E(ctx, self.alpha, self.u)
        if self.kind == "S2":
            return build_E(ctx, self.alpha, self.u, q=self.q)
        if self.kind == "S3":
            return build_E(ctx, self.alpha, self.u, top=True, q=self.q)
        if self.kind == "S4":
            return build_G(ctx, self.alpha, self.u, self.q)
        if self.kind == "S5":
            return build_E(ctx, self.alpha, self.u, top=True)
        raise ValueError(f"unknown spanning family {self.kind!r}")

    def admissible(self, ctx: AlgebraContext) -> bool:
        m = ctx.monomial(self.alpha, self.u, 0)
        rep = index_report(ctx, m)
        if self.kind == "S1":
            return not rep.I and (any(self.alpha) or bool(self.u))
        if self.kind == "S2":
            return rep.in_dstar and self.q in rep.Itilde
        if self.kind == "S3":
            return not rep.I and bool(rep.Itilde) and self.q == rep.qmin
        if self.kind == "S4":
            return rep.in_dstar and self.q in rep.Itilde
        if self.kind == "S5":
            return (not rep.I and not rep.Itilde
                    and (ctx.n * ctx.lam - zd(ctx, m)) % ctx.p == 0)
        return False


def build_S_sets(ctx: AlgebraContext) -> dict[str, list[SpanningLabel]]:
    """Enumerate the labels of S1..S5 in deterministic order."""
    out: dict[str, list[SpanningLabel]] = {k: [] for k in
                                           ("S1", "S2", "S3", "S4", "S5")}
    for m in ctx.enumerate_basis(lambda m: m.eps == 0):
        rep = index_report(ctx, m)
        base = (m.alpha, m.u)
        if not rep.I:
            if any(m.alpha) or m.u:
                out["S1"].append(SpanningLabel("S1", *base))
            if rep.Itilde:
                out["S3"].append(SpanningLabel("S3", *base, q=rep.qmin))
            elif (ctx.n * ctx.lam - zd(ctx, m)) % ctx.p == 0:
                out["S5"].append(SpanningLabel("S5", *base))
        elif rep.Itilde:
            for q in sorted(rep.Itilde):
                out["S2"].append(SpanningLabel("S2", *base, q=q))
                out["S4"].append(SpanningLabel("S4", *base, q=q))
    return out


def kernel_spanning_list(ctx: AlgebraContext) -> list[SuperElement]:
    """Unit plus all S1..S5 vectors; claimed to span the divergence kernel."""
    vecs = [ctx.one()]
    sets = build_S_sets(ctx)
    for kind in ("S1", "S2", "S3", "S4", "S5"):
        vecs.extend(lab.element(ctx) for lab in sets[kind])
    return vecs


def _dedup(vectors: list[SuperElement]) -> list[SuperElement]:
    seen = set()
    out = []
    for v in vectors:
        key = frozenset(v.terms.items())
        if key and key not in seen:
            seen.add(key)
            out.append(v)
    return out


def generator_sets(ctx: AlgebraContext
                   ) -> tuple[list[SuperElement], list[SuperElement]]:
    """The two generating families (powers-of-one-variable side, single
    primed-variable side), deduplicated as vectors."""
    zero = (0,) * ctx.n
    t_fam = []
    for i in range(1, ctx.n + 1):
        for k in range(ctx.pi[i - 1] + 1):
            alpha = ctx.epsilon(i, k) if k else zero
            rep = index_report(ctx, ctx.monomial(alpha, (), 0))
            for q in sorted(rep.Itilde):
                t_fam.append(build_E(ctx, alpha, (), top=True, q=q))
    s_fam = []
    for i in range(1, ctx.n + 1):
        u = (ctx.prime_index(i),)
        rep = index_report(ctx, ctx.monomial(zero, u, 0))
        for q in sorted(rep.Itilde):
            s_fam.append(build_E(ctx, zero, u, top=True, q=q))
    return _dedup(t_fam), _dedup(s_fam)


def a1_class(ctx: AlgebraContext) -> list[Monomial]:
    """Monomials with nothing lowerable or raisable (eps = 0)."""
    return ctx.enumerate_basis(
        lambda m: m.eps == 0
        and not index_report(ctx, m).I and not index_report(ctx, m).Itilde)


def a2_class(ctx: AlgebraContext) -> list[Monomial]:
    """Monomials with nothing lowerable but something raisable (eps = 0)."""
    return ctx.enumerate_basis(
        lambda m: m.eps == 0
        and not index_report(ctx, m).I and bool(index_report(ctx, m).Itilde))


def _strip_signed(vectors: list[SuperElement], g: SuperElement
                  ) -> list[SuperElement]:
    neg = -g
    return [v for v in vectors if v != g and v != neg]


def first_derived_proposal(ctx: AlgebraContext) -> list[SuperElement]:
    """Sparse list claimed to span the first derived subalgebra.

    S5 and the top classes indexed by sigma_set(2) drop out of the kernel
    span; the distinguished G vector survives except in the exceptional case
    (n*lam = -1 with sigma_set(0) empty).
    """
    sets = build_S_sets(ctx)
    vecs = [ctx.one()]
    vecs.extend(ctx.from_monomial(m) for m in a2_class(ctx))
    s2 = sigma_set(ctx, 2)
    for r in range(ctx.n + 1):
        if r in s2:
            continue
        vecs.extend(build_X(ctx, idx) for idx in x_tuples(ctx, r))
    for kind in ("S2", "S3", "S4"):
        vecs.extend(lab.element(ctx) for lab in sets[kind])
    exceptional = delta_prime(ctx) == 1 and not sigma_set(ctx, 0)
    if exceptional:
        vecs = _strip_signed(vecs, exceptional_G(ctx))
    return _dedup(vecs)


def second_derived_proposal(ctx: AlgebraContext) -> list[SuperElement]:
    """Sparse list claimed to span the second derived subalgebra.

    Same as the first derived span, with the distinguished G removed
    whenever n*lam = -1.
    """
    vecs = first_derived_proposal(ctx)
    if delta_prime(ctx) == 1:
        vecs = _strip_signed(vecs, exceptional_G(ctx))
    return vecs
