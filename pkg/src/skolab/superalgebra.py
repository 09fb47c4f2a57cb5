"""The underlying associative superalgebra O(n, n+1; t) over GF(p).

Basis monomials are x^(alpha) x_u x_{2n+1}^eps where x^(alpha) is a truncated
divided power in the even variables x_1..x_n (exponent alpha_i at most
pi_i = p^{t_i} - 1), u is a strictly increasing tuple of odd indices from
{n+1..2n}, and eps says whether the last odd variable x_{2n+1} appears.

Products, signs and left partial derivatives are implemented directly on
dict-of-monomial elements.  This layer is the readable reference; bulk linear
algebra goes through the table-driven engine which is cross-checked against
it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .primefield import multi_binom, validate_prime


@dataclass(frozen=True)
class Monomial:
    """One basis monomial: even exponents, odd index set, eps flag."""

    alpha: tuple[int, ...]
    u: tuple[int, ...]
    eps: int

    def odd_seq(self, two_n_plus_1: int) -> tuple[int, ...]:
        """The odd factors in written order, x_{2n+1} last."""
        return self.u + ((two_n_plus_1,) if self.eps else ())

    def parity(self) -> int:
        return (len(self.u) + self.eps) & 1

    def zdeg(self) -> int:
        return sum(self.alpha) + len(self.u)

    def cdeg(self) -> int:
        return self.zdeg() + 2 * self.eps

    def gdeg(self) -> int:
        return self.cdeg() - 2

    def sort_key(self) -> tuple:
        # cdeg first, then parity, keeps degree blocks contiguous
        return (self.cdeg(), self.parity(), self.alpha, self.u, self.eps)


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation of two increasing sequences."""
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return -1 if inv & 1 else 1


class AlgebraContext:
    """Fixed parameters (p, n, t, lambda) plus construction helpers.

    Variables are indexed 1..2n+1: even x_1..x_n, odd x_{n+1}..x_{2n+1}.
    lam is the residue entering the divergence and the spanning elements.
    """

    def __init__(self, p: int, n: int, t: tuple[int, ...], lam: int = 0):
        validate_prime(p)
        if n < 3:
            raise ValueError(f"need n >= 3, got {n}")
        t = tuple(int(x) for x in t)
        if len(t) != n or any(x < 1 for x in t):
            raise ValueError(f"t must be {n} positive ints, got {t}")
        if not 0 <= lam < p:
            raise ValueError(f"lambda must be a residue in [0, {p}), got {lam}")
        self.p = p
        self.n = n
        self.t = t
        self.lam = lam
        self.pi = tuple(p**ti - 1 for ti in t)
        self.num_vars = 2 * n + 1
        self.odd_vars = tuple(range(n + 1, 2 * n + 2))
        self.dim_O = p ** sum(t) * 2 ** (n + 1)
        self._engine = None

    # -- variable bookkeeping ------------------------------------------------

    def prime_index(self, i: int) -> int:
        """i' pairing: i <-> i+n for i <= n; 2n+1 is unpaired."""
        if 1 <= i <= self.n:
            return i + self.n
        if self.n + 1 <= i <= 2 * self.n:
            return i - self.n
        raise ValueError(f"index {i} has no partner")

    def mu(self, i: int) -> int:
        """Parity of the variable x_i: 0 for even, 1 for odd."""
        if 1 <= i <= self.n:
            return 0
        if self.n + 1 <= i <= self.num_vars:
            return 1
        raise ValueError(f"variable index out of range: {i}")

    # -- monomial and element constructors -----------------------------------

    def monomial(self, alpha: Iterable[int] = (), u: Iterable[int] = (),
                 eps: int = 0) -> Monomial:
        alpha = tuple(alpha) if alpha else (0,) * self.n
        if len(alpha) != self.n:
            raise ValueError(f"alpha must have length {self.n}")
        for i, (a, cap) in enumerate(zip(alpha, self.pi), start=1):
            if not 0 <= a <= cap:
                raise ValueError(f"alpha_{i}={a} outside [0, {cap}]")
        u = tuple(sorted(set(u)))
        for j in u:
            if not self.n + 1 <= j <= 2 * self.n:
                raise ValueError(f"odd index {j} outside [{self.n+1}, {2*self.n}]")
        if eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        return Monomial(alpha, u, eps)

    def unit(self) -> Monomial:
        return self.monomial()

    def epsilon(self, i: int, k: int = 1) -> tuple[int, ...]:
        """Multi-index k*e_i."""
        if not 1 <= i <= self.n:
            raise ValueError(f"even index out of range: {i}")
        a = [0] * self.n
        a[i - 1] = k
        return tuple(a)

    def element(self, terms=None) -> "SuperElement":
        """Build an element from {Monomial: coeff}; raw (alpha, u, eps)
        triples are accepted as keys and validated."""
        if not terms:
            return SuperElement(self, {})
        fixed = {}
        for m, c in terms.items():
            if not isinstance(m, Monomial):
                m = self.monomial(*m)
            fixed[m] = fixed.get(m, 0) + c
        return SuperElement(self, fixed)

    def one(self) -> "SuperElement":
        return SuperElement(self, {self.unit(): 1})

    def var(self, i: int) -> "SuperElement":
        """The element x_i."""
        if 1 <= i <= self.n:
            return SuperElement(self, {self.monomial(self.epsilon(i)): 1})
        if self.n + 1 <= i <= 2 * self.n:
            return SuperElement(self, {self.monomial(u=(i,)): 1})
        if i == self.num_vars:
            return SuperElement(self, {self.monomial(eps=1): 1})
        raise ValueError(f"variable index out of range: {i}")

    def from_monomial(self, m: Monomial, c: int = 1) -> "SuperElement":
        return SuperElement(self, {m: c % self.p})

    # -- structure ------------------------------------------------------------

    def degrees(self, m: Monomial) -> tuple[int, int, int]:
        """(zdeg, cdeg, gdeg) of a monomial."""
        return (m.zdeg(), m.cdeg(), m.gdeg())

    def mul_monomials(self, a: Monomial, b: Monomial) -> tuple[Monomial | None, int]:
        """Product of two monomials: (monomial, coefficient) or (None, 0)."""
        if a.eps and b.eps:
            return None, 0
        if set(a.u) & set(b.u):
            return None, 0
        alpha = tuple(x + y for x, y in zip(a.alpha, b.alpha))
        if any(x > cap for x, cap in zip(alpha, self.pi)):
            return None, 0
        c = multi_binom(a.alpha, b.alpha, self.p)
        if c == 0:
            return None, 0
        top = self.num_vars
        sign = _merge_sign(a.odd_seq(top), b.odd_seq(top))
        u = tuple(sorted(a.u + b.u))
        return Monomial(alpha, u, a.eps | b.eps), (c * sign) % self.p

    def partial_monomial(self, r: int, m: Monomial) -> tuple[Monomial | None, int]:
        """Left partial derivative of a monomial: (monomial, coefficient)."""
        if 1 <= r <= self.n:
            if m.alpha[r - 1] == 0:
                return None, 0
            alpha = list(m.alpha)
            alpha[r - 1] -= 1
            return Monomial(tuple(alpha), m.u, m.eps), 1
        if self.n + 1 <= r <= self.num_vars:
            seq = m.odd_seq(self.num_vars)
            if r not in seq:
                return None, 0
            pos = seq.index(r)
            sign = -1 if pos & 1 else 1
            if r == self.num_vars:
                return Monomial(m.alpha, m.u, 0), sign % self.p
            u = tuple(j for j in m.u if j != r)
            return Monomial(m.alpha, u, m.eps), sign % self.p
        raise ValueError(f"variable index out of range: {r}")

    def enumerate_basis(self, pred: Callable[[Monomial], bool] | None = None
                        ) -> list[Monomial]:
        """All monomials in the fixed (cdeg, parity, alpha, u, eps) order."""
        out = []
        odd = range(self.n + 1, 2 * self.n + 1)
        for alpha in itertools.product(*(range(c + 1) for c in self.pi)):
            for k in range(self.n + 1):
                for u in itertools.combinations(odd, k):
                    for eps in (0, 1):
                        m = Monomial(alpha, u, eps)
                        if pred is None or pred(m):
                            out.append(m)
        out.sort(key=Monomial.sort_key)
        return out

    def render_monomial(self, m: Monomial) -> str:
        parts = []
        for i, a in enumerate(m.alpha, start=1):
            if a == 1:
                parts.append(f"x{i}")
            elif a > 1:
                parts.append(f"x{i}^({a})")
        parts.extend(f"x{j}" for j in m.u)
        if m.eps:
            parts.append(f"x{self.num_vars}")
        return "*".join(parts) if parts else "1"

    def engine(self):
        """The table-driven numeric core, built on first use."""
        if self._engine is None:
            from .engine import Engine

            self._engine = Engine(self)
        return self._engine

    def __repr__(self):
        return f"AlgebraContext(p={self.p}, n={self.n}, t={self.t}, lam={self.lam})"


class SuperElement:
    """A finite GF(p) combination of monomials, stored sparsely."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict[Monomial, int]):
        self.ctx = ctx
        self.terms = {m: c % ctx.p for m, c in terms.items() if c % ctx.p}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "SuperElement") -> "SuperElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SuperElement(self.ctx, out)

    def __sub__(self, other: "SuperElement") -> "SuperElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return SuperElement(self.ctx, out)

    def __neg__(self):
        return SuperElement(self.ctx, {m: -c for m, c in self.terms.items()})

    def scale(self, c: int) -> "SuperElement":
        return SuperElement(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, SuperElement):
            out: dict[Monomial, int] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    m, c = self.ctx.mul_monomials(ma, mb)
                    if c:
                        out[m] = out.get(m, 0) + ca * cb * c
            return SuperElement(self.ctx, out)
        return NotImplemented

    def partial(self, r: int) -> "SuperElement":
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            m2, s = self.ctx.partial_monomial(r, m)
            if s:
                out[m2] = out.get(m2, 0) + c * s
        return SuperElement(self.ctx, out)

    def parity(self) -> int:
        """0 or 1 for homogeneous elements, error on a mix."""
        ps = {m.parity() for m in self.terms}
        if not ps:
            return 0
        if len(ps) > 1:
            raise ValueError("element has mixed parity")
        return ps.pop()

    def is_parity_homogeneous(self) -> bool:
        return len({m.parity() for m in self.terms}) <= 1

    def parity_split(self) -> tuple["SuperElement", "SuperElement"]:
        ev = {m: c for m, c in self.terms.items() if m.parity() == 0}
        od = {m: c for m, c in self.terms.items() if m.parity() == 1}
        return SuperElement(self.ctx, ev), SuperElement(self.ctx, od)

    def zdeg_values(self) -> set[int]:
        return {m.zdeg() for m in self.terms}

    def gdeg_values(self) -> set[int]:
        return {m.gdeg() for m in self.terms}

    def render(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())
        bits = []
        for m, c in items:
            s = self.ctx.render_monomial(m)
            if c == 1 and s != "1":
                bits.append(s)
            elif s == "1":
                bits.append(str(c))
            else:
                bits.append(f"{c}*{s}")
        return " + ".join(bits)

    def __repr__(self):
        return f"<{self.render()}>"
