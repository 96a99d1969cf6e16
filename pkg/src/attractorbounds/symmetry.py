"""Finite signed-permutation symmetry groups and the structure they induce.

A signed permutation acts by (T x)_i = signs[i] * x[perm[i]].  Groups are
stored as explicit element lists (closures of generators).  For pure sign
groups (identity permutation part) the monomial basis splits into sign
character classes, making Gram matrices of invariant SOS polynomials
block-diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .poly import Monomial, Polynomial

GROUP_CLOSURE_CAP = 1024


@dataclass(frozen=True)
class SignedPermutation:
    perm: tuple       # perm[i] = index of the source variable of output i
    signs: tuple      # +1 / -1 per output variable

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.signs) != n or any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs must be +-1 of length {n}: {self.signs}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @staticmethod
    def identity(n: int) -> "SignedPermutation":
        return SignedPermutation(tuple(range(n)), (1,) * n)

    @staticmethod
    def from_signed_indices(entries: Sequence[int]) -> "SignedPermutation":
        """Parse one-line form like [-1, -2, 3] for (x,y,z) -> (-x,-y,z).

        Entry k at position i means output i equals sign(k) * x_{|k|}
        (1-based |k|).
        """
        perm = []
        signs = []
        for k in entries:
            if k == 0:
                raise ValueError("entries are 1-based and nonzero")
            perm.append(abs(k) - 1)
            signs.append(1 if k > 0 else -1)
        return SignedPermutation(tuple(perm), tuple(signs))

    def to_signed_indices(self) -> list[int]:
        return [s * (p + 1) for p, s in zip(self.perm, self.signs)]

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Returns self o other, acting as x -> self(other(x))."""
        perm = tuple(other.perm[self.perm[i]] for i in range(self.n))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]]
                      for i in range(self.n))
        return SignedPermutation(perm, signs)

    def apply_point(self, x: Sequence[float]) -> list[float]:
        return [self.signs[i] * x[self.perm[i]] for i in range(self.n)]

    def apply_monomial(self, mono: Monomial) -> tuple[Monomial, int]:
        """Image of a monomial: (exponent tuple, sign in {+1,-1})."""
        out = [0] * self.n
        sign = 1
        for i, e in enumerate(mono):
            out[self.perm[i]] += e
            if self.signs[i] < 0 and e % 2 == 1:
                sign = -sign
        return tuple(out), sign

    def apply_polynomial(self, p: Polynomial) -> Polynomial:
        """Returns the polynomial x -> p(T x)."""
        if p.nvars != self.n:
            raise ValueError(f"dimension mismatch: {p.nvars} vs {self.n}")
        terms: dict[Monomial, float] = {}
        for mono, coef in p.terms.items():
            m, sign = self.apply_monomial(mono)
            terms[m] = terms.get(m, 0.0) + sign * coef
        return Polynomial(self.n, terms, drop_eps=0.0)

    def is_pure_sign(self) -> bool:
        return all(self.perm[i] == i for i in range(self.n))


class SymmetryGroup:
    """Complete element list of a finite signed-permutation group."""

    def __init__(self, elements: Iterable[SignedPermutation]):
        elems = list(elements)
        if not elems:
            raise ValueError("a group needs at least the identity")
        n = elems[0].n
        if any(e.n != n for e in elems):
            raise ValueError("mixed dimensions in group elements")
        self.n = n
        self.elements = elems

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @staticmethod
    def trivial(n: int) -> "SymmetryGroup":
        return SymmetryGroup([SignedPermutation.identity(n)])

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_pure_sign(self) -> bool:
        return all(e.is_pure_sign() for e in self.elements)

    def generators_form(self) -> list[list[int]]:
        """One-line signed-index form of all non-identity elements."""
        return [e.to_signed_indices() for e in self.elements
                if e != SignedPermutation.identity(self.n)]


def close_group(generators: Sequence[SignedPermutation],
                cap: int = GROUP_CLOSURE_CAP,
                n: int | None = None) -> SymmetryGroup:
    """Closure of the generators under composition.

    Raises if the closure exceeds ``cap`` elements (signed-permutation
    groups are always finite, so this only guards against bad input).
    An empty generator list yields the trivial group; pass ``n`` for it.
    """
    if not generators:
        if n is None:
            raise ValueError("empty generator list needs an explicit dimension")
        return SymmetryGroup.trivial(n)
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise ValueError("generators have mixed dimensions")
    ident = SignedPermutation.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                c = a.compose(g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > cap:
                        raise ValueError(
                            f"group closure exceeded cap of {cap} elements")
        frontier = nxt
    # deterministic element order
    elems = sorted(seen, key=lambda e: (e.perm, e.signs))
    return SymmetryGroup(elems)


def close_group_from_indices(gen_lists: Sequence[Sequence[int]], n: int,
                             cap: int = GROUP_CLOSURE_CAP) -> SymmetryGroup:
    gens = [SignedPermutation.from_signed_indices(g) for g in gen_lists]
    if any(g.n != n for g in gens):
        raise ValueError(f"generator length does not match dimension {n}")
    return close_group(gens, cap=cap, n=n)


def orbit_average(p: Polynomial, group: SymmetryGroup) -> Polynomial:
    """Average of p over the group orbit; the result is group-invariant."""
    if p.nvars != group.n:
        raise ValueError(f"dimension mismatch: {p.nvars} vs {group.n}")
    acc = Polynomial.zero(p.nvars)
    for T in group:
        acc = acc + T.apply_polynomial(p)
    return acc * (1.0 / len(group))


def is_invariant(p: Polynomial, group: SymmetryGroup, tol: float = 0.0) -> bool:
    for T in group:
        if T.apply_polynomial(p).max_abs_coeff_diff(p) > tol:
            return False
    return True


def invariant_basis(n: int, d: int, group: SymmetryGroup) -> list[Monomial]:
    """Monomials of degree <= d fixed (with sign +1) by every group element."""
    from .poly import monomial_basis

    if group.n != n:
        raise ValueError(f"group dimension {group.n} does not match n={n}")
    out = []
    for mono in monomial_basis(n, d):
        if all(T.apply_monomial(mono) == (mono, 1) for T in group):
            out.append(mono)
    return out


def sign_character(mono: Monomial, group: SymmetryGroup) -> tuple:
    """Signs picked up by a monomial under each group element."""
    chars = []
    for T in group:
        m, sign = T.apply_monomial(mono)
        if m != mono:
            raise ValueError(
                "sign characters require a pure sign group "
                f"(element {T} permutes variables)")
        chars.append(sign)
    return tuple(chars)


def sign_blocks(basis: Sequence[Monomial], group: SymmetryGroup) -> list[list[int]]:
    """Partition basis indices by sign character.

    For a pure sign group, any invariant SOS polynomial admits a Gram matrix
    that is block-diagonal across these classes: products of two monomials
    from the same class are invariant, while cross-class products are not.
    """
    if not group.is_pure_sign():
        raise ValueError("sign_blocks requires a pure sign-symmetry group")
    blocks: dict[tuple, list[int]] = {}
    order = []
    for idx, mono in enumerate(basis):
        chi = sign_character(mono, group)
        if chi not in blocks:
            blocks[chi] = []
            order.append(chi)
        blocks[chi].append(idx)
    return [blocks[chi] for chi in order]
