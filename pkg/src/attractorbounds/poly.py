"""Sparse multivariate polynomials over float coefficients.

Monomials are exponent tuples of length ``nvars``; polynomials map monomials
to nonzero coefficients.  The canonical term order is graded lexicographic
(grlex): lower total degree first, ties broken by comparing exponent tuples
lexicographically with the first variable most significant.
"""

from __future__ import annotations

import math
import re
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import numpy as np

Monomial = tuple  # exponent tuple, one nonnegative int per variable

# Coefficients smaller than this (in absolute value) are dropped after
# arithmetic to keep polynomials sparse.  Tunable.
DROP_EPS = 1e-14


def grlex_key(mono: Monomial):
    """Sort key realizing the grlex order (ascending)."""
    return (sum(mono), mono)


def monomial_degree(mono: Monomial) -> int:
    return sum(mono)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_basis(n: int, d: int) -> list[Monomial]:
    """All monomials in n variables of total degree <= d, in grlex order.

    The count is C(n+d, d).
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if d < 0:
        raise ValueError(f"negative degree {d}")
    basis = []
    for deg in range(d + 1):
        level = []
        for combo in combinations_with_replacement(range(n), deg):
            exp = [0] * n
            for idx in combo:
                exp[idx] += 1
            level.append(tuple(exp))
        level.sort()
        basis.extend(level)
    assert len(basis) == math.comb(n + d, d)
    return basis


class Polynomial:
    """Immutable sparse polynomial: dict of exponent tuple -> coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, float] | None = None,
                 drop_eps: float = DROP_EPS):
        if nvars < 1:
            raise ValueError(f"need at least one variable, got nvars={nvars}")
        clean: dict[Monomial, float] = {}
        if terms:
            for mono, coef in terms.items():
                if len(mono) != nvars:
                    raise ValueError(
                        f"exponent tuple {mono} has length {len(mono)}, expected {nvars}")
                c = float(coef)
                if abs(c) > drop_eps:
                    clean[tuple(int(e) for e in mono)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # ---------------- constructors ----------------

    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars, {})

    @staticmethod
    def constant(c: float, nvars: int) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[i] = 1
        return Polynomial(nvars, {tuple(exp): 1.0})

    @staticmethod
    def monomial(mono: Monomial, coef: float = 1.0) -> "Polynomial":
        return Polynomial(len(mono), {tuple(mono): coef})

    # ---------------- basic queries ----------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> float:
        return self.terms.get(tuple(mono), 0.0)

    def sorted_terms(self) -> list[tuple[Monomial, float]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def max_abs_coeff_diff(self, other: "Polynomial") -> float:
        """Largest absolute coefficient difference against another polynomial."""
        self._check_dims(other)
        keys = set(self.terms) | set(other.terms)
        if not keys:
            return 0.0
        return max(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) for k in keys)

    def _check_dims(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"dimension mismatch: {self.nvars} vs {other.nvars} variables")

    # ---------------- arithmetic ----------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(other, self.nvars)
        self._check_dims(other)
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            terms[mono] = terms.get(mono, 0.0) + coef
        return Polynomial(self.nvars, terms)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()},
                          drop_eps=0.0)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(other, self.nvars)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial(self.nvars,
                              {m: c * other for m, c in self.terms.items()})
        self._check_dims(other)
        terms: dict[Monomial, float] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, 0.0) + c1 * c2
        return Polynomial(self.nvars, terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1.0, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    # ---------------- calculus ----------------

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to variable i (exact)."""
        terms: dict[Monomial, float] = {}
        for mono, coef in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            m = list(mono)
            m[i] = e - 1
            mt = tuple(m)
            terms[mt] = terms.get(mt, 0.0) + coef * e
        return Polynomial(self.nvars, terms, drop_eps=0.0)

    # ---------------- evaluation ----------------

    def evaluate(self, x: Sequence[float]) -> float:
        """Value at a point, by direct per-term summation."""
        if len(x) != self.nvars:
            raise ValueError(
                f"point has dimension {len(x)}, expected {self.nvars}")
        # memoize powers of each variable for this call
        max_exp = [0] * self.nvars
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers = [[1.0] for _ in range(self.nvars)]
        for i in range(self.nvars):
            xi = float(x[i])
            for _ in range(max_exp[i]):
                powers[i].append(powers[i][-1] * xi)
        total = 0.0
        for mono, coef in self.terms.items():
            v = coef
            for i, e in enumerate(mono):
                if e:
                    v *= powers[i][e]
            total += v
        return total

    def evaluate_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at an (N, nvars) array of points."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.nvars:
            raise ValueError(f"expected (N, {self.nvars}) array, got {pts.shape}")
        if not self.terms:
            return np.zeros(pts.shape[0])
        exps = np.array(list(self.terms.keys()), dtype=np.int64)  # (T, n)
        coefs = np.array(list(self.terms.values()))               # (T,)
        # powers[i][e] = pts[:, i] ** e, computed once per variable
        out = np.zeros(pts.shape[0])
        max_exp = exps.max(axis=0)
        pow_tables = []
        for i in range(self.nvars):
            tbl = np.ones((max_exp[i] + 1, pts.shape[0]))
            for e in range(1, max_exp[i] + 1):
                tbl[e] = tbl[e - 1] * pts[:, i]
            pow_tables.append(tbl)
        for t in range(exps.shape[0]):
            v = np.full(pts.shape[0], coefs[t])
            for i in range(self.nvars):
                e = exps[t, i]
                if e:
                    v = v * pow_tables[i][e]
            out += v
        return out

    # ---------------- coordinate changes ----------------

    def rescale(self, s: Sequence[float]) -> "Polynomial":
        """Substitute x_i -> s_i * x_i for positive scales s."""
        if len(s) != self.nvars:
            raise ValueError(f"scale has length {len(s)}, expected {self.nvars}")
        s = [float(v) for v in s]
        if any(v <= 0 for v in s):
            raise ValueError(f"scales must be positive, got {s}")
        terms = {}
        for mono, coef in self.terms.items():
            factor = 1.0
            for si, e in zip(s, mono):
                factor *= si ** e
            terms[mono] = coef * factor
        return Polynomial(self.nvars, terms)

    # ---------------- text format ----------------

    def to_string(self) -> str:
        """Render as a sum of ``coeff * x1^a1 * ... `` terms.

        Coefficients are printed with shortest round-trip precision (at most
        17 significant digits), so parse(to_string(p)) == p bit-exactly.
        """
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in self.sorted_terms():
            factors = [repr(coef)]
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    @staticmethod
    def from_string(text: str, nvars: int) -> "Polynomial":
        """Parse the text format produced by :meth:`to_string`.

        Whitespace-insensitive; accepts terms joined by ``+`` or ``-``,
        optional coefficients, and ``xK^e`` factors with 1-based K.
        """
        compact = text.replace(" ", "").replace("\t", "").replace("\n", "")
        if not compact:
            raise ValueError("empty polynomial string")
        if compact == "0":
            return Polynomial.zero(nvars)
        # split into signed terms at +/- that are not exponent signs (1e-3)
        pieces = re.split(r"(?<![eE])([+-])", compact)
        signed_terms: list[tuple[float, str]] = []
        if pieces[0]:
            signed_terms.append((1.0, pieces[0]))
        pending = 1.0
        for tok, body in zip(pieces[1::2], pieces[2::2]):
            s = pending * (-1.0 if tok == "-" else 1.0)
            if body:
                signed_terms.append((s, body))
                pending = 1.0
            else:
                pending = s  # consecutive signs fold into the next term
        if pending != 1.0:
            raise ValueError(f"dangling sign in {text!r}")
        terms: dict[Monomial, float] = {}
        for sign, body in signed_terms:
            if not body:
                raise ValueError(f"dangling sign in {text!r}")
            coef = sign
            exp = [0] * nvars
            for factor in body.split("*"):
                if not factor:
                    raise ValueError(f"empty factor in term {chunk!r}")
                m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if m:
                    idx = int(m.group(1)) - 1
                    if not 0 <= idx < nvars:
                        raise ValueError(
                            f"variable x{idx + 1} out of range for nvars={nvars}")
                    exp[idx] += int(m.group(2) or 1)
                else:
                    coef *= float(factor)
            mono = tuple(exp)
            terms[mono] = terms.get(mono, 0.0) + coef
        return Polynomial(nvars, terms, drop_eps=0.0)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_string()!r})"


def lie_derivative(V: Polynomial, f: Sequence[Polynomial]) -> Polynomial:
    """Derivative of V along the flow of dx/dt = f(x): returns f . grad V."""
    if len(f) != V.nvars:
        raise ValueError(
            f"vector field has {len(f)} components, expected {V.nvars}")
    out = Polynomial.zero(V.nvars)
    for i, fi in enumerate(f):
        if fi.nvars != V.nvars:
            raise ValueError(
                f"component {i} has nvars={fi.nvars}, expected {V.nvars}")
        out = out + fi * V.diff(i)
    return out


def evaluate_vector(fs: Sequence[Polynomial], pts: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial vector field at an (N, n) batch; returns (N, len(fs))."""
    pts = np.asarray(pts, dtype=float)
    return np.stack([fi.evaluate_many(pts) for fi in fs], axis=1)
