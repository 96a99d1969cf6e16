"""Compile affinely-parameterized SOS constraints into a standard-form SDP.

An :class:`SosProgram` holds scalar decision variables, SOS constraints whose
polynomial expressions are affine in those variables, and a linear objective.
Compilation produces one PSD (Gram) block per SOS constraint block and one
equality row per monomial: the coefficients generated by b(x)^T Q b(x) must
match the affine expression coefficient-by-coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import Monomial, Polynomial, grlex_key, monomial_mul


class SosCompileError(ValueError):
    """Raised when a constraint's support cannot be generated by its Gram basis."""


@dataclass
class AffinePolynomial:
    """p0(x) + sum_k c_k p_k(x) with scalar decision variables c_k."""
    constant: Polynomial
    parts: list  # list of (var_id, Polynomial)

    @property
    def nvars(self) -> int:
        return self.constant.nvars

    def degree(self) -> int:
        degs = [self.constant.degree()]
        degs += [p.degree() for _, p in self.parts]
        return max(degs)

    def support(self) -> set:
        mono = set(self.constant.terms)
        for _, p in self.parts:
            mono |= set(p.terms)
        return mono

    def instantiate(self, values: dict) -> Polynomial:
        out = self.constant
        for var_id, p in self.parts:
            out = out + p * values[var_id]
        return out


@dataclass
class SosConstraint:
    expr: AffinePolynomial
    gram_basis: list            # monomials spanning the Gram vector b(x)
    blocks: list                # partition of basis indices (symmetry blocks)
    label: str = ""


@dataclass
class SosProgram:
    nvars: int
    var_names: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)   # var_id -> coefficient (minimized)
    constraints: list = field(default_factory=list)
    extra_equalities: list = field(default_factory=list)  # ({var_id: coef}, rhs)

    def add_variable(self, name: str) -> int:
        self.var_names.append(name)
        return len(self.var_names) - 1

    def var_id(self, name: str) -> int:
        return self.var_names.index(name)

    def add_sos(self, expr: AffinePolynomial, gram_basis: Sequence[Monomial],
                blocks: Sequence[Sequence[int]] | None = None, label: str = ""):
        basis = list(gram_basis)
        if not basis:
            raise ValueError("empty Gram basis")
        if blocks is None:
            blocks = [list(range(len(basis)))]
        self.constraints.append(
            SosConstraint(expr, basis, [list(b) for b in blocks], label))

    def add_linear_inequality(self, expr: AffinePolynomial, label: str = ""):
        """expr >= 0 for a constant-in-x expression, via a 1x1 Gram block."""
        unit = (0,) * self.nvars
        self.add_sos(expr, [unit], [[0]], label=label)


def top_degree_restriction(model, d: int) -> list:
    """Degree-d ansatz span whose top terms cancel in f.grad(V).

    The restriction is imposed by substituting these generator polynomials
    for the individual degree-d monomials of V, which constrains the degree-d
    coefficients to the model's cancellation span; the resulting f.grad(V)
    has degree <= d.  Models without an ansatz and with even-degree f cannot
    support the parity argument and raise.
    """
    if d % 2:
        raise ValueError(f"ansatz degree must be even, got {d}")
    if model.top_degree_span is None:
        fdeg = max(fi.degree() for fi in model.f)
        if fdeg % 2 == 0:
            raise ValueError(
                f"model {model.name} has no top-degree ansatz and deg(f)={fdeg} "
                "is even: the highest-degree terms of f.grad(V) cannot cancel")
        return []
    return model.top_degree_span(d)


def sos_template(basis: Sequence[Monomial]) -> dict:
    """Coefficient map of a Gram form: monomial -> [(i, j, multiplier)].

    With sigma(x) = b(x)^T Q b(x) and Q symmetric, the coefficient of a
    monomial mu is sum over pairs i <= j with b_i * b_j = mu of
    (1 if i == j else 2) * Q_ij.
    """
    if not basis:
        raise ValueError("empty Gram basis")
    pair_map: dict = {}
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            mono = monomial_mul(basis[i], basis[j])
            mult = 1.0 if i == j else 2.0
            pair_map.setdefault(mono, []).append((i, j, mult))
    return pair_map


# ---------------------------------------------------------------------------
# standard-form SDP
# ---------------------------------------------------------------------------

@dataclass
class SdpProblem:
    """min sum_l <C_l, X_l> + c_f . u  s.t.  per-row linear equalities,

    X_l PSD, u free.  Row semantics: sum over stored (block, p, q, coef) with
    p <= q of coef * X_l[p, q] plus sum of (j, coef) free terms equals rhs.
    """
    block_dims: list
    nfree: int
    rows: list          # list of ({block: [(p, q, coef)]}, [(j, coef)], rhs)
    free_objective: np.ndarray
    block_objectives: list | None = None   # optional dense symmetric C_l
    meta: dict = field(default_factory=dict)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def block_objective(self, l: int) -> np.ndarray:
        if self.block_objectives is None or self.block_objectives[l] is None:
            return np.zeros((self.block_dims[l], self.block_dims[l]))
        return self.block_objectives[l]

    def to_text(self) -> str:
        """Sparse text export (documented in the README):

        line 1: ``blocks k1 k2 ...``        PSD block dimensions
        line 2: ``free f``                   number of free variables
        line 3: ``rows m``                   number of equality rows
        then per row:   ``row i rhs``
              entries:  ``b l p q coef``     block entry (p <= q, upper triangle)
                        ``f j coef``         free-variable entry
        objective:      ``objf j coef``      free part
                        ``objb l p q coef``  block part (if any)
        """
        out = ["blocks " + " ".join(str(k) for k in self.block_dims),
               f"free {self.nfree}", f"rows {self.nrows}"]
        for i, (bent, fent, rhs) in enumerate(self.rows):
            out.append(f"row {i} {rhs!r}")
            for l in sorted(bent):
                for p, q, c in bent[l]:
                    out.append(f"b {l} {p} {q} {c!r}")
            for j, c in fent:
                out.append(f"f {j} {c!r}")
        for j, c in enumerate(self.free_objective):
            if c:
                out.append(f"objf {j} {c!r}")
        if self.block_objectives is not None:
            for l, C in enumerate(self.block_objectives):
                if C is None:
                    continue
                k = self.block_dims[l]
                for p in range(k):
                    for q in range(p, k):
                        if C[p, q]:
                            out.append(f"objb {l} {p} {q} {C[p, q]!r}")
        return "\n".join(out) + "\n"


def compile(program: SosProgram) -> SdpProblem:
    """Lower an SOS program to a standard-form SDP.

    One PSD block per (symmetry block of each) SOS constraint; one equality
    row per monomial in the union of the affine support and the Gram-generated
    support.  A monomial whose affine expression has a nonzero constant
    coefficient but no Gram pairs and no decision-variable coefficients is
    inexpressible: compilation fails loudly, naming the monomial.
    """
    nfree = len(program.var_names)
    block_dims: list = []
    rows: list = []

    for ci, con in enumerate(program.constraints):
        # map (block local index) for each basis index in each symmetry block
        base = len(block_dims)
        index_of = {}
        for bi, block in enumerate(con.blocks):
            block_dims.append(len(block))
            for local, basis_idx in enumerate(block):
                index_of[basis_idx] = (base + bi, local)
        covered = set()
        for block in con.blocks:
            covered.update(block)
        if covered != set(range(len(con.gram_basis))):
            raise ValueError(
                f"constraint {ci}: blocks do not partition the Gram basis")

        # Gram pair map restricted to within-block pairs
        pair_map: dict = {}
        for bi, block in enumerate(con.blocks):
            for ii in range(len(block)):
                for jj in range(ii, len(block)):
                    gi, gj = block[ii], block[jj]
                    mono = monomial_mul(con.gram_basis[gi], con.gram_basis[gj])
                    blk, p = index_of[gi]
                    _, q = index_of[gj]
                    pp, qq = min(p, q), max(p, q)
                    mult = 1.0 if gi == gj else 2.0
                    pair_map.setdefault(mono, []).append((blk, pp, qq, mult))

        support = set(pair_map) | con.expr.support()
        const_terms = con.expr.constant.terms
        var_parts = [(vid, p.terms) for vid, p in con.expr.parts]

        for mono in sorted(support, key=grlex_key):
            bent: dict = {}
            for blk, p, q, mult in pair_map.get(mono, ()):
                bent.setdefault(blk, []).append((p, q, mult))
            fent = []
            for vid, terms in var_parts:
                c = terms.get(mono, 0.0)
                if c:
                    fent.append((vid, -c))
            rhs = const_terms.get(mono, 0.0)
            if not bent and not fent:
                if rhs:
                    raise SosCompileError(
                        f"constraint {ci} ({con.label or 'unlabeled'}): monomial "
                        f"{mono} with coefficient {rhs} is not expressible by the "
                        f"Gram basis (degree/support mismatch)")
                continue   # vacuous row
            rows.append((bent, fent, rhs))

    for coeffs, rhs in program.extra_equalities:
        fent = [(vid, c) for vid, c in sorted(coeffs.items()) if c]
        rows.append(({}, fent, float(rhs)))

    c_f = np.zeros(nfree)
    for vid, c in program.objective.items():
        c_f[vid] = c

    return SdpProblem(block_dims=block_dims, nfree=nfree, rows=rows,
                      free_objective=c_f,
                      meta={"constraint_labels": [c.label for c in program.constraints],
                            "constraint_block_span": _block_spans(program)})


def _block_spans(program: SosProgram) -> list:
    spans = []
    k = 0
    for con in program.constraints:
        spans.append((k, k + len(con.blocks)))
        k += len(con.blocks)
    return spans


# ---------------------------------------------------------------------------
# certificate recovery
# ---------------------------------------------------------------------------

@dataclass
class RecoveredSos:
    """One SOS constraint reconstructed from a solved Gram matrix."""
    label: str
    gram_bases: list          # per block: list of monomials
    gram_blocks: list         # per block: dense PSD matrix
    min_eigenvalues: list
    reconstruction_error: float
    sos_poly: Polynomial      # b^T Q b as a polynomial


def recover(solution, program: SosProgram, problem: SdpProblem):
    """Rebuild decision values and per-constraint Gram data from a solution.

    Returns (values: dict var_id -> float, [RecoveredSos...]).  Reconstruction
    error is the largest coefficient mismatch between the Gram-generated
    polynomial and the affine expression instantiated at the solved values.
    """
    values = {vid: float(solution.free[vid]) for vid in range(len(program.var_names))}
    spans = problem.meta["constraint_block_span"]
    recovered = []
    for con, (lo, hi) in zip(program.constraints, spans):
        bases = []
        grams = []
        mineigs = []
        sos_poly = Polynomial.zero(program.nvars)
        for bi, blk in enumerate(range(lo, hi)):
            basis = [con.gram_basis[i] for i in con.blocks[bi]]
            Q = np.asarray(solution.X[blk])
            bases.append(basis)
            grams.append(Q)
            mineigs.append(float(np.linalg.eigvalsh(Q)[0]) if Q.size else 0.0)
            terms: dict = {}
            for i in range(len(basis)):
                for j in range(len(basis)):
                    mono = monomial_mul(basis[i], basis[j])
                    terms[mono] = terms.get(mono, 0.0) + Q[i, j]
            sos_poly = sos_poly + Polynomial(program.nvars, terms, drop_eps=0.0)
        target = con.expr.instantiate(values)
        err = sos_poly.max_abs_coeff_diff(target)
        recovered.append(RecoveredSos(
            label=con.label, gram_bases=bases, gram_blocks=grams,
            min_eigenvalues=mineigs, reconstruction_error=err,
            sos_poly=sos_poly))
    return values, recovered
