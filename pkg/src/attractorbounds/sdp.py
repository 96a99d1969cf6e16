"""Dense primal-dual interior-point solver for block SDPs with free variables.

Solves   min  sum_l <C_l, X_l> + c_f . u
         s.t. sum_l <A_{i,l}, X_l> + (B u)_i = b_i     (i = 1..m)
              X_l >= 0 (PSD),  u free,

by a Mehrotra-style predictor-corrector with the HKM search direction.  The
Schur complement is assembled densely per block -- in the numerically
favorable Gram form Z Z^T with Z = R (Ls^-T kron Lx) when affordable, and via
an explicit Kronecker product otherwise -- and factored by Cholesky.  Free
variables are handled natively through the augmented system

    [ M   B ] [dy]   [h ]
    [ B^T 0 ] [du] = [rf]

solved by block elimination with iterative refinement.  Equality rows are
equilibrated to unit norm internally; reported residuals refer to the
original data.  Everything is deterministic for fixed inputs and settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from . import defaults
from .soscomp import SdpProblem

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "primal-infeasible-suspected"
STATUS_ILL_CONDITIONED = "ill-conditioned"
STATUS_ITERATION_LIMIT = "iteration-limit"

# Gram-form Schur assembly costs ~ m_block^2 * k^2 flops per block; above
# this budget fall back to the cheaper (but less accurate) Kronecker path.
_GRAM_FLOP_BUDGET = 2e9
_KRON_MAX_DIM = 96


@dataclass(frozen=True)
class SolverSettings:
    gap_tol: float = defaults.SOLVER_GAP_TOL
    feas_tol: float = defaults.SOLVER_FEAS_TOL
    max_iter: int = defaults.SOLVER_MAX_ITER
    step_fraction: float = defaults.SOLVER_STEP_FRACTION
    schur_reg: float = defaults.SOLVER_SCHUR_REG
    refine_steps: int = 3
    infeas_cert_tol: float = 1e-9
    stall_iters: int = 15
    log_path: str | None = None

    def __post_init__(self):
        if min(self.gap_tol, self.feas_tol, self.schur_reg) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class SdpSolution:
    status: str
    X: list                      # per-block primal matrices
    free: np.ndarray             # free-variable values
    y: np.ndarray                # dual multipliers (original row scaling)
    S: list                      # per-block dual slacks
    residuals: dict              # primal_inf, dual_inf, rel_gap (relative)
    iterations: int
    primal_objective: float
    dual_objective: float
    infeasibility_certificate: np.ndarray | None = None


# ---------------------------------------------------------------------------
# data preparation
# ---------------------------------------------------------------------------

class _Data:
    """Vectorized problem data: per-block sparse row maps and free columns.

    R_l is (m, k_l^2) with full symmetric entries so (R_l @ vec(X))_i equals
    <A_{i,l}, X> for symmetric X in row-major vec convention.
    """

    def __init__(self, problem: SdpProblem):
        self.dims = list(problem.block_dims)
        self.nblocks = len(self.dims)
        self.m = problem.nrows
        self.nfree = problem.nfree
        self.b = np.array([r[2] for r in problem.rows], dtype=float)
        self.c_f = np.asarray(problem.free_objective, dtype=float)
        self.C = [problem.block_objective(l) for l in range(self.nblocks)]

        self.R = []
        for l, k in enumerate(self.dims):
            rows_idx, cols_idx, vals = [], [], []
            for i, (bent, _f, _rhs) in enumerate(problem.rows):
                for p, q, coef in bent.get(l, ()):
                    if p == q:
                        rows_idx.append(i); cols_idx.append(p * k + q)
                        vals.append(coef)
                    else:
                        half = 0.5 * coef
                        rows_idx.append(i); cols_idx.append(p * k + q)
                        vals.append(half)
                        rows_idx.append(i); cols_idx.append(q * k + p)
                        vals.append(half)
            self.R.append(sp.csr_matrix((vals, (rows_idx, cols_idx)),
                                        shape=(self.m, k * k)))

        rows_idx, cols_idx, vals = [], [], []
        for i, (_bent, fent, _rhs) in enumerate(problem.rows):
            for j, coef in fent:
                rows_idx.append(i); cols_idx.append(j); vals.append(coef)
        self.B = sp.csr_matrix((vals, (rows_idx, cols_idx)),
                               shape=(self.m, self.nfree))
        self.Bd = self.B.toarray() if self.nfree else np.zeros((self.m, 0))
        self.row_norms = self._row_norms()
        self.norm_b = float(np.linalg.norm(self.b))
        self.norm_c = float(np.sqrt(sum(np.sum(Cl * Cl) for Cl in self.C)
                                    + np.dot(self.c_f, self.c_f)))

    def _row_norms(self) -> np.ndarray:
        sq = np.zeros(self.m)
        for R in self.R:
            sq += np.asarray(R.multiply(R).sum(axis=1)).ravel()
        sq += np.asarray(self.B.multiply(self.B).sum(axis=1)).ravel()
        return np.sqrt(sq)

    def apply_A(self, X: Sequence[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.m)
        for R, Xl in zip(self.R, X):
            out += R @ Xl.ravel()
        return out

    def apply_At(self, y: np.ndarray) -> list:
        return [(R.T @ y).reshape(k, k) for R, k in zip(self.R, self.dims)]

    def residuals(self, X, u, y, S) -> dict:
        rp = self.b - self.apply_A(X) - self.Bd @ u
        At = self.apply_At(y)
        rd_sq = 0.0
        for l in range(self.nblocks):
            Rd = self.C[l] - At[l] - S[l]
            rd_sq += float(np.sum(Rd * Rd))
        rf = self.c_f - self.Bd.T @ y
        pobj = sum(float(np.sum(Cl * Xl)) for Cl, Xl in zip(self.C, X)) \
            + float(np.dot(self.c_f, u))
        dobj = float(np.dot(self.b, y))
        return {
            "primal_inf": float(np.linalg.norm(rp) / (1.0 + self.norm_b)),
            "dual_inf": float(np.sqrt(rd_sq + np.dot(rf, rf)) / (1.0 + self.norm_c)),
            "rel_gap": abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj)),
            "primal_objective": pobj,
            "dual_objective": dobj,
        }


def compute_residuals(problem: SdpProblem, X: Sequence[np.ndarray],
                      u: np.ndarray, y: np.ndarray,
                      S: Sequence[np.ndarray]) -> dict:
    """Relative KKT residuals of a primal-dual point, from raw problem data."""
    data = _Data(problem)
    return data.residuals(X, np.asarray(u, float), np.asarray(y, float), S)


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------

def _try_cholesky(A: np.ndarray):
    try:
        return la.cholesky(A, lower=True)
    except la.LinAlgError:
        return None


def _max_step(L: np.ndarray, dM: np.ndarray) -> float:
    """Largest alpha with M + alpha*dM PSD, for M = L L^T."""
    Y = la.solve_triangular(L, dM, lower=True)
    Y = la.solve_triangular(L, Y.T, lower=True)
    lam_min = la.eigvalsh(0.5 * (Y + Y.T))[0]
    if lam_min >= -1e-16:
        return np.inf
    return -1.0 / lam_min


def _schur_block(R: sp.csr_matrix, Lx: np.ndarray, Ls: np.ndarray,
                 Sinv: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Contribution R (S^-1 kron X) R^T restricted to the rows touching R.

    Returns (row_index_array, dense M_active) so the caller can scatter into
    the full Schur complement.  Uses the Gram form Z Z^T with rows
    vec(Ls^-1 A_i Lx) when the flop budget allows (exactly PSD, better
    conditioned), else a Kronecker product.
    """
    k = X.shape[0]
    # rows with any entry in this block
    counts = np.diff(R.indptr)
    rows = np.nonzero(counts)[0]
    Ra = R[rows]
    ma = rows.shape[0]
    if ma == 0:
        return rows, np.zeros((0, 0))
    if ma * ma * k * k <= _GRAM_FLOP_BUDGET or k > _KRON_MAX_DIM:
        # stack of A_i, then Ls^-1 A_i (via one triangular solve), then x Lx
        A_t = Ra.toarray().reshape(ma, k, k)
        T = la.solve_triangular(Ls, A_t.reshape(ma * k, k).T, lower=True).T
        T = T.reshape(ma, k, k).transpose(0, 2, 1).reshape(ma * k, k)
        Z = (T @ Lx).reshape(ma, k * k)
        return rows, Z @ Z.T
    K = np.kron(Sinv, X)
    T = np.asarray(Ra @ K)
    return rows, np.asarray(Ra @ T.T)


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

def solve(problem: SdpProblem, settings: SolverSettings | None = None) -> SdpSolution:
    """Run the interior-point iteration; see the module docstring."""
    if settings is None:
        settings = SolverSettings()
    raw = _Data(problem)
    m, nfree, dims = raw.m, raw.nfree, raw.dims
    K = sum(dims)
    if K == 0:
        return _solve_linear_only(raw, settings)

    # row equilibration (solution mapped back on exit)
    rs = np.maximum(raw.row_norms, 1e-10)
    D = sp.diags(1.0 / rs)
    R = [(D @ Rl).tocsr() for Rl in raw.R]
    Bd = np.asarray(D @ raw.Bd) if nfree else raw.Bd
    b = raw.b / rs
    Cb = raw.C
    c_f = raw.c_f
    norm_b = float(np.linalg.norm(b))
    norm_c = raw.norm_c

    def apply_A(Xs):
        out = np.zeros(m)
        for Rl, Xl in zip(R, Xs):
            out += Rl @ Xl.ravel()
        return out

    def apply_At(y):
        return [(Rl.T @ y).reshape(k, k) for Rl, k in zip(R, dims)]

    xi_p = max(10.0, float(np.max(np.abs(b))) if m else 1.0)
    xi_d = max(10.0, *(float(np.max(np.abs(Cl))) if Cl.size else 0.0 for Cl in Cb))
    X = [xi_p * np.eye(k) for k in dims]
    S = [xi_d * np.eye(k) for k in dims]
    Lx = [np.sqrt(xi_p) * np.eye(k) for k in dims]
    Ls = [np.sqrt(xi_d) * np.eye(k) for k in dims]
    y = np.zeros(m)
    u = np.zeros(nfree)

    # final answer selection prefers feasible iterates with the smallest gap;
    # the merit best is the fallback when feasibility was never reached
    best_feas = None          # (gap, X, u, y, S, it) among feasible iterates
    best_merit = (np.inf, None)
    stall = 0
    reg = settings.schur_reg
    status = STATUS_ITERATION_LIMIT
    infeas_cert = None
    log_rows = []
    it = 0

    for it in range(1, settings.max_iter + 1):
        rp = b - apply_A(X) - Bd @ u
        At = apply_At(y)
        Rd = [Cb[l] - At[l] - S[l] for l in range(len(dims))]
        rf = c_f - Bd.T @ y
        mu = sum(float(np.sum(Xl * Sl)) for Xl, Sl in zip(X, S)) / K
        pobj = sum(float(np.sum(Cl * Xl)) for Cl, Xl in zip(Cb, X)) \
            + float(np.dot(c_f, u))
        dobj = float(np.dot(b, y))
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        # convergence is judged on the original (unequilibrated) rows: only
        # the primal residual differs, by the per-row scale factors
        pinf = float(np.linalg.norm(rp * rs) / (1.0 + raw.norm_b))
        dinf = float(np.sqrt(sum(np.sum(Rdl * Rdl) for Rdl in Rd)
                             + np.dot(rf, rf)) / (1.0 + norm_c))

        if settings.log_path:
            log_rows.append((it, mu, gap, pinf, dinf))

        snapshot = None
        if max(pinf, dinf) <= settings.feas_tol and (
                best_feas is None or gap < best_feas[0]):
            snapshot = ([Xl.copy() for Xl in X], u.copy(), y.copy(),
                        [Sl.copy() for Sl in S], it)
            best_feas = (gap,) + snapshot

        merit = max(gap, pinf, dinf)
        if merit < best_merit[0] * (1.0 - 1e-3):
            if snapshot is None:
                snapshot = ([Xl.copy() for Xl in X], u.copy(), y.copy(),
                            [Sl.copy() for Sl in S], it)
            best_merit = (merit, snapshot)
            stall = 0
        else:
            stall += 1

        if gap <= settings.gap_tol and max(pinf, dinf) <= settings.feas_tol:
            status = STATUS_OPTIMAL
            break

        cert = _infeasibility_certificate(R, Bd, b, dims, nfree, y, settings)
        if cert is not None:
            status = STATUS_INFEASIBLE
            infeas_cert = cert / rs   # certificate for the unscaled rows
            break

        if stall >= settings.stall_iters:
            status = STATUS_ILL_CONDITIONED
            break

        Sinv = []
        for l, k in enumerate(dims):
            Si = la.cho_solve((Ls[l], True), np.eye(k))
            Sinv.append(0.5 * (Si + Si.T))

        M = np.zeros((m, m))
        for l in range(len(dims)):
            rows_l, Ma = _schur_block(R[l], Lx[l], Ls[l], Sinv[l], X[l])
            if rows_l.size:
                M[np.ix_(rows_l, rows_l)] += Ma

        factor = _factor_augmented(M, Bd, reg)
        while factor is None and reg < 1e-6:
            reg = max(reg * 100.0, 1e-10)
            factor = _factor_augmented(M, Bd, reg)
        if factor is None:
            status = STATUS_ILL_CONDITIONED
            break

        def rsolve_S(T, l):
            # T S_l^{-1} via two triangular solves (avoids explicit inverse)
            W = la.cho_solve((Ls[l], True), T.T)
            return W.T

        def newton(Rc):
            g = rp.copy()
            for l in range(len(dims)):
                T = rsolve_S(Rc[l] - X[l] @ Rd[l], l)
                g -= R[l] @ T.ravel()
            dy, du = _solve_augmented(factor, M, Bd, g, rf,
                                      settings.refine_steps)
            Atd = apply_At(dy)
            dS = [Rd[l] - Atd[l] for l in range(len(dims))]
            dX = []
            for l in range(len(dims)):
                V = rsolve_S(Rc[l] - X[l] @ dS[l], l)
                dX.append(0.5 * (V + V.T))
            return dy, du, dX, dS

        # predictor (affine scaling)
        Rc = [-X[l] @ S[l] for l in range(len(dims))]
        dy_a, du_a, dX_a, dS_a = newton(Rc)
        ap = min(1.0, *(_max_step(Lx[l], dX_a[l]) for l in range(len(dims))))
        ad = min(1.0, *(_max_step(Ls[l], dS_a[l]) for l in range(len(dims))))
        mu_aff = sum(float(np.sum((X[l] + ap * dX_a[l]) * (S[l] + ad * dS_a[l])))
                     for l in range(len(dims))) / K
        sigma = min(1.0, max(0.0, max(mu_aff, 0.0) / mu) ** 3)
        # keep the barrier from outrunning feasibility: aggressive centering
        # while the primal residual exceeds the duality gap
        if pinf > 10.0 * max(gap, settings.gap_tol):
            sigma = max(sigma, 0.5)

        # corrector
        Rc = [sigma * mu * np.eye(dims[l]) - X[l] @ S[l] - dX_a[l] @ dS_a[l]
              for l in range(len(dims))]
        dy, du, dX, dS = newton(Rc)

        # direction quality: the linearized primal equation must hold, or the
        # step cannot reduce infeasibility and the endgame has been reached
        rp_norm = float(np.linalg.norm(rp))
        dir_err = float(np.linalg.norm(apply_A(dX) + Bd @ du - rp)) \
            / max(rp_norm, 1e-2 * (1.0 + norm_b))
        if dir_err > 0.5:
            status = STATUS_ILL_CONDITIONED
            break

        gamma = settings.step_fraction
        ap = min(1.0, gamma * min(*(_max_step(Lx[l], dX[l])
                                    for l in range(len(dims))), 1e32))
        ad = min(1.0, gamma * min(*(_max_step(Ls[l], dS[l])
                                    for l in range(len(dims))), 1e32))

        # tentative update; back off if rounding pushed an iterate off the cone
        ok = False
        for _ in range(40):
            Xn = [0.5 * ((X[l] + ap * dX[l]) + (X[l] + ap * dX[l]).T)
                  for l in range(len(dims))]
            Lxn = [_try_cholesky(Xl) for Xl in Xn]
            if all(L is not None for L in Lxn):
                ok = True
                break
            ap *= 0.8
        if not ok:
            status = STATUS_ILL_CONDITIONED
            break
        ok = False
        for _ in range(40):
            Sn = [0.5 * ((S[l] + ad * dS[l]) + (S[l] + ad * dS[l]).T)
                  for l in range(len(dims))]
            Lsn = [_try_cholesky(Sl) for Sl in Sn]
            if all(L is not None for L in Lsn):
                ok = True
                break
            ad *= 0.8
        if not ok:
            status = STATUS_ILL_CONDITIONED
            break
        X, Lx, S, Ls = Xn, Lxn, Sn, Lsn
        u = u + ap * du
        y = y + ad * dy

    if settings.log_path:
        with open(settings.log_path, "w") as fh:
            fh.write("iteration,mu,rel_gap,primal_inf,dual_inf\n")
            for row in log_rows:
                fh.write(",".join(repr(v) for v in row) + "\n")

    if status == STATUS_OPTIMAL or status == STATUS_INFEASIBLE:
        Xb, ub, yb, Sb = X, u, y, S
    elif best_feas is not None:
        _gap, Xb, ub, yb, Sb, _it = best_feas
    elif best_merit[1] is not None:
        Xb, ub, yb, Sb, _it = best_merit[1]
    else:
        Xb, ub, yb, Sb = X, u, y, S

    if status != STATUS_INFEASIBLE:
        Xb, ub = _polish_feasibility(R, Bd, b, dims, Xb, ub)

    y_raw = yb / rs    # undo row equilibration
    res = raw.residuals(Xb, ub, y_raw, Sb)
    if status == STATUS_OPTIMAL and (
            res["rel_gap"] > settings.gap_tol
            or max(res["primal_inf"], res["dual_inf"]) > settings.feas_tol):
        status = STATUS_ILL_CONDITIONED   # polishing must never break the contract
    return SdpSolution(
        status=status, X=Xb, free=ub, y=y_raw, S=Sb,
        residuals={k: res[k] for k in ("primal_inf", "dual_inf", "rel_gap")},
        iterations=it,
        primal_objective=res["primal_objective"],
        dual_objective=res["dual_objective"],
        infeasibility_certificate=infeas_cert,
    )


def _polish_feasibility(R, Bd, b, dims, X, u):
    """Least-norm projection of (X, u) onto the equality manifold.

    Solves (A A* + B B^T) w = rp with the mu-independent, well-conditioned
    normal matrix, then applies X += A*(w), u += B^T w.  The correction is
    kept only if every block stays PSD to rounding accuracy, so a returned
    certificate never gets worse, only (usually much) more feasible.
    """
    m = b.shape[0]
    rp = b - sum(Rl @ Xl.ravel() for Rl, Xl in zip(R, X)) - Bd @ u
    if float(np.linalg.norm(rp)) == 0.0:
        return X, u
    N = sum((Rl @ Rl.T).toarray() for Rl in R) + Bd @ Bd.T
    scale = max(1.0, float(np.max(np.diag(N))))
    LN = _try_cholesky(N + 1e-13 * scale * np.eye(m))
    if LN is None:
        return X, u
    w = la.cho_solve((LN, True), rp)
    for _ in range(3):   # refinement; N is constant so this reaches eps level
        r = rp - (N @ w)
        w = w + la.cho_solve((LN, True), r)
    Xn = []
    for Rl, Xl, k in zip(R, X, dims):
        d = (Rl.T @ w).reshape(k, k)
        Xc = Xl + 0.5 * (d + d.T)
        if k and la.eigvalsh(Xc)[0] < -1e-11 * max(1.0, float(np.trace(Xc))):
            return X, u
        Xn.append(Xc)
    return Xn, u + Bd.T @ w


def _factor_augmented(M: np.ndarray, Bd: np.ndarray, reg: float):
    """Cholesky of M + reg*I and the free-variable elimination pieces."""
    m = M.shape[0]
    scale = max(1.0, float(np.max(np.diag(M))) if m else 1.0)
    LM = _try_cholesky(M + (reg * scale) * np.eye(m))
    if LM is None:
        return None
    if Bd.shape[1]:
        F = la.solve_triangular(LM, Bd, lower=True)
        G = F.T @ F
        gs = max(1.0, float(np.max(np.diag(G))) if G.size else 1.0)
        LG = _try_cholesky(G + (reg * gs) * np.eye(G.shape[0]))
        if LG is None:
            return None
    else:
        F = np.zeros((m, 0))
        LG = np.zeros((0, 0))
    return LM, F, LG


# extended-precision refinement residuals pay off only while the matrix
# products stay affordable; above this row count stick to double precision
_LONGDOUBLE_REFINE_MAX_M = 600


def _solve_augmented(factor, M, Bd, h, rf, refine_steps: int):
    LM, F, LG = factor
    nfree = Bd.shape[1]
    m = M.shape[0]

    def base_solve(h1, h2):
        w1 = la.solve_triangular(LM, h1, lower=True)
        if nfree:
            du = la.cho_solve((LG, True), F.T @ w1 - h2)
            dy = la.solve_triangular(LM.T, w1 - F @ du, lower=False)
        else:
            du = np.zeros(0)
            dy = la.solve_triangular(LM.T, w1, lower=False)
        return dy, du

    dy, du = base_solve(h, rf)
    # iterative refinement against the unregularized augmented system; the
    # residual is computed in 80-bit precision on small systems, which is
    # what lets the refinement make progress once cond(M) passes ~1e14
    use_ld = m <= _LONGDOUBLE_REFINE_MAX_M
    if use_ld:
        M_ld = M.astype(np.longdouble)
        B_ld = Bd.astype(np.longdouble)
        h_ld = h.astype(np.longdouble)
        rf_ld = rf.astype(np.longdouble)
    prev = np.inf
    for _ in range(refine_steps):
        if use_ld:
            r1 = np.asarray(h_ld - (M_ld @ dy.astype(np.longdouble)
                                    + B_ld @ du.astype(np.longdouble)),
                            dtype=float)
            r2 = np.asarray(rf_ld - B_ld.T @ dy.astype(np.longdouble),
                            dtype=float) if nfree else np.zeros(0)
        else:
            r1 = h - (M @ dy + Bd @ du)
            r2 = rf - Bd.T @ dy if nfree else np.zeros(0)
        err = max(float(np.max(np.abs(r1))) if r1.size else 0.0,
                  float(np.max(np.abs(r2))) if r2.size else 0.0)
        if not np.isfinite(err) or err >= prev or err == 0.0:
            break
        prev = err
        ddy, ddu = base_solve(r1, r2)
        dy = dy + ddy
        du = du + ddu
    return dy, du


def _infeasibility_certificate(R, Bd, b, dims, nfree, y, settings):
    """Farkas-type ray test on y projected onto ker(B^T).

    A ray z with B^T z = 0, -A*(z) PSD, and b.z > 0 certifies primal
    infeasibility: any feasible (X, u) would give
    0 < b.z = <X, A*(z)> + u . B^T z <= 0.  The projection removes the
    fixed B^T y = c_f component that dual feasibility maintains.
    """
    ny = float(np.linalg.norm(y))
    if ny == 0:
        return None
    if nfree:
        G = Bd.T @ Bd
        try:
            coef = la.solve(G + 1e-12 * max(1.0, float(np.max(np.diag(G))))
                            * np.eye(nfree), Bd.T @ y, assume_a="pos")
        except la.LinAlgError:
            return None
        z = y - Bd @ coef
    else:
        z = y
    bz = float(np.dot(b, z))
    nz = float(np.linalg.norm(z))
    if nz == 0 or bz < 1e-4 * nz:
        return None
    zhat = z / bz
    tol = settings.infeas_cert_tol * (1.0 + float(np.linalg.norm(zhat)))
    for Rl, k in zip(R, dims):
        if k == 0:
            continue
        Al = (Rl.T @ zhat).reshape(k, k)
        w = la.eigvalsh(0.5 * (Al + Al.T))
        if w[-1] > tol:   # need -A*(zhat) PSD up to tol
            return None
    return zhat


def _solve_linear_only(data: _Data, settings: SolverSettings) -> SdpSolution:
    """No PSD blocks: plain equality-constrained linear program (KKT solve)."""
    Bd = data.Bd
    u, *_ = np.linalg.lstsq(Bd, data.b, rcond=None)
    y, *_ = np.linalg.lstsq(Bd.T, data.c_f, rcond=None)
    res = data.residuals([], u, y, [])
    ok = (res["primal_inf"] <= settings.feas_tol
          and res["dual_inf"] <= settings.feas_tol
          and res["rel_gap"] <= max(settings.gap_tol, 1e-9))
    return SdpSolution(
        status=STATUS_OPTIMAL if ok else STATUS_ILL_CONDITIONED,
        X=[], free=u, y=y, S=[],
        residuals={k: res[k] for k in ("primal_inf", "dual_inf", "rel_gap")},
        iterations=0,
        primal_objective=res["primal_objective"],
        dual_objective=res["dual_objective"])
