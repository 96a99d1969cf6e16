"""Built-in polynomial ODE models and their structural metadata.

Each model carries its vector field, parameters, symmetry group, coordinate
rescaling, known equilibria, registered quantities of interest, and (when
available) the generator of top-degree Lyapunov ansatz spans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .poly import Polynomial, lie_derivative
from .symmetry import SymmetryGroup, close_group_from_indices

EQUILIBRIUM_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class Quantity:
    """A named polynomial observable with a reporting normalizer."""
    name: str
    phi: Polynomial          # original (unscaled) coordinates
    normalizer: float = 1.0


@dataclass(frozen=True)
class Region:
    """Semialgebraic region {g_j >= 0, h_k = 0} in original coordinates."""
    inequalities: tuple
    equalities: tuple = ()

    def __post_init__(self):
        if not self.inequalities and not self.equalities:
            raise ValueError("region needs at least one defining polynomial")


@dataclass(frozen=True)
class OdeModel:
    name: str
    n: int
    f: tuple                       # vector field components, original coords
    params: dict
    symmetry: SymmetryGroup
    scale: tuple                   # positive per-variable rescaling factors
    equilibria: tuple              # known equilibria (original coords)
    quantities: dict               # name -> Quantity
    top_degree_span: Callable[[int], list[Polynomial]] | None = None
    region: Region | None = None   # default region for non-global bounds
    lambda_max: float = 8.0

    def __post_init__(self):
        if len(self.f) != self.n:
            raise ValueError(f"{len(self.f)} components for dimension {self.n}")
        for i, fi in enumerate(self.f):
            if fi.nvars != self.n:
                raise ValueError(f"component {i} has nvars={fi.nvars}")
        if len(self.scale) != self.n or any(s <= 0 for s in self.scale):
            raise ValueError(f"scale must be positive of length {self.n}")
        for x in self.equilibria:
            res = max(abs(fi.evaluate(x)) for fi in self.f)
            if res > EQUILIBRIUM_RESIDUAL_TOL:
                raise ValueError(
                    f"listed equilibrium {x} has residual {res:.2e}")

    # ---- coordinate handling --------------------------------------------

    def rescaled_f(self) -> list[Polynomial]:
        """Vector field in rescaled coordinates u = x / scale.

        du_i/dt = f_i(scale * u) / scale_i; time is unchanged.
        """
        return [fi.rescale(self.scale) * (1.0 / self.scale[i])
                for i, fi in enumerate(self.f)]

    def to_rescaled(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(pts, dtype=float) / np.asarray(self.scale)

    def from_rescaled(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(pts, dtype=float) * np.asarray(self.scale)

    # ---- evaluation -------------------------------------------------------

    def f_at(self, x: Sequence[float]) -> np.ndarray:
        return np.array([fi.evaluate(x) for fi in self.f])

    def f_batch(self, pts: np.ndarray) -> np.ndarray:
        from .poly import evaluate_vector
        return evaluate_vector(self.f, pts)

    def jacobian_at(self, x: Sequence[float]) -> np.ndarray:
        J = np.empty((self.n, self.n))
        for i, fi in enumerate(self.f):
            for j in range(self.n):
                J[i, j] = fi.diff(j).evaluate(x)
        return J

    def quantity(self, name: str) -> Quantity:
        try:
            return self.quantities[name]
        except KeyError:
            raise KeyError(
                f"unknown quantity {name!r} for model {self.name}; "
                f"registered: {sorted(self.quantities)}") from None

    # ---- config round-trip -------------------------------------------------

    def to_config(self) -> dict:
        cfg = {
            "name": self.name,
            "dimension": self.n,
            "f": [fi.to_string() for fi in self.f],
            "parameters": dict(self.params),
            "symmetry_generators": self.symmetry.generators_form(),
            "scale": list(self.scale),
            "equilibria": [list(map(float, x)) for x in self.equilibria],
            "quantities": {
                q.name: {"phi": q.phi.to_string(), "normalizer": q.normalizer}
                for q in self.quantities.values()},
            "lambda_max": self.lambda_max,
        }
        if self.region is not None:
            cfg["region"] = {
                "inequalities": [g.to_string() for g in self.region.inequalities],
                "equalities": [h.to_string() for h in self.region.equalities],
            }
        return cfg


def from_config(cfg: dict) -> OdeModel:
    """Build a model from a plain-dict config (see ``OdeModel.to_config``).

    Config models do not carry top-degree ansatz generators; global bounds
    for them run without the top-degree restriction.
    """
    n = int(cfg["dimension"])
    f = tuple(Polynomial.from_string(s, n) for s in cfg["f"])
    group = close_group_from_indices(cfg.get("symmetry_generators", []), n)
    region = None
    if "region" in cfg:
        region = Region(
            inequalities=tuple(Polynomial.from_string(s, n)
                               for s in cfg["region"].get("inequalities", [])),
            equalities=tuple(Polynomial.from_string(s, n)
                             for s in cfg["region"].get("equalities", [])))
    quantities = {}
    for name, q in cfg.get("quantities", {}).items():
        quantities[name] = Quantity(name, Polynomial.from_string(q["phi"], n),
                                    float(q.get("normalizer", 1.0)))
    return OdeModel(
        name=cfg.get("name", "custom"),
        n=n,
        f=f,
        params={k: float(v) for k, v in cfg.get("parameters", {}).items()},
        symmetry=group,
        scale=tuple(cfg.get("scale", [1.0] * n)),
        equilibria=tuple(np.array(x, dtype=float)
                         for x in cfg.get("equilibria", [])),
        quantities=quantities,
        region=region,
        lambda_max=float(cfg.get("lambda_max", 8.0)),
    )


# =====================================================================
# Lorenz system
# =====================================================================

def lorenz(sigma: float = 10.0, r: float = 28.0, beta: float = 8.0 / 3.0) -> OdeModel:
    """Lorenz equations (x, y, z); defaults are the standard chaotic values."""
    if sigma <= 0 or r <= 0 or beta <= 0:
        raise ValueError("parameters must be positive")
    n = 3
    x = Polynomial.variable(0, n)
    y = Polynomial.variable(1, n)
    z = Polynomial.variable(2, n)
    f = (sigma * (y - x),
         r * x - y - x * z,
         -beta * z + x * y)

    group = close_group_from_indices([[-1, -2, 3]], n)

    equilibria = [np.zeros(3)]
    if r > 1:
        a = math.sqrt(beta * (r - 1))
        equilibria.append(np.array([a, a, r - 1.0]))
        equilibria.append(np.array([-a, -a, r - 1.0]))

    # quantities: all monomials x^l y^m z^n up to cubic degree whose extrema
    # are not determined by lower-degree ones, normalized by their value at
    # the nonzero equilibria
    quantities = {}
    a = math.sqrt(beta * (r - 1)) if r > 1 else 1.0
    zq = r - 1.0 if r > 1 else 1.0
    for (l, m, k) in [(1, 0, 0), (0, 1, 0), (0, 0, 1),
                      (1, 1, 0), (1, 0, 1), (0, 1, 1),
                      (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
                      (1, 0, 2), (0, 2, 1), (0, 1, 2)]:
        name = ""
        for sym, e in zip("xyz", (l, m, k)):
            if e == 1:
                name += sym
            elif e > 1:
                name += f"{sym}{e}"
        phi = Polynomial(n, {(l, m, k): 1.0})
        quantities[name] = Quantity(name, phi, normalizer=a ** (l + m) * zq ** k)

    def top_span(d: int) -> list[Polynomial]:
        # highest-degree terms of V must lie in span{x^p (y^2+z^2)^q},
        # p + 2q = d, so that the quadratic part of f cancels in f.grad(V)
        if d % 2:
            raise ValueError("ansatz degrees are even")
        ysq_zsq = y * y + z * z
        return [(x ** (d - 2 * q)) * (ysq_zsq ** q) for q in range(d // 2 + 1)]

    return OdeModel(
        name="lorenz", n=n, f=f,
        params={"sigma": sigma, "r": r, "beta": beta},
        symmetry=group,
        scale=(25.0, 25.0, 25.0),
        equilibria=tuple(equilibria),
        quantities=quantities,
        top_degree_span=top_span,
        lambda_max=8.0,
    )


# =====================================================================
# Nine-mode shear-flow truncation
# =====================================================================

def nine_mode(alpha: float = 0.5, beta: float = math.pi / 2,
              gamma: float = 1.0, Re: float = 105.0) -> OdeModel:
    """Nine-mode shear flow model; coefficients derived from (alpha, beta, gamma)."""
    if min(alpha, beta, gamma, Re) <= 0:
        raise ValueError("parameters must be positive")
    n = 9
    al2, be2, ga2 = alpha ** 2, beta ** 2, gamma ** 2
    k_ag = math.sqrt(al2 + ga2)
    k_bg = math.sqrt(be2 + ga2)
    k_abg = math.sqrt(al2 + be2 + ga2)
    s32 = math.sqrt(1.5)
    s6 = math.sqrt(6.0)
    bg = beta * gamma
    abg = alpha * beta * gamma

    d = [be2,
         4 * be2 / 3 + ga2,
         be2 + ga2,
         (3 * al2 + 4 * be2) / 3,
         al2 + be2,
         (3 * al2 + 4 * be2 + 3 * ga2) / 3,
         al2 + be2 + ga2,
         al2 + be2 + ga2,
         9 * be2]

    def var(i):
        return Polynomial.variable(i, n)

    a = [var(i) for i in range(9)]

    # quadratic interaction terms per equation: list of (coef, i, j) meaning
    # coef * a_i * a_j (1-based mode indices converted below)
    quad = {
        1: [(-s32 * bg / k_abg, 6, 8), (s32 * bg / k_bg, 2, 3)],
        2: [(5 * math.sqrt(2.0) / (3 * math.sqrt(3.0)) * ga2 / k_ag, 4, 6),
            (-ga2 / (s6 * k_ag), 5, 7),
            (-abg / (s6 * k_ag * k_abg), 5, 8),
            (-s32 * bg / k_bg, 1, 3),
            (-s32 * bg / k_bg, 3, 9)],
        3: [(2 / s6 * abg / (k_ag * k_bg), 4, 7),
            (2 / s6 * abg / (k_ag * k_bg), 5, 6),
            ((be2 * (3 * al2 + ga2) - 3 * ga2 * (al2 + ga2))
             / (s6 * k_ag * k_bg * k_abg), 4, 8)],
        4: [(-alpha / s6, 1, 5),
            (-10 / (3 * s6) * al2 / k_ag, 2, 6),
            (-s32 * abg / (k_ag * k_bg), 3, 7),
            (-s32 * al2 * be2 / (k_ag * k_bg * k_abg), 3, 8),
            (-alpha / s6, 5, 9)],
        5: [(alpha / s6, 1, 4),
            (al2 / (s6 * k_ag), 2, 7),
            (-abg / (s6 * k_ag * k_abg), 2, 8),
            (alpha / s6, 4, 9),
            (2 / s6 * abg / (k_ag * k_bg), 3, 6)],
        6: [(alpha / s6, 1, 7),
            (s32 * bg / k_abg, 1, 8),
            (10 / (3 * s6) * (al2 - ga2) / k_ag, 2, 4),
            (-2 * math.sqrt(2.0 / 3.0) * abg / (k_ag * k_bg), 3, 5),
            (alpha / s6, 7, 9),
            (s32 * bg / k_abg, 8, 9)],
        7: [(-alpha / s6, 1, 6),
            (-alpha / s6, 6, 9),
            ((ga2 - al2) / (s6 * k_ag), 2, 5),
            (abg / (s6 * k_ag * k_bg), 3, 4)],
        8: [(2 / s6 * abg / (k_ag * k_abg), 2, 5),
            (ga2 * (3 * al2 - be2 + 3 * ga2) / (s6 * k_ag * k_bg * k_abg), 3, 4)],
        9: [(s32 * bg / k_bg, 2, 3),
            (-s32 * bg / k_abg, 6, 8)],
    }

    f = []
    for i in range(1, 10):
        # linear part -(d_i / Re) (a_i - delta_{i1})
        fi = a[i - 1] * (-d[i - 1] / Re)
        if i == 1:
            fi = fi + d[0] / Re
        for coef, j, k in quad[i]:
            fi = fi + coef * a[j - 1] * a[k - 1]
        f.append(fi)

    group = close_group_from_indices(
        [[1, 2, 3, -4, -5, -6, -7, -8, 9],
         [1, -2, -3, 4, 5, -6, -7, -8, 9]], n)

    e1 = np.zeros(9)
    e1[0] = 1.0

    energy = Polynomial.zero(n)
    for i in range(9):
        term = a[i] - 1.0 if i == 0 else a[i]
        energy = energy + term * term
    dissipation = Polynomial.zero(n)
    for i in range(9):
        dissipation = dissipation + d[i] * a[i] * a[i]

    quantities = {
        "E": Quantity("E", energy),
        "Dhat": Quantity("Dhat", dissipation),
    }

    def top_span(deg: int) -> list[Polynomial]:
        # |a|^(2p) (a1 - a9)^(2q): the nonlinearity conserves |a|^2 and
        # contributes nothing to d(a1 - a9)/dt, so these cancel in f.grad(V)
        if deg % 2:
            raise ValueError("ansatz degrees are even")
        norm2 = Polynomial.zero(n)
        for i in range(9):
            norm2 = norm2 + a[i] * a[i]
        diff19 = a[0] - a[8]
        return [(norm2 ** p) * ((diff19 * diff19) ** (deg // 2 - p))
                for p in range(deg // 2 + 1)]

    return OdeModel(
        name="nine_mode", n=n, f=tuple(f),
        params={"alpha": alpha, "beta": beta, "gamma": gamma, "Re": Re},
        symmetry=group,
        scale=(1.0,) * 9,
        equilibria=(e1,),
        quantities=quantities,
        top_degree_span=top_span,
        lambda_max=100.0,
    )


# =====================================================================
# Planar system with two nested limit cycles
# =====================================================================

def two_cycle() -> OdeModel:
    """Planar flow with two attracting limit cycles separated by a repelling one."""
    n = 2
    x = Polynomial.variable(0, n)
    y = Polynomial.variable(1, n)
    xx = x * x
    f1 = y - x * (xx - 2.0) * (xx - 1.0) * (xx - 0.25)
    f2 = -x
    group = close_group_from_indices([[-1, -2]], n)

    g = Polynomial.constant(0.64, n) - x * x - y * y

    quantities = {
        "x2": Quantity("x2", x * x),
        "xy": Quantity("xy", x * y),
        "y2": Quantity("y2", y * y),
    }

    return OdeModel(
        name="two_cycle", n=n, f=(f1, f2),
        params={},
        symmetry=group,
        scale=(1.6, 1.6),
        equilibria=(np.zeros(2),),
        quantities=quantities,
        top_degree_span=None,
        region=Region(inequalities=(g,)),
        lambda_max=8.0,
    )


BUILTIN_MODELS = {
    "lorenz": lorenz,
    "nine_mode": nine_mode,
    "two_cycle": two_cycle,
}


def get_model(name: str, **params) -> OdeModel:
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; "
                       f"built-ins: {sorted(BUILTIN_MODELS)}") from None
    return factory(**params)
