"""Invariant families run by ``relmax check`` on a problem and seeded perturbations of it."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .beta_alpha import (
    alpha,
    beta,
    beta_dual,
    fenchel_check,
    rotation_interval,
)
from .cycles import CapExceeded, enumerate_simple_cycles, max_mean_cycle, min_mean_cycle
from .lp import solve_beta_primal
from .sft import LocallyConstantFn, Problem, WeightedDigraph, add_coboundary, build_graph
from .subaction import calibrated_subaction, contact_locus


@dataclass
class Family:
    name: str
    tolerance: float
    residuals: list[float] = field(default_factory=list)

    def record(self, residual: float) -> None:
        self.residuals.append(float(residual))

    def fail_unless(self, ok: bool) -> None:
        self.residuals.append(0.0 if ok else math.inf)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_json(self) -> dict:
        r = self.max_residual
        return {
            "family": self.name,
            "passed": self.passed,
            "max_residual": r if math.isfinite(r) else 1e308,
            "tolerance": self.tolerance,
            "checks": len(self.residuals),
        }


def _interior_grid(graph: WeightedDigraph, points: int) -> list[Fraction]:
    lo, hi = rotation_interval(graph)
    if lo == hi:
        return []
    return [lo + (hi - lo) * Fraction(i, points + 1) for i in range(1, points + 1)]


def perturbations(problem: Problem, count: int, seed: int) -> list[WeightedDigraph]:
    """The problem's graph plus ``count`` copies with potentials jittered by up to 0.1."""
    base = problem.graph()
    rng = np.random.default_rng(seed)
    out = [base]
    for _ in range(count):
        out.append(base.with_weights(a=base.a + rng.uniform(-0.1, 0.1, size=base.n_edges)))
    return out


def mean_cycle_family(graphs) -> Family:
    fam = Family("mean_cycle_oracle", 1e-12)
    for g in graphs:
        try:
            cycles = enumerate_simple_cycles(g, cap=20000)
        except CapExceeded:
            continue
        means = [c.mean_potential for c in cycles]
        fam.record(abs(max_mean_cycle(g)[0] - max(means)))
        fam.record(abs(min_mean_cycle(g)[0] - min(means)))
    return fam


def primal_dual_family(graphs) -> Family:
    fam = Family("beta_primal_dual", 1e-6)
    for g in graphs:
        if g.dim != 1:
            continue
        for h in _interior_grid(g, 3):
            fam.record(abs(beta(g, float(h)) - beta_dual(g, float(h))))
    return fam


def fenchel_family(graphs, rng: np.random.Generator) -> tuple[Family, Family]:
    lower = Family("fenchel_inequality", 1e-9)
    tight = Family("fenchel_equality_at_dual", 1e-6)
    for g in graphs:
        if g.dim != 1:
            continue
        for h in _interior_grid(g, 3):
            for c in rng.uniform(-3, 3, size=3):
                lower.record(max(0.0, -fenchel_check(g, float(h), float(c)).gap))
            sol = solve_beta_primal(g, float(h))
            # the multiplier d beta / d h is a supergradient, where the inequality is tight
            c = sol.dual_multipliers
            tight.record(abs(fenchel_check(g, float(h), c).gap))
    return lower, tight


def coboundary_family(problem: Problem, rng: np.random.Generator) -> Family:
    """Adding g∘σ - g + a shifts beta by a and alpha by -a."""
    fam = Family("coboundary_shift", 1e-9)
    g0 = problem.graph()
    n = problem.spec.alphabet_size
    for _ in range(3):
        gfun = LocallyConstantFn.potential(n, 0, {(s,): float(rng.uniform(-1, 1)) for s in range(n)})
        shift = float(rng.uniform(-1, 1))
        A2 = add_coboundary(problem.potential, gfun, shift, spec=problem.spec)
        g2 = build_graph(problem.spec, A2, problem.constraint)
        if g0.dim == 1:
            for h in _interior_grid(g0, 3):
                fam.record(abs(beta(g2, float(h)) - beta(g0, float(h)) - shift))
        for c in rng.uniform(-2, 2, size=(2, g0.dim)):
            fam.record(abs(alpha(g2, c) - alpha(g0, c) + shift))
    return fam


def subaction_family(graphs) -> tuple[Family, Family, Family]:
    resid = Family("subaction_residuals", 1e-9)
    eig = Family("eigenvalue_vs_lp", 1e-8)
    contact = Family("lp_support_in_contact_locus", 0.0)
    for g in graphs:
        sub = calibrated_subaction(g)
        r = sub.residuals(g)
        resid.record(max(r.values()))
        sol = solve_beta_primal(g)
        eig.record(abs(sol.value - sub.eigenvalue))
        locus = set(contact_locus(g, sub))
        contact.fail_unless(set(sol.measure.support(1e-9)) <= locus)
    return resid, eig, contact


def run_checks(problem: Problem, seed: int = 0, perturbation_count: int = 3) -> list[Family]:
    rng = np.random.default_rng(seed)
    graphs = perturbations(problem, perturbation_count, seed)
    families = [mean_cycle_family(graphs), primal_dual_family(graphs)]
    families.extend(fenchel_family(graphs, rng))
    families.append(coboundary_family(problem, rng))
    families.extend(subaction_family(graphs))
    return families
