"""Constrained parameter sampling and realization of catalog entries."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..errors import (ConstraintViolated, DivisionByZero, IncompleteAssignment, PreconditionViolated,
                      SingularMatrix, Unsatisfiable)
from ..scalar import TAU, Scalar
from ..tensor import SquareMatrix, WXZTriple, commutator_residual, is_invertible
from .expr import evaluate
from .model import MatrixFamily, SlotSpec, SolutionEntry, apply_ops, check_constraints, check_domain

GRID = tuple(sorted({Fraction(n, d) for n in range(-3, 4) for d in range(1, 4)}))
GAUSSIAN_PROBABILITY = 0.3
EXACT_BUDGET = 60
FALLBACK_BUDGET = 8
MAX_ATTEMPTS = 600
BACKENDS = ("exact-preferred", "approx")

_SAMPLE_ERRORS = (ConstraintViolated, SingularMatrix, DivisionByZero)


def draw_value(rng: random.Random, domain: str) -> Scalar:
    """A small-height Gaussian rational in the given domain."""
    if domain == "sign":
        return Scalar(rng.choice((1, -1)))
    while True:
        re = rng.choice(GRID)
        im = rng.choice(GRID) if rng.random() < GAUSSIAN_PROBABILITY else Fraction(0)
        if domain == "nonzero" and re == 0 and im == 0:
            continue
        return Scalar(re, im)


def to_approx(m: SquareMatrix) -> SquareMatrix:
    return m if not m.exact else SquareMatrix.from_complex(m.to_complex())


def build_slot(catalog, spec: SlotSpec, env: Mapping) -> SquareMatrix:
    """Evaluate one expanded slot recipe in an entry environment."""
    if spec.is_set:
        raise PreconditionViolated("slot is set-valued", "expand the entry first")
    if spec.rows is not None:
        m = SquareMatrix([[evaluate(c, env) for c in row] for row in spec.rows])
    else:
        fam = catalog.family(spec.family)
        if spec.args is None:
            args = {p: env[p] for p in fam.param_names if p in env}
        else:
            args = {p: evaluate(a, env) for p, a in zip(fam.param_names, spec.args)}
        m = fam.instantiate(args, check=spec.check)
    m = apply_ops(m, spec.ops)
    if spec.conj is not None:
        m = spec.conj.apply(m, env)
    if spec.scale:
        m = m.scale(evaluate(spec.scale, env))
    return m


def entry_environment(entry: SolutionEntry, assignment: Mapping, check: bool = True) -> dict:
    env = {k: Scalar.of(v) for k, v in assignment.items()}
    missing = [p for p in entry.param_names if p not in env]
    if missing:
        raise IncompleteAssignment(missing, entry.id)
    for k, e in entry.derived:
        if k not in env:
            env[k] = evaluate(e, env)
    if check:
        for k, dom in entry.params:
            check_domain(k, dom, env[k], entry.id)
        check_constraints(env, entry.nonzero, entry.any_nonzero, entry.equal, entry.id)
    return env


EQUATION_SLOTS = {
    "RRR": ("R", "R", "R"),
    "WWW": ("W", "W", "W"),
    "ZZZ": ("Z", "Z", "Z"),
    "WXX": ("W", "X", "X"),
    "XXZ": ("X", "X", "Z"),
}


@dataclass(frozen=True)
class Realization:
    """Concrete matrices of an entry at one assignment."""

    entry_id: str
    list: str
    assignment: dict
    matrices: dict
    equations: tuple

    @property
    def exact(self) -> bool:
        return all(m.exact for m in self.matrices.values())

    def triple(self) -> WXZTriple:
        from ..tensor import P

        m = self.matrices
        if "R" in m:
            return WXZTriple(m["R"], m["R"], m["R"])
        return WXZTriple(m.get("W", P), m["X"], m.get("Z", P))

    def residuals(self) -> dict:
        """``{equation: (max |entry|, exactly zero)}`` for the equations of the entry's list."""
        out = {}
        for eq in self.equations:
            a, b, c = (self.matrices[s] for s in EQUATION_SLOTS[eq])
            out[eq] = commutator_residual(a, b, c)
        return out

    def passed(self, tau: float = TAU) -> bool:
        res = self.residuals()
        if self.exact:
            return all(z for _, z in res.values())
        return all(z or v < tau for v, z in res.values())

    def to_json(self) -> dict:
        return {
            "entry": self.entry_id,
            "assignment": {k: v.to_json() for k, v in self.assignment.items()},
            "matrices": {k: v.to_json() for k, v in self.matrices.items()},
        }


def realize(catalog, entry: SolutionEntry, assignment: Mapping, backend: str = "exact-preferred",
            require_invertible: bool = False, check: bool = True) -> Realization:
    env = entry_environment(entry, assignment, check)
    mats = {name: build_slot(catalog, spec, env) for name, spec in entry.slots}
    if require_invertible:
        for name, m in mats.items():
            if not is_invertible(m):
                raise SingularMatrix(f"slot {name} of {entry.id} is singular")
    if backend == "approx":
        mats = {k: to_approx(v) for k, v in mats.items()}
    elif backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    return Realization(entry.id, entry.list, env, mats, entry.equations())


def _family_entry(family: MatrixFamily) -> SolutionEntry:
    return SolutionEntry(id=family.name, list="ybe", slots=(("R", SlotSpec(family=family.name)),), params=family.params)


class _FamilyCatalog:
    def __init__(self, family):
        self._f = family

    def family(self, name):
        return self._f


@dataclass
class Sampler:
    """Deterministic per-entry sampler with an exact-preferred policy."""

    catalog: object
    seed: int = 0
    backend: str = "exact-preferred"
    exact_budget: int = EXACT_BUDGET
    _no_exact: set = field(default_factory=set)

    def _attempt(self, entry, rng):
        env = {k: draw_value(rng, d) for k, d in entry.params}
        return realize(self.catalog, entry, env, backend="exact-preferred", require_invertible=True)

    def sample(self, entry: SolutionEntry, k: int) -> Realization:
        """The ``k``-th realization of an entry."""
        rng = random.Random(f"{self.seed}:{entry.id}:{k}")
        budget = FALLBACK_BUDGET if entry.id in self._no_exact else self.exact_budget
        fallback = None
        for attempt in range(MAX_ATTEMPTS):
            try:
                r = self._attempt(entry, rng)
            except _SAMPLE_ERRORS:
                continue
            if r.exact or self.backend == "approx":
                break
            if fallback is None:
                fallback = r
            if attempt + 1 >= budget:
                r = fallback
                break
        else:
            if fallback is None:
                raise Unsatisfiable(f"no valid assignment for {entry.id} within {MAX_ATTEMPTS} draws")
            r = fallback
        if not r.exact:
            self._no_exact.add(entry.id)
        if self.backend == "approx":
            r = Realization(r.entry_id, r.list, r.assignment, {a: to_approx(m) for a, m in r.matrices.items()}, r.equations)
        return r

    def samples(self, entry: SolutionEntry, count: int) -> list:
        return [self.sample(entry, k) for k in range(count)]


def sample_params(target, seed: int = 0, count: int = 1, catalog=None, backend: str = "exact-preferred") -> list:
    """Assignments for a family or an expanded entry (parameters plus derived values)."""
    if isinstance(target, MatrixFamily):
        sampler = Sampler(_FamilyCatalog(target), seed, backend)
        entry = _family_entry(target)
    else:
        if catalog is None:
            from .store import load_catalog

            catalog = load_catalog()
        sampler = Sampler(catalog, seed, backend)
        entry = target
    return [dict(r.assignment) for r in sampler.samples(entry, count)]
