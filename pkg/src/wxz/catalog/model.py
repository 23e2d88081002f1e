"""Catalog data model: parametric matrix families, slot recipes and solution entries."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from ..errors import ConstraintViolated, IncompleteAssignment, ParseError
from ..scalar import ONE, TAU, Scalar
from ..tensor import SquareMatrix, kron
from .expr import compile_expr, evaluate, free_names, rename

DOMAINS = ("nonzero", "complex", "sign")
SLOT_NAMES = ("W", "X", "Z", "R")
OPS = ("T", "at", "+", "-", "#")
CONJ_MODES = ("similar", "inverse", "sandwich")


def _split_rows(rows) -> tuple:
    out = []
    for r in rows:
        cells = [c.strip() for c in r.split(",")] if isinstance(r, str) else [str(c).strip() for c in r]
        out.append(tuple(cells))
    n = len(out)
    if any(len(r) != n for r in out):
        raise ParseError(f"rows do not form a square grid: {rows!r}")
    for r in out:
        for c in r:
            compile_expr(c)
    return tuple(out)


def _near(a: Scalar, b: Scalar) -> bool:
    if a.exact and b.exact:
        return a == b
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) < TAU * scale


def check_domain(name: str, domain: str, value: Scalar, where: str = ""):
    if domain == "nonzero" and value.is_zero():
        raise ConstraintViolated(f"{name} != 0", where)
    if domain == "sign" and not (_near(value, ONE) or _near(value, -ONE)):
        raise ConstraintViolated(f"{name} = +-1", where)


def check_constraints(env, nonzero=(), any_nonzero=(), equal=(), where: str = ""):
    for e in nonzero:
        if evaluate(e, env).is_zero():
            raise ConstraintViolated(f"{e} != 0", where)
    for group in any_nonzero:
        if all(evaluate(e, env).is_zero() for e in group):
            raise ConstraintViolated(f"not all of {', '.join(group)} zero", where)
    for lhs, rhs in equal:
        if not _near(evaluate(lhs, env), evaluate(rhs, env)):
            raise ConstraintViolated(f"{lhs} = {rhs}", where)


@dataclass(frozen=True)
class MatrixFamily:
    """A named parametric matrix template."""

    name: str
    kind: str
    rows: tuple
    params: tuple = ()            # ((name, domain), ...) in order
    label: str = ""
    derived: tuple = ()           # ((name, expr), ...) evaluated in order
    nonzero: tuple = ()
    any_nonzero: tuple = ()
    equal: tuple = ()
    note: str = ""

    @classmethod
    def from_json(cls, name: str, obj: Mapping) -> "MatrixFamily":
        params = tuple((k, v) for k, v in obj.get("params", {}).items())
        for k, v in params:
            if v not in DOMAINS:
                raise ParseError(f"unknown domain {v!r} for {name}.{k}")
        return cls(
            name=name,
            kind=obj.get("kind", "R"),
            rows=_split_rows(obj["rows"]),
            params=params,
            label=obj.get("label", name),
            derived=tuple(obj.get("derived", {}).items()),
            nonzero=tuple(obj.get("nonzero", ())),
            any_nonzero=tuple(tuple(g) for g in obj.get("any_nonzero", ())),
            equal=tuple(tuple(p) for p in obj.get("equal", ())),
            note=obj.get("note", ""),
        )

    @property
    def param_names(self) -> tuple:
        return tuple(k for k, _ in self.params)

    @property
    def domains(self) -> dict:
        return dict(self.params)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def environment(self, assignment: Mapping, check: bool = True) -> dict:
        """Coerce an assignment, add derived values and (optionally) check constraints."""
        if not isinstance(assignment, Mapping):
            assignment = dict(zip(self.param_names, assignment))
        env = {k: Scalar.of(v) for k, v in assignment.items()}
        missing = [p for p in self.param_names if p not in env]
        if missing:
            raise IncompleteAssignment(missing, self.name)
        for k, e in self.derived:
            if k not in env:
                env[k] = evaluate(e, env)
        if check:
            self.check(env)
        return env

    def check(self, env: Mapping):
        for k, dom in self.params:
            check_domain(k, dom, env[k], self.name)
        check_constraints(env, self.nonzero, self.any_nonzero, self.equal, self.name)

    def instantiate(self, assignment: Mapping = (), check: bool = True) -> SquareMatrix:
        env = self.environment(assignment or {}, check)
        return SquareMatrix([[evaluate(c, env) for c in row] for row in self.rows])

    def __call__(self, *args, **kw) -> SquareMatrix:
        assignment = dict(zip(self.param_names, args))
        assignment.update(kw)
        return self.instantiate(assignment)

    def match(self, m: SquareMatrix, tau: float = TAU):
        """Read parameter values off ``m`` if it fits this template, else None.

        Only templates whose cells are constants or ``name +- constant`` are
        supported, which covers the canonical forms.
        """
        env: dict = {}
        for i, row in enumerate(self.rows):
            for j, cell in enumerate(row):
                val = m[i, j]
                names = free_names(cell)
                if not names:
                    if not _close(val, evaluate(cell, {}), tau):
                        return None
                    continue
                (name,) = names
                offset = evaluate(cell, {name: Scalar(0)})
                want = val - offset
                if name in env:
                    if not _close(env[name], want, tau):
                        return None
                else:
                    env[name] = want
        return env


def _close(a: Scalar, b: Scalar, tau: float) -> bool:
    if a.exact and b.exact:
        return a == b
    return abs(a - b) < tau


@dataclass(frozen=True)
class Conjugator:
    rows: tuple
    mode: str = "similar"

    @classmethod
    def from_json(cls, obj) -> "Conjugator":
        mode = obj.get("mode", "similar")
        if mode not in CONJ_MODES:
            raise ParseError(f"unknown conjugation mode {mode!r}")
        rows = _split_rows(obj["rows"])
        if len(rows) != 2:
            raise ParseError("conjugators are 2x2")
        return cls(rows, mode)

    def matrix(self, env) -> SquareMatrix:
        return SquareMatrix([[evaluate(c, env) for c in row] for row in self.rows])

    def apply(self, m: SquareMatrix, env) -> SquareMatrix:
        a = self.matrix(env)
        aa = kron(a, a)
        if self.mode == "similar":
            return aa @ m @ aa.inverse()
        if self.mode == "inverse":
            return aa.inverse() @ m @ aa
        return aa @ m @ aa

    def renamed(self, mapping) -> "Conjugator":
        return Conjugator(tuple(tuple(rename(c, mapping) for c in r) for r in self.rows), self.mode)

    def names(self) -> set:
        return {n for r in self.rows for c in r for n in free_names(c)}


def apply_ops(m: SquareMatrix, ops) -> SquareMatrix:
    for op in ops:
        if op == "T":
            m = m.transpose()
        elif op == "at":
            m = m.at()
        elif op == "+":
            m = m.plus()
        elif op == "-":
            m = m.inverse()
        elif op == "#":
            m = m.plus().inverse()
        else:
            raise ParseError(f"unknown matrix operation {op!r}")
    return m


@dataclass(frozen=True)
class SlotSpec:
    """How to build one matrix of an entry: a family instance, inline rows, or a set."""

    family: str | None = None
    args: tuple | None = None
    ops: tuple = ()
    conj: Conjugator | None = None
    scale: str | None = None
    check: bool = True
    rows: tuple | None = None
    sets: tuple = ()
    label: str = ""
    extra: tuple = ()             # extra ((name, domain), ...) a set member brings along

    @classmethod
    def from_json(cls, obj: Mapping) -> "SlotSpec":
        sets = obj.get("set", ())
        if isinstance(sets, str):
            sets = (sets,)
        ops = tuple(obj.get("op", ()))
        for op in ops:
            if op not in OPS:
                raise ParseError(f"unknown matrix operation {op!r}")
        spec = cls(
            family=obj.get("family"),
            args=tuple(obj["args"]) if "args" in obj else None,
            ops=ops,
            conj=Conjugator.from_json(obj["conj"]) if "conj" in obj else None,
            scale=obj.get("scale"),
            check=obj.get("check", True),
            rows=_split_rows(obj["rows"]) if "rows" in obj else None,
            sets=tuple(sets),
            label=obj.get("label", ""),
            extra=tuple(obj.get("extra", {}).items()),
        )
        kinds = sum(x is not None and x != () for x in (spec.family, spec.rows, spec.sets or None))
        if kinds != 1:
            raise ParseError(f"slot needs exactly one of family/rows/set: {obj!r}")
        for e in spec.args or ():
            compile_expr(e)
        return spec

    @property
    def is_set(self) -> bool:
        return bool(self.sets)

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.sets:
            return " u ".join(self.sets)
        if self.rows is not None:
            return "inline"
        base = self.family
        if self.args is not None:
            base += "(" + ", ".join(self.args) + ")"
        for op in self.ops:
            base += "^" + op
        if self.conj is not None:
            base = f"conj[{self.conj.mode}]({base})"
        return base

    def expressions(self) -> list:
        out = list(self.args or ())
        if self.rows is not None:
            out += [c for r in self.rows for c in r]
        if self.conj is not None:
            out += [c for r in self.conj.rows for c in r]
        if self.scale:
            out.append(self.scale)
        return out

    def renamed(self, mapping) -> "SlotSpec":
        return replace(
            self,
            args=None if self.args is None else tuple(rename(a, mapping) for a in self.args),
            rows=None if self.rows is None else tuple(tuple(rename(c, mapping) for c in r) for r in self.rows),
            conj=None if self.conj is None else self.conj.renamed(mapping),
            scale=None if self.scale is None else rename(self.scale, mapping),
        )


@dataclass(frozen=True)
class SolutionEntry:
    """One item of a classified solution list."""

    id: str
    list: str
    slots: tuple                  # ((slot name, SlotSpec), ...)
    params: tuple = ()            # ((name, domain), ...)
    derived: tuple = ()
    nonzero: tuple = ()
    any_nonzero: tuple = ()
    equal: tuple = ()
    item: int | None = None
    group: str = ""
    note: str = ""
    parent: str | None = None     # id of the unexpanded entry for set members
    members: tuple = ()           # ((slot, member label), ...) after expansion

    @property
    def slot_map(self) -> dict:
        return dict(self.slots)

    @property
    def param_names(self) -> tuple:
        return tuple(k for k, _ in self.params)

    @property
    def is_expanded(self) -> bool:
        return not any(s.is_set for _, s in self.slots)

    def equations(self) -> tuple:
        return LIST_EQUATIONS[self.list]

    def describe(self) -> dict:
        return {name: spec.describe() for name, spec in self.slots}


LIST_EQUATIONS = {
    "ybe": ("RRR",),
    "wxx": ("WWW", "WXX"),
    "xxz": ("XXZ", "ZZZ"),
    "wxz": ("WWW", "ZZZ", "WXX", "XXZ"),
}
