"""Loading the shipped catalog, set expansion and list enumeration."""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..errors import ParseError
from .expr import free_names
from .model import LIST_EQUATIONS, SLOT_NAMES, MatrixFamily, SlotSpec, SolutionEntry

CATALOG_ENV = "WXZ_CATALOG"
SCHEMA = "wxz-catalog"

SCOPE_ALIASES = {
    "ybe": "ybe", "ybe-list": "ybe",
    "wxx": "wxx", "wxx-list": "wxx",
    "xxz": "xxz", "xxz-list": "xxz",
    "wxz": "wxz", "wxz-list": "wxz",
    "generic": "generic", "nongeneric": "nongeneric", "non-generic": "nongeneric",
}


def normalize_scope(scope: str) -> str:
    key = str(scope).strip().lower()
    if key not in SCOPE_ALIASES:
        raise ValueError(f"unknown scope {scope!r}; expected one of {sorted(set(SCOPE_ALIASES.values()))}")
    return SCOPE_ALIASES[key]


class Catalog:
    """Immutable in-memory catalog."""

    def __init__(self, data: dict, source: str = "<memory>"):
        if data.get("schema") != SCHEMA:
            raise ParseError(f"{source}: not a {SCHEMA} document")
        self.source = source
        self.version = data.get("version")
        self.families = {k: MatrixFamily.from_json(k, v) for k, v in data["families"].items()}
        self.sets = {k: tuple(SlotSpec.from_json(m) for m in v) for k, v in data.get("sets", {}).items()}
        for name, members in self.sets.items():
            for m in members:
                if m.family not in self.families:
                    raise ParseError(f"set {name} references unknown family {m.family!r}")
        lists = data.get("lists", {})
        self.lists = {"ybe": self._ybe_list()}
        for name in ("wxx", "xxz", "wxz"):
            entries = [self._entry(name, obj) for obj in lists.get(name, ())]
            if name == "xxz":
                entries = self._with_trivial(entries)
            self.lists[name] = tuple(entries)
        self._index = {e.id: e for lst in self.lists.values() for e in lst}
        if len(self._index) != sum(len(v) for v in self.lists.values()):
            raise ParseError(f"{source}: duplicate entry ids")

    # -- construction --------------------------------------------------

    def _ybe_list(self):
        out = []
        for fam in self.families.values():
            if fam.kind == "R":
                out.append(SolutionEntry(
                    id=f"ybe-{fam.name}", list="ybe", slots=(("R", SlotSpec(family=fam.name)),),
                    params=fam.params, group="R-family",
                ))
        return tuple(out)

    def _with_trivial(self, entries):
        by_family: dict = {}
        for e in entries:
            by_family.setdefault(e.slot_map["X"].family, []).append(e)
        out = []
        for fam in self.families.values():
            if fam.kind != "X":
                continue
            out.extend(by_family.pop(fam.name, []))
            out.append(self._entry("xxz", {
                "id": f"xxz-{fam.name}-trivial", "group": "trivial",
                "X": {"family": fam.name}, "Z": {"family": "R_0.4"},
                "note": "Z = P solves [X,X,Z] = 0 for every X",
            }))
        for rest in by_family.values():
            out.extend(rest)
        return out

    def _entry(self, list_name: str, obj: dict) -> SolutionEntry:
        eid = obj.get("id")
        if not eid:
            raise ParseError(f"{list_name} entry without id: {obj!r}")
        params = dict(obj.get("params", {}))
        slots = []
        for name in SLOT_NAMES:
            if name not in obj:
                continue
            spec = SlotSpec.from_json(obj[name])
            if spec.family is not None:
                fam = self.families.get(spec.family)
                if fam is None:
                    raise ParseError(f"{eid}: unknown family {spec.family!r}")
                if spec.args is None:
                    for p, dom in fam.params:
                        params.setdefault(p, dom)
                elif len(spec.args) != len(fam.params):
                    raise ParseError(f"{eid}: {spec.family} takes {len(fam.params)} arguments, got {len(spec.args)}")
            for s in spec.sets:
                if s not in self.sets:
                    raise ParseError(f"{eid}: unknown set {s!r}")
            slots.append((name, spec))
        wanted = {"ybe": ("R",), "wxx": ("W", "X"), "xxz": ("X", "Z"), "wxz": ("W", "X", "Z")}[list_name]
        if tuple(n for n, _ in slots) != wanted:
            raise ParseError(f"{eid}: expected slots {wanted}")
        for p in params:
            if p[:2] in ("W_", "X_", "Z_", "R_"):
                raise ParseError(f"{eid}: parameter {p!r} clashes with the set-member prefix")
        entry = SolutionEntry(
            id=eid, list=list_name, slots=tuple(slots), params=tuple(params.items()),
            derived=tuple(obj.get("derived", {}).items()),
            nonzero=tuple(obj.get("nonzero", ())),
            any_nonzero=tuple(tuple(g) for g in obj.get("any_nonzero", ())),
            equal=tuple(tuple(p) for p in obj.get("equal", ())),
            item=obj.get("item"), group=obj.get("group", ""), note=obj.get("note", ""),
        )
        _check_bindings(entry)
        return entry

    # -- queries ---------------------------------------------------------

    def family(self, name: str) -> MatrixFamily:
        try:
            return self.families[name]
        except KeyError:
            raise KeyError(f"unknown family {name!r}") from None

    def families_of_kind(self, kind: str) -> list:
        return [f for f in self.families.values() if f.kind == kind]

    def cardinality(self) -> dict:
        out = {k: len(self.families_of_kind(k)) for k in ("R", "X", "A")}
        out.update({f"list:{k}": len(v) for k, v in self.lists.items()})
        out.update({f"expanded:{k}": sum(len(self.expand(e)) for e in v) for k, v in self.lists.items()})
        return out

    def set_families(self, name: str) -> set:
        """Family names occurring in a set (ignoring arguments and operations)."""
        return {m.family for m in self.sets[name]}

    def entries(self, scope: str, expand: bool = False) -> list:
        scope = normalize_scope(scope)
        if scope == "generic":
            base = [e for e in self.lists["wxz"] if e.id.startswith("wxz-g")]
        elif scope == "nongeneric":
            base = [e for e in self.lists["wxz"] if e.id.startswith("wxz-n")]
        else:
            base = list(self.lists[scope])
        if not expand:
            return base
        return [x for e in base for x in self.expand(e)]

    def entry(self, entry_id: str) -> SolutionEntry:
        if entry_id in self._index:
            return self._index[entry_id]
        base = entry_id.split("[", 1)[0]
        if base in self._index:
            for e in self.expand(self._index[base]):
                if e.id == entry_id:
                    return e
        raise KeyError(f"unknown entry {entry_id!r}")

    def members(self, slot: SlotSpec) -> list:
        return [m for s in slot.sets for m in self.sets[s]]

    def expand(self, entry: SolutionEntry, members: dict | None = None) -> list:
        """One entry per combination of set members; ``members`` filters by family or label."""
        if entry.is_expanded:
            return [entry]
        choices = []
        for name, spec in entry.slots:
            if spec.is_set:
                opts = self.members(spec)
                if members and name in members:
                    want = members[name]
                    opts = [m for m in opts if want in (m.family, m.label, m.describe())]
                choices.append([(name, m) for m in opts])
            else:
                choices.append([(name, None)])
        out = []
        for combo in itertools.product(*choices):
            slots = []
            params = list(entry.params)
            tags = []
            for (name, member), (_, spec) in zip(combo, entry.slots):
                if member is None:
                    slots.append((name, spec))
                    continue
                fam = self.families[member.family]
                prefix = name + "_"
                local = [p for p, _ in fam.params] + [p for p, _ in member.extra]
                mapping = {p: prefix + p for p in local}
                new = member.renamed(mapping)
                if member.args is None:
                    new = replace(new, args=tuple(prefix + p for p, _ in fam.params))
                    params += [(prefix + p, d) for p, d in fam.params]
                params += [(prefix + p, d) for p, d in member.extra]
                tag = member.label or member.describe()
                slots.append((name, new))
                tags.append((name, tag))
            suffix = ";".join(f"{n}={t}" for n, t in tags)
            out.append(SolutionEntry(
                id=f"{entry.id}[{suffix}]", list=entry.list, slots=tuple(slots), params=tuple(params),
                derived=entry.derived, nonzero=entry.nonzero, any_nonzero=entry.any_nonzero, equal=entry.equal,
                item=entry.item, group=entry.group, note=entry.note, parent=entry.id, members=tuple(tags),
            ))
        return out


def _check_bindings(entry: SolutionEntry):
    """Every expression must only use bound names; derived names are bound once."""
    bound = set(entry.param_names)
    for k, e in entry.derived:
        unknown = free_names(e) - bound
        if unknown:
            raise ParseError(f"{entry.id}: derived {k} uses unbound {sorted(unknown)}")
        if k in bound:
            raise ParseError(f"{entry.id}: {k} bound twice")
        bound.add(k)
    exprs = list(entry.nonzero) + [e for g in entry.any_nonzero for e in g] + [e for p in entry.equal for e in p]
    for _, spec in entry.slots:
        exprs += spec.expressions()
    for e in exprs:
        unknown = free_names(e) - bound
        if unknown:
            raise ParseError(f"{entry.id}: expression {e!r} uses unbound {sorted(unknown)}")


def default_catalog_path() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("wxz.catalog") / "data" / "catalog.json"))


@lru_cache(maxsize=8)
def _load_cached(path: str, mtime: float) -> Catalog:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid catalog JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from exc
    return Catalog(data, source=path)


def load_catalog(path: str | os.PathLike | None = None) -> Catalog:
    """Load (and cache) a catalog file; defaults to ``$WXZ_CATALOG`` or the shipped one."""
    p = Path(path) if path is not None else default_catalog_path()
    return _load_cached(str(p.resolve()), p.stat().st_mtime)


__all__ = ["Catalog", "load_catalog", "normalize_scope", "CATALOG_ENV", "LIST_EQUATIONS"]
