"""Catalog verification sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog, Sampler, load_catalog
from .catalog.sampling import BACKENDS
from .errors import WXZError
from .scalar import TAU
from .tensor import second_inverse_check

REPORT_SCHEMA = "wxz-verification-report"
REPORT_VERSION = 1
LISTS = ("ybe", "wxx", "xxz", "wxz")
DEFAULT_SAMPLES = {"ybe": 20, "wxx": 10, "xxz": 10, "wxz": 10}


@dataclass
class EntryRecord:
    id: str
    list: str
    item: int | None
    samples: list = field(default_factory=list)
    error: str | None = None
    second_invertible: int | None = None

    @property
    def checks(self) -> int:
        return sum(len(s["residuals"]) for s in self.samples)

    @property
    def exact_checks(self) -> int:
        return sum(sum(v == "0" for v in s["residuals"].values()) for s in self.samples)

    @property
    def max_residual(self) -> float:
        vals = [0.0 if v == "0" else float(v) for s in self.samples for v in s["residuals"].values()]
        return max(vals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.samples) and all(s["passed"] for s in self.samples)

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "list": self.list,
            "item": self.item,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "exact_checks": self.exact_checks,
            "checks": self.checks,
            "samples": self.samples,
        }
        if self.error is not None:
            out["error"] = self.error
        if self.second_invertible is not None:
            out["second_invertible_samples"] = self.second_invertible
        return out


@dataclass
class VerificationReport:
    scope: str
    samples: int | None
    seed: int
    backend: str
    tau: float
    catalog: str
    catalog_version: object = None
    records: list = field(default_factory=list)

    @property
    def failed(self) -> list:
        return [r.id for r in self.records if not r.passed]

    @property
    def ok(self) -> bool:
        return bool(self.records) and not self.failed

    @property
    def exact_fraction(self) -> float:
        total = sum(r.checks for r in self.records)
        return sum(r.exact_checks for r in self.records) / total if total else 0.0

    def summary(self) -> dict:
        by_list = {}
        for r in self.records:
            d = by_list.setdefault(r.list, {"entries": 0, "passed": 0})
            d["entries"] += 1
            d["passed"] += r.passed
        exact_samples = sum(s["exact"] for r in self.records for s in r.samples)
        total_samples = sum(len(r.samples) for r in self.records)
        return {
            "entries": len(self.records),
            "passed": len(self.records) - len(self.failed),
            "failed": len(self.failed),
            "failed_ids": self.failed,
            "checks": sum(r.checks for r in self.records),
            "exact_fraction": self.exact_fraction,
            "backend_mix": {"exact": exact_samples, "approx": total_samples - exact_samples},
            "by_list": by_list,
        }

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": REPORT_VERSION,
            "meta": {
                "scope": self.scope,
                "samples_per_entry": self.samples,
                "seed": self.seed,
                "backend": self.backend,
                "tau": self.tau,
                "catalog": self.catalog,
                "catalog_version": self.catalog_version,
            },
            "summary": self.summary(),
            "entries": [r.to_json() for r in self.records],
        }


def _fmt_residual(value: float, zero: bool) -> str:
    return "0" if zero else repr(float(value))


def verify_entry(sampler: Sampler, entry, count: int, tau: float = TAU, second_inverse: bool = False) -> EntryRecord:
    rec = EntryRecord(entry.id, entry.list, entry.item)
    second = 0
    for k in range(count):
        try:
            r = sampler.sample(entry, k)
        except WXZError as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
            break
        res = r.residuals()
        rec.samples.append({
            "k": k,
            "assignment": {a: v.to_json() for a, v in sorted(r.assignment.items())},
            "exact": r.exact,
            "residuals": {eq: _fmt_residual(v, z) for eq, (v, z) in res.items()},
            "passed": r.passed(tau),
        })
        if second_inverse and entry.list == "wxz":
            t = r.triple()
            second += second_inverse_check(t.w) and second_inverse_check(t.z)
    if second_inverse and entry.list == "wxz":
        rec.second_invertible = second
    return rec


def scope_entries(catalog: Catalog, scope: str) -> list:
    """Expanded entries of a scope; ``all`` concatenates the four lists."""
    if scope == "all":
        return [e for name in LISTS for e in catalog.entries(name, expand=True)]
    return catalog.entries(scope, expand=True)


def cmd_verify_catalog(scope: str = "all", samples: int | None = None, seed: int = 0,
                       backend: str = "exact-preferred", tau: float = TAU, catalog: Catalog | None = None,
                       second_inverse: bool = False, entry_ids=None) -> VerificationReport:
    """Sample every entry of ``scope`` and record residuals; deterministic given ``seed``."""
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    catalog = catalog or load_catalog()
    entries = scope_entries(catalog, scope)
    if entry_ids:
        wanted = set(entry_ids)
        entries = [e for e in entries if e.id in wanted or e.id.split("[", 1)[0] in wanted]
    sampler = Sampler(catalog, seed=seed, backend=backend)
    report = VerificationReport(scope, samples, seed, backend, tau, catalog.source, catalog.version)
    for e in entries:
        count = samples if samples is not None else DEFAULT_SAMPLES[e.list]
        report.records.append(verify_entry(sampler, e, count, tau, second_inverse))
    return report
