"""Bundled reference expansion tables and exact verification against them.

Each JSON file under data/ holds the known printed terms of one expansion
(t-form or q-form genus parts), with a transcription checksum.  Verification
is an exact two-sided diff: the computed series restricted to the table's
lambda orders must contain exactly the tabulated monomials with exactly the
tabulated rational coefficients.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field as dc_field
from importlib import resources

from .numberfield import FieldElement
from .rational import QQ, qq_parse, qq_str
from .series import var_from_label
from .tau import TauExpansion


class TableError(ValueError):
    pass


@dataclass
class PaperTable:
    algebra: str
    form: str  # "t" or "q"
    max_lambda: int
    entries: dict  # (eps, lambda, vars flat tuple) -> QQ
    path: str = ""


@dataclass
class VerifyReport:
    algebra: str
    form: str
    max_lambda: int
    matched: int
    wrong: list = dc_field(default_factory=list)  # (key, got, want)
    missing: list = dc_field(default_factory=list)  # in table, not computed
    extra: list = dc_field(default_factory=list)  # computed, not in table

    @property
    def ok(self) -> bool:
        return not (self.wrong or self.missing or self.extra)

    def lines(self):
        yield (
            f"{self.algebra} ({self.form}-form) through lambda^{self.max_lambda}: "
            f"{self.matched} matched, {len(self.wrong)} wrong, "
            f"{len(self.missing)} missing, {len(self.extra)} extra"
        )
        for key, got, want in self.wrong:
            yield f"  WRONG   {_key_str(key)}: computed {got}, table {want}"
        for key, want in self.missing:
            yield f"  MISSING {_key_str(key)}: table {want}"
        for key, got in self.extra:
            yield f"  EXTRA   {_key_str(key)}: computed {got}"


def _key_str(key):
    eps, lam, vars = key
    mono = " ".join(
        f"{name}^{exp}" if exp > 1 else name
        for name, exp in vars
    )
    return f"eps^{eps} lambda^{lam} {mono}"


def bundled_table_path(algebra: str, form: str = "q") -> str:
    name = f"{algebra.lower()}_{form}.json"
    with resources.as_file(
        resources.files("dstau").joinpath("data").joinpath(name)
    ) as p:
        return str(p)


def load_table(path: str) -> PaperTable:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    blob = json.dumps(payload["entries"], sort_keys=True).encode()
    digest = hashlib.sha256(blob).hexdigest()
    if payload.get("sha256") and payload["sha256"] != digest:
        raise TableError(f"{path}: transcription checksum mismatch")
    entries = {}
    for item in payload["entries"]:
        vars = tuple(sorted((name, int(e)) for name, e in item["vars"].items()))
        key = (int(item["eps"]), int(item["lambda"]), vars)
        if key in entries:
            raise TableError(f"{path}: duplicate monomial {key}")
        entries[key] = qq_parse(item["coeff"])
    return PaperTable(
        payload["algebra"], payload["form"], payload["max_lambda"], entries, path
    )


def load_bundled(algebra: str, form: str = "q") -> PaperTable:
    return load_table(bundled_table_path(algebra, form))


def _series_items(series, max_lambda):
    from .series import var_label

    out = {}
    for (eps, lam, flat), coeff in series.terms.items():
        if lam > max_lambda:
            continue
        if isinstance(coeff, FieldElement):
            coeff = coeff.project_rational()
        if not coeff:
            continue
        vars = tuple(
            sorted((var_label(flat[i]), flat[i + 1]) for i in range(0, len(flat), 2))
        )
        out[(eps, lam, vars)] = coeff
    return out


def verify_expansion(exp: TauExpansion, table: PaperTable) -> VerifyReport:
    if table.form == "t":
        if exp.cap < table.max_lambda:
            raise TableError(
                f"expansion cap {exp.cap} below table order {table.max_lambda}"
            )
        computed = _series_items(exp.log_tau_t, table.max_lambda)
    else:
        if exp.q_order < table.max_lambda:
            raise TableError(
                f"expansion q-order {exp.q_order} below table order "
                f"{table.max_lambda}"
            )
        computed = _series_items(exp.log_tau_q, table.max_lambda)
    report = VerifyReport(table.algebra, table.form, table.max_lambda, 0)
    for key, want in table.entries.items():
        got = computed.pop(key, None)
        if got is None:
            report.missing.append((key, want))
        elif got != want:
            report.wrong.append((key, got, want))
        else:
            report.matched += 1
    for key, got in sorted(computed.items()):
        report.extra.append((key, got))
    return report
