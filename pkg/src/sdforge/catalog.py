"""Hit log persistence, the known-parameter ledger and the published tables."""

from __future__ import annotations

import csv
import io
import json
import os
import threading
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .analysis import CodeReport, Family
from .constructions import CANDIDATE_BITS, candidate_from_hex, candidate_to_hex, get_construction, to_candidate

PUBLISHED_TABLES = "published_tables.csv"
KNOWN_PARAMS = "known_params.csv"


class CatalogError(Exception):
    pass


class TableParseError(CatalogError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def data_path(name: str) -> Path:
    return Path(str(resources.files("sdforge") / "data" / name))


@dataclass
class HitRecord:
    construction: str
    candidate: str
    family: Optional[str]
    d: int
    A12: Optional[int] = None
    A14: Optional[int] = None
    gamma: Optional[int] = None
    beta: Optional[int] = None
    alpha: Optional[int] = None
    seed: Optional[int] = None
    algorithm: Optional[str] = None
    iteration: Optional[int] = None
    timestamp: Optional[str] = None
    aut_order: Optional[int] = None

    def __post_init__(self) -> None:
        # round-trips through 36 bits
        self.candidate = candidate_to_hex(candidate_from_hex(self.candidate))
        if self.family == Family.TYPE_II.value:
            if self.alpha is None or (self.A12 is not None and self.A12 != 4398 + self.alpha):
                raise ValueError("Type II hit needs alpha = A12 - 4398")
        elif self.family in (Family.W72_1.value, Family.W72_2.value):
            if self.beta is None or self.gamma is None:
                raise ValueError("Type I hit needs gamma and beta")
            if self.A12 is not None and self.A12 != 2 * self.beta:
                raise ValueError("Type I hit needs A12 = 2 beta")

    @classmethod
    def from_report(cls, report: CodeReport, **extra) -> "HitRecord":
        return cls(
            construction=report.construction,
            candidate=report.candidate,
            family=report.family.value if report.family else None,
            d=report.min_distance,
            A12=report.counts.get(12),
            A14=report.counts.get(14),
            gamma=report.gamma,
            beta=report.beta,
            alpha=report.alpha,
            **extra,
        )

    def params(self) -> tuple:
        if self.family == Family.TYPE_II.value:
            return (self.family, self.alpha)
        return (self.family, self.gamma, self.beta)

    def to_json(self, timestamp: bool = True) -> str:
        d = asdict(self)
        if not timestamp:
            d.pop("timestamp")
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "HitRecord":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


_append_lock = threading.Lock()


def append_hit(h: HitRecord, path: str | os.PathLike, timestamp: bool = True) -> None:
    """Append one JSON line; the whole line goes out in a single write."""
    line = h.to_json(timestamp=timestamp) + "\n"
    try:
        with _append_lock, open(path, "a", encoding="utf-8") as f:
            f.write(line)
            f.flush()
    except OSError as e:
        raise CatalogError(f"cannot append to {path}: {e}") from e


def load_hits(path: str | os.PathLike) -> list[HitRecord]:
    out = []
    try:
        with open(path, encoding="utf-8") as f:
            for n, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    out.append(HitRecord.from_dict(json.loads(line)))
                except (ValueError, TypeError) as e:
                    raise CatalogError(f"{path}:{n}: bad hit record: {e}") from e
    except OSError as e:
        raise CatalogError(f"cannot read {path}: {e}") from e
    return out


@dataclass(frozen=True)
class KnownParameterSet:
    type_i: frozenset = field(default_factory=frozenset)  # (family, gamma, beta)
    type_ii: frozenset = field(default_factory=frozenset)  # alpha

    def __contains__(self, params) -> bool:
        return not is_new(params, self)

    def union(self, other: "KnownParameterSet") -> "KnownParameterSet":
        return KnownParameterSet(self.type_i | other.type_i, self.type_ii | other.type_ii)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "KnownParameterSet":
        path = data_path(KNOWN_PARAMS) if path is None else path
        t1, t2 = set(), set()
        with open(path, newline="", encoding="utf-8") as f:
            for n, row in enumerate(csv.DictReader(f), 2):
                kind = (row.get("kind") or "").strip()
                try:
                    if kind == "I":
                        t1.add((row["family"].strip() or Family.W72_1.value, int(row["gamma"]), int(row["beta"])))
                    elif kind == "II":
                        t2.add(int(row["alpha"]))
                    else:
                        raise ValueError(f"kind must be I or II, got {kind!r}")
                except (KeyError, ValueError) as e:
                    raise TableParseError(n, str(e)) from e
        return cls(frozenset(t1), frozenset(t2))


def _normalise_params(params) -> tuple:
    if isinstance(params, (CodeReport, HitRecord)):
        params = params.params()
    if isinstance(params, int):
        return (Family.TYPE_II.value, params)
    params = tuple(params)
    fam = params[0].value if isinstance(params[0], Family) else params[0]
    return (fam,) + params[1:]


def is_new(params, known: KnownParameterSet) -> bool:
    """True when the enumerator parameters are not in ``known``.

    ``params`` is ``(family, gamma, beta)``, ``("TYPE_II", alpha)``, a bare
    alpha, a CodeReport or a HitRecord.
    """
    p = _normalise_params(params)
    if p[0] == Family.TYPE_II.value:
        return p[1] not in known.type_ii
    return p not in known.type_i


@dataclass(frozen=True)
class TableRow:
    id: str
    construction: str
    candidate: int
    family: Family
    gamma: Optional[int]
    beta: Optional[int]
    alpha: Optional[int]
    aut_order: Optional[int]
    printed_construction: Optional[str] = None

    @property
    def bits(self) -> str:
        return format(self.candidate, f"0{CANDIDATE_BITS}b")

    def expected(self) -> tuple:
        if self.family is Family.TYPE_II:
            return (self.family.value, self.alpha)
        return (self.family.value, self.gamma, self.beta)


def _opt_int(s: Optional[str]) -> Optional[int]:
    s = (s or "").strip()
    return int(s) if s else None


def parse_tables(text: str) -> list[TableRow]:
    rows = []
    reader = csv.DictReader(io.StringIO(text))
    for n, row in enumerate(reader, 2):
        try:
            cid = get_construction(row["construction"]).id
            groups = [g.strip() for g in row["r_bits"].split(";")]
            bits = "".join(groups)
            if len(bits) != CANDIDATE_BITS or set(bits) - {"0", "1"}:
                raise ValueError(f"r_bits must hold {CANDIDATE_BITS} binary digits, got {bits!r}")
            kind = row["type"].strip().upper()
            if kind in ("II", "TYPE_II"):
                fam = Family.TYPE_II
            elif kind in ("I", "W72_1", "W_{72,1}"):
                fam = Family.W72_1
            elif kind == "W72_2":
                fam = Family.W72_2
            else:
                raise ValueError(f"unknown type {row['type']!r}")
            rec = TableRow(
                id=row["id"].strip(),
                construction=cid,
                candidate=to_candidate(bits),
                family=fam,
                gamma=_opt_int(row.get("gamma")),
                beta=_opt_int(row.get("beta")),
                alpha=_opt_int(row.get("alpha")),
                aut_order=_opt_int(row.get("aut_order")),
                printed_construction=(row.get("printed_construction") or "").strip() or None,
            )
            if fam is Family.TYPE_II and rec.alpha is None:
                raise ValueError("Type II row without alpha")
            if fam is not Family.TYPE_II and (rec.gamma is None or rec.beta is None):
                raise ValueError("Type I row without gamma/beta")
        except (KeyError, ValueError, AttributeError) as e:
            raise TableParseError(n, str(e)) from e
        rows.append(rec)
    return rows


def load_paper_tables(path: str | os.PathLike | None = None) -> list[TableRow]:
    path = data_path(PUBLISHED_TABLES) if path is None else path
    with open(path, newline="", encoding="utf-8") as f:
        return parse_tables(f.read())


def write_tables(rows: Iterable[TableRow], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "construction", "r_bits", "type", "gamma", "beta", "alpha", "aut_order", "printed_construction"])
        for r in rows:
            groups = [r.bits[i : i + 18] for i in (0, 18)]
            w.writerow(
                [
                    r.id,
                    r.construction,
                    ";".join(groups),
                    r.family.value,
                    "" if r.gamma is None else r.gamma,
                    "" if r.beta is None else r.beta,
                    "" if r.alpha is None else r.alpha,
                    "" if r.aut_order is None else r.aut_order,
                    r.printed_construction or "",
                ]
            )
