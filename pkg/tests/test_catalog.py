import hashlib
import json
import threading

import pytest

from sdforge.analysis import Family
from sdforge.catalog import (
    PUBLISHED_TABLES,
    CatalogError,
    HitRecord,
    KnownParameterSet,
    TableParseError,
    append_hit,
    data_path,
    is_new,
    load_hits,
    load_paper_tables,
    parse_tables,
    write_tables,
)

HEADER = "id,construction,r_bits,type,gamma,beta,alpha,aut_order,printed_construction\n"


def hit(**kw):
    base = dict(construction="G1.1", candidate="123456789", family="W72_1", d=12, A12=258, A14=8640, gamma=0, beta=129, seed=3, algorithm="voa", iteration=7, timestamp="2024-01-01T00:00:00+00:00")
    base.update(kw)
    return HitRecord(**base)


# -- hit log -------------------------------------------------------------------


def test_append_two_and_round_trip(tmp_path):
    p = tmp_path / "hits.jsonl"
    a, b = hit(), hit(family="TYPE_II", A12=1602, A14=0, gamma=None, beta=None, alpha=-2796)
    append_hit(a, p)
    append_hit(b, p)
    lines = p.read_text().splitlines()
    assert len(lines) == 2
    assert [json.loads(x)["family"] for x in lines] == ["W72_1", "TYPE_II"]
    assert load_hits(p) == [a, b]


def test_concurrent_appends_keep_every_line(tmp_path):
    p = tmp_path / "hits.jsonl"

    def work(i):
        for j in range(25):
            append_hit(hit(iteration=i * 100 + j), p)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    recs = load_hits(p)
    assert len(recs) == 200
    assert sorted(r.iteration for r in recs) == sorted(i * 100 + j for i in range(8) for j in range(25))


def test_append_without_timestamp(tmp_path):
    p = tmp_path / "hits.jsonl"
    append_hit(hit(), p, timestamp=False)
    assert "timestamp" not in json.loads(p.read_text())


def test_append_io_error_names_path(tmp_path):
    bad = tmp_path / "missing" / "hits.jsonl"
    with pytest.raises(CatalogError, match="missing"):
        append_hit(hit(), bad)


def test_hit_record_validation():
    assert hit(candidate="0x0000000ff").candidate == "0000000ff"
    with pytest.raises(ValueError):
        hit(candidate="1000000000")  # 37 bits
    with pytest.raises(ValueError):
        hit(A12=257)
    with pytest.raises(ValueError):
        hit(family="TYPE_II", alpha=None, gamma=None, beta=None)
    with pytest.raises(ValueError):
        hit(family="TYPE_II", alpha=-2796, A12=1603)


def test_load_hits_reports_bad_line(tmp_path):
    p = tmp_path / "hits.jsonl"
    p.write_text(hit().to_json() + "\nnot json\n")
    with pytest.raises(CatalogError, match=":2:"):
        load_hits(p)


# -- known parameters ------------------------------------------------------------


def test_shipped_ledger_cardinalities():
    known = KnownParameterSet.load()
    assert len(known.type_i) == 39
    assert len(known.type_ii) == 19


def test_is_new_examples():
    known = KnownParameterSet.load()
    assert not is_new(("W72_1", 0, 129), known)
    assert not is_new(-2796, known)
    assert not is_new(("TYPE_II", -2796), known)
    assert is_new(("W72_1", 7, 1), known)
    assert is_new((Family.W72_2, 0, 129), known)
    assert ("W72_1", 0, 129) in known


def test_known_set_union(tmp_path):
    p = tmp_path / "extra.csv"
    p.write_text("kind,family,gamma,beta,alpha\nI,W72_1,7,1,\nII,,,,-1\n")
    extra = KnownParameterSet.load(p)
    both = KnownParameterSet.load().union(extra)
    assert not is_new(("W72_1", 7, 1), both) and not is_new(-1, both)
    assert len(both.type_i) == 40


def test_known_set_bad_kind(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("kind,family,gamma,beta,alpha\nIII,,,,1\n")
    with pytest.raises(TableParseError) as e:
        KnownParameterSet.load(p)
    assert e.value.line == 2


# -- published tables ----------------------------------------------------------------


def test_tables_shape():
    rows = load_paper_tables()
    assert len(rows) == 58
    assert len({r.id for r in rows}) == 58
    fams = [r.family for r in rows]
    # C1-C39 Type I, C40-C58 Type II
    assert fams.count(Family.W72_1) == 39
    assert fams.count(Family.TYPE_II) == 19
    assert all((r.family is Family.TYPE_II) == (int(r.id[1:]) >= 40) for r in rows)


def test_table_examples():
    rows = {r.id: r for r in load_paper_tables()}
    c1 = rows["C1"]
    assert c1.construction == "G1.1"
    assert c1.expected() == ("W72_1", 0, 129)
    c58 = rows["C58"]
    assert c58.construction == "G4.3" and c58.expected() == ("TYPE_II", -2238)


def test_tables_checksum_is_stable():
    digest = hashlib.sha256(data_path(PUBLISHED_TABLES).read_bytes()).hexdigest()
    readme = (data_path(PUBLISHED_TABLES).parents[3] / "README.md")
    if readme.exists():
        assert digest in readme.read_text()


def test_empty_tables():
    assert parse_tables("") == []
    assert parse_tables(HEADER) == []


@pytest.mark.parametrize(
    "row,match",
    [
        ("C1,G1.1,0101;01,W72_1,0,129,,,\n", "36 binary"),
        ("C1,G9.9," + "0" * 18 + ";" + "0" * 18 + ",W72_1,0,129,,,\n", "unknown construction"),
        ("C1,G1.1," + "0" * 18 + ";" + "0" * 18 + ",W99,0,129,,,\n", "unknown type"),
        ("C1,G1.1," + "0" * 18 + ";" + "0" * 18 + ",TYPE_II,,,,,\n", "without alpha"),
        ("C1,G1.1," + "0" * 18 + ";" + "0" * 18 + ",W72_1,x,129,,,\n", "invalid literal"),
    ],
)
def test_parse_errors_carry_line_number(row, match):
    good = "C0,G1.1," + "0" * 18 + ";" + "0" * 18 + ",W72_1,0,0,,,\n"
    with pytest.raises(TableParseError, match=match) as e:
        parse_tables(HEADER + good + row)
    assert e.value.line == 3


def test_write_then_read_round_trip(tmp_path):
    rows = load_paper_tables()
    p = tmp_path / "t.csv"
    write_tables(rows, p)
    assert load_paper_tables(p) == rows
