import io

import pytest
from hypothesis import HealthCheck, given, settings

from strategies import datasets
from ucpw.dataset_io import load_weight_profile, parse_dataset, weight_profile_from_dict, write_dataset
from ucpw.domain import DEFAULT_PROFILE
from ucpw.errors import DataError, EmptyDatasetError, SchemaError
from ucpw.harness import split_homogeneous
from ucpw.sizing import efactor

HEADER = "id,ucp,effort,e1,e2,e3,e4,e5,e6,e7,e8"


def parse(text):
    return parse_dataset(text.encode())


def test_minimal_file():
    d, warns = parse(HEADER + "\nA,100,2000,3,3,3,3,3,3,3,3\n")
    assert len(d) == 1 and warns == []
    r = d[0]
    assert (r.id, r.ucp, r.effort, r.productivity) == ("A", 100, 2000, 20)
    assert r.tech_factors is None and dict(r.tags) == {}


def test_missing_effort_column():
    with pytest.raises(SchemaError, match="effort"):
        parse("id,ucp,e1,e2,e3,e4,e5,e6,e7,e8\nA,1,1,1,1,1,1,1,1,1\n")


def test_env_out_of_range_row_rejected():
    text = HEADER + "\nA,100,2000,3,3,3,9,3,3,3,3\nB,50,700,1,1,1,1,1,1,1,1\n"
    d, warns = parse(text)
    assert [r.id for r in d] == ["B"]
    assert len(warns) == 1
    assert warns[0].startswith("row 2:")
    assert "env_factors[4] out of [0,5]" in warns[0]


def test_header_case_and_whitespace():
    d, _ = parse(" ID , UCP,Effort,E1,e2,e3,e4,e5,e6,e7,e8,Origin\nA,1,2,0,0,0,0,0,0,0,0,x\n")
    assert d[0].tags["Origin"] == "x"


def test_duplicate_header():
    with pytest.raises(SchemaError, match="duplicate"):
        parse(HEADER + ",ucp\nA,1,1,1,1,1,1,1,1,1,1,1\n")


def test_partial_group_rejected():
    with pytest.raises(SchemaError, match="average_actors"):
        parse(HEADER + ",simple_actors\nA,1,1,1,1,1,1,1,1,1,1,1\n")


def test_productivity_column_ignored():
    d, warns = parse(HEADER + ",productivity\nA,10,100,1,1,1,1,1,1,1,1,999\n")
    assert d[0].productivity == 10
    assert "productivity" not in d[0].tags
    assert any("ignored" in w for w in warns)


def test_bad_cells():
    text = HEADER + "\nA,abc,1,1,1,1,1,1,1,1,1\nB,1,0,1,1,1,1,1,1,1,1\nC,1,1,1\nA,5,5,1,1,1,1,1,1,1,1\nA,5,5,1,1,1,1,1,1,1,1\n"
    d, warns = parse(text)
    assert [r.id for r in d] == ["A"]
    assert "not a number" in warns[0]
    assert "effort must be > 0" in warns[1]
    assert "expected 11 cells" in warns[2]
    assert "duplicate id" in warns[3]


def test_empty_inputs():
    with pytest.raises(SchemaError):
        parse("")
    with pytest.raises(EmptyDatasetError):
        parse(HEADER + "\n")


def test_unreadable_path(tmp_path):
    with pytest.raises(OSError):
        parse_dataset(tmp_path / "missing.csv")


def test_quoted_tags_and_file_object():
    text = HEADER + ',note\nA,1,2,0,0,0,0,0,0,0,0,"a, ""b"""\n'
    d, _ = parse_dataset(io.StringIO(text))
    assert d[0].tags["note"] == 'a, "b"'


def test_locale_independent():
    d, warns = parse(HEADER + '\nA,"1,5",2,0,0,0,0,0,0,0,0\nB,1.5,2,0,0,0,0,0,0,0,0\n')
    assert [r.id for r in d] == ["B"] and "not a number" in warns[0]


def test_optional_groups_parse():
    head = HEADER + ",simple_actors,average_actors,complex_actors,simple_uc,average_uc,complex_uc"
    d, _ = parse(head + "\nA,1,2,0,0,0,0,0,0,0,0,1,1,1,2,1,0\nB,1,2,0,0,0,0,0,0,0,0,,,,,,\n")
    assert d[0].actor_counts == (1, 1, 1) and d[0].usecase_counts == (2, 1, 0)
    assert d[1].actor_counts is None


# -- weight profiles ---------------------------------------------------------

def test_weight_profile_empty_document(tmp_path):
    p = tmp_path / "w.json"
    p.write_text("")
    assert load_weight_profile(p) == DEFAULT_PROFILE
    p.write_text("{}")
    assert load_weight_profile(p) == DEFAULT_PROFILE


def test_weight_profile_override(tmp_path):
    p = tmp_path / "w.json"
    p.write_text('{"env_weights": [1, 1, 1, 1, 1, 1, 1, 1]}')
    prof = load_weight_profile(p)
    assert efactor((5,) * 8, prof) == 40
    assert prof.tech_weights == DEFAULT_PROFILE.tech_weights


def test_weight_profile_errors(tmp_path):
    with pytest.raises(DataError, match="13"):
        weight_profile_from_dict({"tech_weights": [1] * 12})
    with pytest.raises(DataError):
        weight_profile_from_dict({"tech_weight": [1] * 13})
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DataError):
        load_weight_profile(p)


# -- round trip --------------------------------------------------------------

@settings(max_examples=60, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(datasets(max_size=8))
def test_round_trip(tmp_path, d):
    path = tmp_path / "d.csv"
    write_dataset(d, path)
    back, warns = parse_dataset(path, name=d.name)
    assert warns == []
    assert back == d
    assert back.records == d.records


def test_round_trip_preserves_tag_columns(tmp_path):
    text = HEADER + ",origin,language\nA,1,2,0,0,0,0,0,0,0,0,ind,java\nB,3,4,1,1,1,1,1,1,1,1,uni,\n"
    d, _ = parse(text)
    path = tmp_path / "d.csv"
    write_dataset(d, path)
    assert path.read_text().splitlines()[0].endswith("origin,language")
    assert parse_dataset(path)[0].records == d.records


def test_split_outputs_reparse(tmp_path, ochodek_surrogate):
    for s in split_homogeneous(ochodek_surrogate, "language"):
        path = tmp_path / f"{s.value}.csv"
        write_dataset(s.dataset, path)
        assert parse_dataset(path)[0].records == s.dataset.records
