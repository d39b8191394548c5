import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import data_path, random_array
from families import all_family_datums
from leibniz import io
from leibniz.algebra import Algebra
from leibniz.catalog import abelian, left_leibniz_two, nilpotent_three, two_dim_lie
from leibniz.cli import main
from leibniz.errors import ParseError, ShapeError
from leibniz.field import Field
from leibniz.flags import enumerate_flag_datums
from leibniz.morphisms import is_isomorphism
from leibniz.products import ExtendingDatum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# documents

def test_algebra_file_parses(Q):
    A = io.algebra_from_doc(io.load(data_path("ex12.json")))
    assert A == nilpotent_three(Q)


@given(st.integers(0, 10**6), st.sampled_from([None, 2, 3, 7]), st.integers(0, 3))
def test_algebra_round_trip(seed, p, n):
    F = Field(p)
    rng = np.random.default_rng(seed)
    A = Algebra(F, random_array(F, rng, (n, n, n), 0.4), check=False)
    text = io.dumps(io.algebra_to_doc(A))
    B = io.algebra_from_doc(io.loads(text), check=False)
    assert B.field == F
    assert np.array_equal(B.bracket, A.bracket)
    assert io.dumps(io.algebra_to_doc(B)) == text


@given(st.integers(0, 10**6), st.sampled_from([None, 3]))
def test_datum_round_trip(seed, p):
    F = Field(p)
    rng = np.random.default_rng(seed)
    blocks = {"la": (2, 2, 2), "ra": (2, 2, 2), "lh": (2, 2, 2), "rh": (2, 2, 2), "f": (2, 2, 2), "vb": (2, 2, 2)}
    d = ExtendingDatum(two_dim_lie(F), 2, **{b: random_array(F, rng, s, 0.3) for b, s in blocks.items()})
    back = io.datum_from_doc(io.loads(io.dumps(io.datum_to_doc(d))))
    assert back == d


def test_flag_round_trip(F3):
    A = nilpotent_three(F3)
    first, second = enumerate_flag_datums(A)
    for fd in first[::50] + second[::10]:
        doc = json.loads(io.dumps(io.flag_to_doc(F3, fd)))
        assert io.flag_from_doc(A, doc).key() == fd.key()


def test_rational_scalars_in_text_form(Q):
    A = Algebra.from_table(Q, 2, {(0, 0): {1: Q("-3/4")}})
    doc = io.algebra_to_doc(A)
    assert doc["bracket"] == [{"left": 0, "right": 0, "value": {"1": "-3/4"}}]
    assert io.algebra_from_doc(doc) == A


def test_parse_error_reports_position():
    with pytest.raises(ParseError, match="line 2, column 11"):
        io.loads('{"field": {"kind": "rational"},\n "dim": 1 x}', "broken.json")


@pytest.mark.parametrize("doc,match", [
    ({"dim": 1}, "missing key 'field'"),
    ({"field": {"kind": "complex"}, "dim": 1}, "unknown kind"),
    ({"field": {"kind": "prime", "p": 4}, "dim": 1}, "field"),
    ({"field": {"kind": "rational"}, "dim": -1}, "dim"),
    ({"field": {"kind": "rational"}, "dim": 1, "bracket": [{"left": 0, "right": 1, "value": {}}]}, "out of range"),
    ({"field": {"kind": "rational"}, "dim": 1, "bracket": [{"left": 0, "right": 0, "value": {"0": 1.5}}]}, "scalar"),
    ({"field": {"kind": "rational"}, "dim": 2, "basis": ["a"]}, "basis"),
])
def test_malformed_algebra_documents(doc, match):
    with pytest.raises(ParseError, match=match):
        io.algebra_from_doc(doc)


def test_matrix_shape_checked(F3):
    with pytest.raises(ShapeError):
        io.matrix_from_doc(F3, [["1", "0"]], (2, 2))
    with pytest.raises(ParseError, match="ragged"):
        io.matrix_from_doc(F3, [["1", "0"], ["1"]])


def test_digest_separates_inputs():
    assert io.digest("ab", "c") != io.digest("a", "bc")


# commands

def test_check_ok(capsys):
    code, rep = run_json(capsys, "check", data_path("ex12.json"))
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["leibniz"] is True
    assert rep["command"] == ["check", data_path("ex12.json")]
    with open(data_path("ex12.json")) as fh:
        assert rep["inputs"] == io.digest(fh.read())


def test_check_zero_bracket(capsys):
    code, rep = run_json(capsys, "check", data_path("zero.json"))
    assert code == 0 and rep["result"]["leibniz"]


def test_check_fail_has_witness(capsys):
    code, rep = run_json(capsys, "check", data_path("bad.json"))
    assert code == 1 and rep["status"] == "fail"
    w = rep["result"]["witness"]
    assert w["indices"] == [0, 0, 0] and w["elements"] == ["e1", "e1", "e1"]
    assert w["lhs"] != w["rhs"]


def test_missing_file_is_usage_error(capsys):
    code, out, err = run(capsys, "check", data_path("absent.json"))
    assert code == 2 and out == "" and "absent.json" in err


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"field": {"kind": "rational"},\n "dim": 1 x}')
    code, _, err = run(capsys, "check", str(path))
    assert code == 2 and "line 2, column 11" in err


def test_unknown_command_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_solve_derivations(capsys):
    code, rep = run_json(capsys, "solve", data_path("ex12.json"), "--kind", "der")
    assert code == 0 and rep["result"]["dim"] == 3
    assert len(rep["result"]["basis"]) == 3


def test_solve_anti_derivations_of_abelian(capsys, tmp_path):
    path = tmp_path / "ab2.json"
    path.write_text(io.dumps(io.algebra_to_doc(abelian(Field.rational(), 2))))
    code, rep = run_json(capsys, "solve", str(path), "--kind", "ader")
    assert code == 0 and rep["result"]["dim"] == 4


def test_solve_double_derivations_count(capsys):
    code, rep = run_json(capsys, "solve", data_path("ex12_f5.json"), "--kind", "dder")
    assert code == 0 and rep["result"]["count"] == 5625
    assert "items" not in rep["result"]


def test_solve_double_derivations_listed_and_sharded(capsys):
    code, rep = run_json(capsys, "solve", data_path("ex12_f2.json"), "--kind", "dder", "--list")
    assert code == 0 and rep["result"]["count"] == 48 == len(rep["result"]["items"])
    code, sharded = run_json(capsys, "solve", data_path("ex12_f2.json"), "--kind", "dder", "--list",
                             "--jobs", "2")
    assert sharded["result"] == rep["result"]


def test_solve_double_derivations_over_q_refused(capsys):
    code, _, err = run(capsys, "solve", data_path("ex12.json"), "--kind", "dder")
    assert code == 2 and "prime" in err


def test_solve_rejects_non_leibniz(capsys):
    code, _, err = run(capsys, "solve", data_path("bad.json"), "--kind", "der")
    assert code == 1 and err


def test_product_of_matched_pair(capsys):
    code, rep = run_json(capsys, "product", "bicrossed", data_path("matched_pair_f5.json"), "--validate")
    assert code == 0 and rep["result"]["leibniz"]
    P = io.algebra_from_doc(rep["result"]["algebra"])
    F = P.field
    # basis e1, e2, f1, f2
    expected = {(2, 0): {1: 1, 2: 1}, (0, 2): {1: -1, 2: -1}, (3, 0): {3: 1},
                (1, 0): {1: 1}, (0, 1): {1: -1}}
    assert P == Algebra.from_table(F, 4, expected)


def test_product_of_trivial_datum_is_direct_sum(capsys, Q):
    code, rep = run_json(capsys, "product", "unified", data_path("trivial_datum.json"), "--validate")
    assert code == 0
    P = io.algebra_from_doc(rep["result"]["algebra"])
    assert np.array_equal(P.bracket[:2, :2, :2], two_dim_lie(Q).bracket)
    assert not P.bracket[2].any() and not P.bracket[:, 2].any()


def test_product_refuses_failing_datum(capsys):
    code, rep = run_json(capsys, "product", "unified", data_path("broken_datum.json"), "--validate")
    assert code == 1 and rep["status"] == "fail"
    axioms = rep["result"]["axioms"]["axioms"]
    assert axioms["L5"]["indices"] == [0, 0, 0]
    assert "algebra" not in rep["result"]


def test_product_without_validation_flags_non_leibniz(capsys):
    code, rep = run_json(capsys, "product", "unified", data_path("broken_datum.json"))
    assert code == 0 and rep["result"]["leibniz"] is False


def test_product_kind_mismatch(capsys):
    code, rep = run_json(capsys, "product", "hemi", data_path("matched_pair_f5.json"))
    assert code == 1 and "hemisemidirect" in rep["result"]["error"]


@pytest.mark.parametrize("system,status", [("unified", "ok"), ("bicrossed", "ok"), ("crossed", None)])
def test_axioms_command(capsys, system, status):
    code, out, err = run(capsys, "axioms", data_path("matched_pair_f5.json"), "--system", system)
    if status is None:
        # a matched pair has nonzero module blocks, so it is not a crossed system
        assert code == 2 and "crossed" in err
    else:
        rep = json.loads(out)
        assert code == 0 and rep["status"] == status and rep["result"]["passed"]


def test_axioms_command_reports_failure(capsys):
    code, rep = run_json(capsys, "axioms", data_path("broken_datum.json"))
    assert code == 1 and rep["result"]["axioms"]["L5"] is not None


def test_flags_sl2_single_class(capsys):
    code, rep = run_json(capsys, "flags", data_path("sl2_f5.json"), "--classify", "cohom")
    assert code == 0
    assert rep["result"]["first_kind"] == 125 and rep["result"]["second_kind"] == 0
    assert rep["result"]["classes"] == 1


def test_flags_char_two_branch(capsys):
    code, rep = run_json(capsys, "flags", data_path("ex12_f2.json"), "--list")
    assert code == 0
    F = Field.prime(2)
    second = [d for d in rep["result"]["datums"] if d["kind"] == 2]
    family = [io.flag_to_doc(F, fd) for fd in all_family_datums(F)["second_kind"]]
    assert len(second) == rep["result"]["second_kind"] == 16
    assert sorted(map(io.dumps, second)) == sorted(map(io.dumps, family))
    # the free e2 coefficient of [x, x] only exists in characteristic 2
    assert {d["g0"][1] for d in second} == {"0", "1"}


def test_flags_of_one_dim_abelian(capsys, tmp_path):
    path = tmp_path / "a1.json"
    path.write_text(io.dumps(io.algebra_to_doc(abelian(Field.prime(2), 1))))
    code, rep = run_json(capsys, "flags", str(path))
    first, second = enumerate_flag_datums(abelian(Field.prime(2), 1))
    assert code == 0
    assert (rep["result"]["first_kind"], rep["result"]["second_kind"]) == (len(first), len(second))


def test_flags_sharded_matches(capsys):
    _, one = run_json(capsys, "flags", data_path("ex12_f2.json"), "--list", "--classify", "equiv")
    _, two = run_json(capsys, "flags", data_path("ex12_f2.json"), "--list", "--classify", "equiv",
                      "--jobs", "2")
    assert one["result"] == two["result"]


def test_flags_cap_exceeded_is_undecided(capsys):
    code, rep = run_json(capsys, "flags", data_path("ex12_f2.json"), "--cap", "2")
    assert code == 3 and rep["status"] == "undecided"
    assert "cap" in rep["result"]["reason"]


def test_flags_over_q_refused(capsys):
    code, _, _ = run(capsys, "flags", data_path("ex12.json"))
    assert code == 2


def test_complements_index_two(capsys):
    code, rep = run_json(capsys, "complements", data_path("bicrossed_f5.json"), "--g", "0,1", "--h", "2,3")
    assert code == 0
    res = rep["result"]
    assert res["index"] == 2 and res["deformation_maps"] == 45
    F = Field.prime(5)
    reps = [io.algebra_from_doc(r["algebra"]) for r in res["representatives"]]
    assert reps[0] == abelian(F, 2)
    assert not reps[1].table() == {}


def test_complements_of_direct_sum(capsys):
    code, rep = run_json(capsys, "complements", data_path("abelian_sum_f2.json"), "--g", "0", "--h", "1")
    assert code == 0 and rep["result"]["index"] == 1


def test_complements_budget_is_undecided(capsys, monkeypatch):
    monkeypatch.setenv("LEIBNIZ_BUDGET", "10")
    code, rep = run_json(capsys, "complements", data_path("bicrossed_f5.json"), "--g", "0,1", "--h", "2,3")
    assert code == 3 and rep["status"] == "undecided"
    assert "budget" in rep["result"]["reason"]


def test_complements_rejects_non_complement(capsys):
    code, rep = run_json(capsys, "complements", data_path("bicrossed_f5.json"), "--g", "0,1", "--h", "1,2")
    assert code == 1 and "error" in rep["result"]


def test_complements_bad_index_list(capsys):
    code, _, err = run(capsys, "complements", data_path("bicrossed_f5.json"), "--g", "0,x", "--h", "2,3")
    assert code == 2 and "index" in err


def test_iso_same_file_is_identity(capsys):
    code, rep = run_json(capsys, "iso", data_path("ex12_f5.json"), data_path("ex12_f5.json"))
    assert code == 0
    assert rep["result"]["isomorphism"] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]


def test_iso_abelian_vs_non_lie(capsys):
    code, rep = run_json(capsys, "iso", data_path("abelian2_f3.json"), data_path("leibniz2_f3.json"))
    assert code == 1 and rep["result"]["isomorphism"] is None


def test_iso_deformation_to_non_lie(capsys):
    code, rep = run_json(capsys, "iso", data_path("deformed_f3.json"), data_path("leibniz2_f3.json"))
    assert code == 0
    F = Field.prime(3)
    phi = io.matrix_from_doc(F, rep["result"]["isomorphism"], (2, 2))
    A = io.algebra_from_doc(io.load(data_path("deformed_f3.json")))
    assert is_isomorphism(A, left_leibniz_two(F), phi)


def test_iso_budget_is_undecided(capsys, monkeypatch):
    monkeypatch.setenv("LEIBNIZ_BUDGET", "5")
    code, rep = run_json(capsys, "iso", data_path("deformed_f3.json"), data_path("leibniz2_f3.json"))
    assert code == 3 and rep["status"] == "undecided"


def test_iso_field_mismatch(capsys):
    code, _, err = run(capsys, "iso", data_path("ex12.json"), data_path("ex12_f5.json"))
    assert code == 2 and err


# report invariants

@pytest.mark.parametrize("argv", [
    ["check", data_path("bad.json")],
    ["solve", data_path("ex12_f2.json"), "--kind", "dder", "--list"],
    ["flags", data_path("ex12_f2.json"), "--classify", "cohom"],
    ["complements", data_path("bicrossed_f5.json"), "--g", "0,1", "--h", "2,3"],
])
def test_reports_are_byte_identical(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_emitted_algebra_reparses_identically(capsys):
    _, rep = run_json(capsys, "product", "bicrossed", data_path("matched_pair_f5.json"))
    doc = rep["result"]["algebra"]
    assert io.algebra_to_doc(io.algebra_from_doc(doc)) == doc


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "--pretty", "solve", data_path("ex12.json"), "--kind", "der")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "status: ok"
    assert "dim: 3" in lines and "basis[0]:" in lines
