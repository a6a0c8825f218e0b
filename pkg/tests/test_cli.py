import json

import pytest
from typer.testing import CliRunner

from app.cli import InputDocument, load_document
from app.errors import InputParseError
from app.main import cli

runner = CliRunner()

F2_DOCUMENT = {"rows": 2, "cols": 2, "coefficients": [[["0", "-1"], ["0", "0"]], [["1", "0"], ["0", "1"]]]}
F1_DOCUMENT = {"rows": 1, "cols": 1, "coefficients": [[["1"]], [["1"]]]}
F4_DOCUMENT = {"rows": 1, "cols": 2, "coefficients": [[["1", "0"]], [["0", "1"]]]}
JORDAN3_DOCUMENT = {
    "rows": 3,
    "cols": 3,
    "coefficients": [
        [["0", "-1", "0"], ["0", "0", "-1"], ["0", "0", "0"]],
        [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
    ],
}
WIDE_DOCUMENT = {
    "rows": 1,
    "cols": 2,
    "coefficients": [[["0", "0"]], [["1", "0"]], [["0", "1"]]],
    "curve": [["0", "1"], ["-1", "0"], ["5", "7"]],
}


def run(command, document_path, tmp_path, *flags):
    out = tmp_path / f"{command}.json"
    result = runner.invoke(cli, [command, str(document_path), "--format", "structured", "--out", str(out), *flags])
    report = json.loads(out.read_text(encoding="utf-8")) if out.exists() else None
    return result, report


# --- DOCUMENTS ---

def test_document_shapes_are_validated(write_document):
    path = write_document({"rows": 2, "cols": 2, "coefficients": [[["1", "0"]]]})
    with pytest.raises(InputParseError):
        load_document(path)


def test_document_defaults():
    document = InputDocument(rows=1, cols=1)
    assert document.field == "rational"
    assert document.kind == "polynomial"
    assert document.coefficients == []


def test_curve_length_is_validated():
    with pytest.raises(ValueError):
        InputDocument(rows=1, cols=2, curve=[["1"]])


# --- ANALYZE ---

def test_analyze_f2(write_document, tmp_path):
    result, report = run("analyze", write_document(F2_DOCUMENT), tmp_path)
    assert result.exit_code == 0
    assert report["stabilization"]["k"] == 2
    assert report["stabilization"]["exponents"] == [0, 2]
    assert [row["dim_N"] for row in report["steps"]] == [1, 1, 0]


def test_analyze_reports_rank_and_leading_order_of_bases(write_document, tmp_path):
    result, report = run("analyze", write_document(F2_DOCUMENT), tmp_path)
    assert result.exit_code == 0
    assert report["basis_orders"] == [
        {"step": 1, "rank": [0], "leading_order": [0]},
        {"step": 2, "rank": [], "leading_order": []},
        {"step": 3, "rank": [2], "leading_order": [2]},
    ]


def test_analyze_recentered(write_document, tmp_path):
    result, report = run("analyze", write_document(F2_DOCUMENT), tmp_path, "--at", "1")
    assert result.exit_code == 0
    assert report["stabilization"]["k"] == 0
    assert report["center"] == "1"


def test_analyze_scans_several_centers(write_document, tmp_path):
    result, report = run("analyze", write_document(F2_DOCUMENT), tmp_path, "--at", "0,1")
    assert result.exit_code == 0
    assert [c["stabilization"]["k"] for c in report["centers"]] == [2, 0]


def test_analyze_empty_family(write_document, tmp_path):
    result, report = run("analyze", write_document({"rows": 0, "cols": 0, "coefficients": []}), tmp_path)
    assert result.exit_code == 0
    assert report["stabilization"]["k"] == 0
    assert report["stabilization"]["degenerate"]


def test_analyze_with_checks_certifies_by_oracle(write_document, tmp_path):
    result, report = run("analyze", write_document(JORDAN3_DOCUMENT), tmp_path, "--check")
    assert result.exit_code == 0
    assert all(c["passed"] for c in report["checks"])
    assert report["stabilization"]["certification_method"] == "oracle-smith"


def test_structured_output_is_deterministic(write_document, tmp_path):
    path = write_document(F2_DOCUMENT)
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        runner.invoke(cli, ["diagonalize", str(path), "--format", "structured", "--out", str(out)])
    assert first.read_bytes() == second.read_bytes()


def test_float_backend_carries_the_banner(write_document, tmp_path):
    result, report = run("analyze", write_document(F2_DOCUMENT), tmp_path, "--backend", "float")
    assert result.exit_code == 0
    assert report["backend"] == "float64"
    assert "tolerance-dependent" in report["banner"]


def test_text_output(write_document):
    result = runner.invoke(cli, ["analyze", str(write_document(F2_DOCUMENT))])
    assert result.exit_code == 0
    assert "k = 2" in result.stdout


# --- EXIT CODES ---

def test_invalid_json_exits_with_parse_code(write_document):
    result = runner.invoke(cli, ["analyze", str(write_document("{not json"))])
    assert result.exit_code == 2


def test_unparseable_entry_exits_with_parse_code(write_document):
    document = {"rows": 1, "cols": 1, "coefficients": [[["one"]]]}
    assert runner.invoke(cli, ["analyze", str(write_document(document))]).exit_code == 2


def test_missing_file_exits_with_parse_code(tmp_path):
    assert runner.invoke(cli, ["analyze", str(tmp_path / "absent.json")]).exit_code == 2


def test_non_stabilizing_run_exits_with_partial_steps(write_document, tmp_path):
    document = {
        "rows": 4,
        "cols": 4,
        "coefficients": [
            [["0", "-1", "0", "0"], ["0", "0", "-1", "0"], ["0", "0", "0", "-1"], ["0", "0", "0", "0"]],
            [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        ],
    }
    result, report = run("analyze", write_document(document), tmp_path, "--k-max", "2")
    assert result.exit_code == 3
    assert len(report["steps"]) == 3


def test_several_centers_rejected_outside_analyze(write_document, tmp_path):
    result, _ = run("diagonalize", write_document(F2_DOCUMENT), tmp_path, "--at", "0,1")
    assert result.exit_code == 2


# --- OTHER COMMANDS ---

def test_diagonalize_f1(write_document, tmp_path):
    result, report = run("diagonalize", write_document(F1_DOCUMENT), tmp_path)
    assert result.exit_code == 0
    assert report["diagonal"]["parts"][0]["S"] == [["1"]]
    assert report["transforms"]["phi"]["coefficients"][:4] == [[["1"]], [["-1"]], [["1"]], [["-1"]]]


def test_diagonalize_with_full_suite(write_document, tmp_path):
    result, report = run("diagonalize", write_document(F2_DOCUMENT), tmp_path, "--check")
    assert result.exit_code == 0
    names = {c["name"] for c in report["checks"]}
    assert {"dual-path-phi", "oracle-smith", "ginverse-axioms"} <= names
    assert all(c["passed"] for c in report["checks"])


def test_ginverse_f2(write_document, tmp_path):
    result, report = run("ginverse", write_document(F2_DOCUMENT), tmp_path)
    assert result.exit_code == 0
    assert report["laurent"]["pole_order"] == 2
    assert report["laurent"]["coefficients"][0] == [["0", "1"], ["0", "0"]]
    assert report["smith"]["full_smith"]


def test_solve_f4(write_document, tmp_path):
    result, report = run("solve", write_document(F4_DOCUMENT), tmp_path, "--check")
    assert result.exit_code == 0
    assert report["solutions"]["dim_kernel_limit"] == 1
    generator = report["solutions"]["flat_basis"]["generators"][0]
    assert generator["coefficients"][0] == ["0", "1"]
    assert generator["residual_order"] == "exact-through-order"


def test_artin_with_curve(write_document, tmp_path):
    result, report = run("artin", write_document(WIDE_DOCUMENT), tmp_path, "--check")
    assert result.exit_code == 0
    assert report["solutions"]["greenberg"][0] == {"l": 1, "greenberg": 2, "minimal": 2}
    assert report["solutions"]["exact_solution"]["coefficients"][:2] == [["0", "1"], ["-1", "0"]]
    assert all(c["passed"] for c in report["checks"])


def test_oracle_smith_jordan_block(write_document, tmp_path):
    result, report = run("oracle-smith", write_document(JORDAN3_DOCUMENT), tmp_path, "--check")
    assert result.exit_code == 0
    assert report["oracle"]["invariant_factors"] == ["1", "1", "eps**3"]
    assert report["oracle"]["local_exponents"] == [0, 0, 3]


def test_oracle_smith_rejects_jets(write_document, tmp_path):
    document = dict(F2_DOCUMENT, kind="jet")
    result, _ = run("oracle-smith", write_document(document), tmp_path)
    assert result.exit_code == 2


def test_environment_backend(write_document, tmp_path, monkeypatch):
    monkeypatch.setenv("LOCAL_SMITH_BACKEND", "float")
    _, report = run("analyze", write_document(F2_DOCUMENT), tmp_path)
    assert report["backend"] == "float64"
    _, report = run("analyze", write_document(dict(F2_DOCUMENT, field="rational")), tmp_path)
    assert report["backend"] == "exact-rational"
