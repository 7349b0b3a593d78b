import io
import json

import pytest

from app.controllers.controller import EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, parse_int_list, parse_matrix, parse_range
from app.core.errors import UsageError
from main import main


def run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    status = main(list(argv), stdout=stdout, stderr=stderr)
    return status, stdout.getvalue(), stderr.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_parsers():
    assert parse_range("-3,3") == (-3, 3)
    assert parse_range("0:2") == (0, 2)
    assert parse_int_list("1, -2 3") == [1, -2, 3]
    assert parse_matrix("1,2;3,4") == [[1, 2], [3, 4]]
    with pytest.raises(UsageError):
        parse_range("3,-3")
    with pytest.raises(UsageError):
        parse_matrix("1,2;3")


def test_rank_seq():
    status, out, _ = run("rank-seq", "--coeffs", "5,-9,7,-2", "--init", "1,1,2,1", "--mmax", "5")
    assert status == EXIT_OK
    header, row = out.splitlines()
    assert header.split("\t") == ["ranks", "bounds", "transients", "polynomial", "classification", "generic"]
    assert row.split("\t")[0] == "4 9 16 25 36"


def test_rank_seq_generic_classification():
    status, out, _ = run(
        "rank-seq", "--coeffs", "2,-1,2", "--init", "2,3,3", "--mmax", "4", "--generic", "--format", "json"
    )
    assert status == EXIT_OK
    (record,) = records(out)
    assert record["ranks"] == [3, 4, 6, 7]
    assert record["generic"] == [3, 5, 7, 9]
    assert record["classification"] == "particular"


def test_rank_certificate():
    status, out, _ = run("rank", "--coeffs", "1,1", "--init", "0,1", "--format", "json")
    assert status == EXIT_OK
    (record,) = records(out)
    assert record["rank"] == 2
    assert record["coefficients"] == ["1", "1"]
    assert record["certified"] is True


def test_rank_from_bfile(tmp_path):
    path = tmp_path / "b000045.txt"
    a, b, lines = 0, 1, []
    for n in range(40):
        lines.append(f"{n} {a}")
        a, b = b, a + b
    path.write_text("\n".join(lines) + "\n")
    status, out, _ = run("rank", "--oeis", str(path), "--format", "json")
    assert status == EXIT_OK
    assert records(out)[0]["rank"] == 2

    status, out, _ = run("rank-seq", "--oeis", str(path), "--mmax", "3", "--format", "json")
    assert records(out)[0]["ranks"] == [2, 3, 4]


def test_power_with_hankel_determinant():
    status, out, _ = run("power", "--coeffs", "1,1", "--init", "0,1", "--M", "2", "--carlitz", "--format", "json")
    assert status == EXIT_OK
    (record,) = records(out)
    assert record["rank"] == 3
    assert record["bound"] == 3
    assert record["coefficients"] == ["2", "2", "-1"]
    assert record["carlitz"] == "-1"


def test_product():
    status, out, _ = run(
        "product",
        "--coeffs", "0,2,0,-1", "--init", "1,1,2,1",
        "--coeffs2", "7,-16,12", "--init2", "1,1,1",
        "--format", "json",
    )
    assert status == EXIT_OK
    (record,) = records(out)
    assert record["rank"] == 10
    assert record["bound"] == 10


def test_bounds():
    status, out, _ = run("bounds", "--multiplicities", "3,1", "--mmax", "3", "--format", "json")
    assert status == EXIT_OK
    rows = records(out)
    assert [r["refined"] for r in rows] == [4, 9, 16]
    assert [r["oracle"] for r in rows] == [4, 9, 16]
    assert [r["distinct"] for r in rows] == [4, 10, 20]

    status, out, _ = run("bounds", "--r", "4", "--k", "2", "--r2", "3", "--k2", "2", "--format", "json")
    assert records(out)[0]["refined"] == 10


def test_bounds_rejects_k_above_r():
    status, _, err = run("bounds", "--r", "2", "--k", "3")
    assert status == EXIT_USAGE
    assert err.startswith("error:")


def test_snf():
    status, out, _ = run("snf", "--matrix", "4,-1,-1,-1,-1;2,1,-2,1,-2")
    assert status == EXIT_OK
    header, row = out.splitlines()
    cells = dict(zip(header.split("\t"), row.split("\t")))
    assert cells["diagonal"] == "1 3"
    assert cells["free_rank"] == "3"
    assert cells["quotient"] == "Z_3 + Z^3"


def test_classes_from_roots_and_lattice(tmp_path):
    status, out, _ = run("classes", "--roots", "2,-2,4", "--mmax", "3", "--format", "json")
    assert status == EXIT_OK
    assert [r["classes"] for r in records(out)] == [3, 5, 7]

    path = tmp_path / "lattice.json"
    path.write_text('{"k": 5, "relations": [[4, -1, -1, -1, -1], [2, 1, -2, 1, -2]]}')
    status, out, _ = run(
        "classes", "--lattice", str(path), "--mmax", "4", "--ranks", "5,15,35,67,111,167", "--format", "json"
    )
    rows = records(out)
    assert [r["classes"] for r in rows] == [5, 15, 35, 67]
    assert rows[0]["predicted_degree"] == 2
    assert rows[0]["consistent"] is True


def test_fit():
    status, out, _ = run("fit", "--ranks", "2,1,2,1,2,1", "--format", "json")
    assert status == EXIT_OK
    assert records(out)[0]["polynomial"] == "period 2: 2 | 1"


def test_search():
    status, out, _ = run("search", "--rank", "1", "--coeff-range=1,2", "--mmax", "3", "--workers", "1", "--format", "json")
    assert status == EXIT_OK
    (row,) = records(out)
    assert row["coefficients"] == ["1"]
    assert row["ranks"] == [1, 1, 1]


def test_zero_constant_coefficient_is_rejected():
    status, out, err = run("rank", "--coeffs", "1,0", "--init", "1,1")
    assert status == EXIT_USAGE
    assert out == ""
    assert "c0 must be nonzero" in err


def test_argparse_errors_exit_with_usage_status():
    assert run("rank-seq", "--mmax", "many")[0] == EXIT_USAGE
    assert run("no-such-command")[0] == EXIT_USAGE


def test_computation_errors_carry_a_hint():
    status, _, err = run("rank", "--terms", "0,1,1", "--guard", "0")
    assert status == EXIT_COMPUTATION
    assert "hint:" in err


def test_out_writes_a_file(tmp_path):
    out = tmp_path / "fit.md"
    status, stdout, _ = run("fit", "--ranks", "2,3,4,5", "--format", "md", "--out", str(out))
    assert status == EXIT_OK
    assert stdout == ""
    assert "M + 1" in out.read_text()
