"""Request parsing, dispatch, JSON output shape, and exit codes."""

import json
from fractions import Fraction

import pytest

from exactweil.cli import (
    EXIT_CAP,
    EXIT_INVALID,
    EXIT_OK,
    Request,
    main,
    parse_lattice,
    parse_matrix,
    run,
)
from exactweil.exact import ExactScalar, root_of_unity, sqrt_rat
from exactweil.lattice import GramLattice
from exactweil.weilrep import rho_S


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_lattice_inline_and_file(tmp_path):
    lat = parse_lattice("[[2]]")
    assert lat.rank == 1 and lat.is_even
    assert not parse_lattice("[[1]]").is_even
    assert parse_lattice('{"gram": [[0, 1], [1, 1]]}').rank == 2
    path = tmp_path / "gram.json"
    path.write_text('{"gram": [[2, 1], [1, 2]]}')
    assert parse_lattice(str(path)).delta() == 3
    with pytest.raises(ValueError):
        parse_lattice("[[2, 1], [0, 2]]")  # asymmetric
    with pytest.raises(ValueError):
        parse_lattice("[[2")
    with pytest.raises(ValueError):
        parse_lattice('{"no_gram": 1}')


def test_parse_matrix():
    mat = parse_matrix("0,-1,1,0")
    assert mat.entries() == (0, -1, 1, 0)
    with pytest.raises(ValueError):
        parse_matrix("1,0,0")
    with pytest.raises(ValueError):
        parse_matrix("1,0,x,1")
    with pytest.raises(ValueError):
        parse_matrix("1,1,1,0")  # determinant -1


def test_run_milgram():
    payload, code = run(Request("milgram", parse_lattice("[[2]]")))
    assert code == EXIT_OK and payload["ok"]
    assert payload["sgn"] == 1 and payload["delta"] == 2
    total = ExactScalar.from_json(payload["sum"]["exact"])
    assert total == root_of_unity(1, 8) * sqrt_rat(Fraction(2))


def test_run_rho_matches_generator():
    lattice = parse_lattice("[[2]]")
    payload, code = run(Request("rho", lattice, matrix=parse_matrix("0,-1,1,0")))
    assert code == EXIT_OK
    expected = rho_S(lattice.discriminant_form())
    for i in range(2):
        for j in range(2):
            cell = ExactScalar.from_json(payload["entries"][i][j])
            assert cell == expected.entries[i][j]
            # every emitted scalar re-parses bit-exactly
            assert ExactScalar.from_json(cell.to_json()) == cell
    assert payload["labels"] == [[0], [1]]
    assert payload["matrix"] == [0, -1, 1, 0]


def test_run_rho_numeric_format():
    lattice = parse_lattice("[[2]]")
    payload, _ = run(Request("rho", lattice, matrix=parse_matrix("0,-1,1,0"),
                             fmt="numeric"))
    assert "entries" not in payload
    re, im = payload["entries_numeric"][0][0]
    assert abs(re - 0.5) < 1e-12 and abs(im + 0.5) < 1e-12


def test_run_discform_and_jordan():
    payload, _ = run(Request("discform", parse_lattice("[[2, 0], [0, 4]]")))
    assert payload["delta"] == 8 and payload["even"]
    assert sorted(payload["orders"]) == [2, 4]
    payload, _ = run(Request("jordan", parse_lattice("[[2, 0], [0, 4]]")))
    assert payload["jordan"][0]["p"] == 2
    assert payload["jordan"][0]["symbol"] == "2^+1_1 4^+1_1"
    payload, _ = run(Request("jordan", parse_lattice("[[6]]"), prime=3))
    assert len(payload["jordan"]) == 1
    assert payload["jordan"][0]["components"][0]["n"] == 1


def test_run_kernel():
    lattice = parse_lattice("[[2]]")
    payload, _ = run(Request("kernel", lattice))
    assert payload["descriptor"]["base_group"] == "Gamma(N)"
    payload, _ = run(Request("kernel", lattice, matrix=parse_matrix("5,4,16,13")))
    assert payload["in_kernel"]
    payload, _ = run(Request("kernel", lattice, matrix=parse_matrix("5,4,16,13"),
                             eps=-1))
    assert not payload["in_kernel"]
    with pytest.raises(ValueError):
        run(Request("kernel", parse_lattice("[[1]]")))


def test_cli_verify(capsys):
    for gram in ("[[2]]", "[[1]]"):
        code, out = invoke(capsys, ["verify", "--lattice", gram])
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["ok"] and all(s["ok"] for s in payload["suites"])
        assert {"closed-vs-oracle", "braun"} <= {s["name"] for s in payload["suites"]}


def test_cli_exit_codes(capsys):
    code, out = invoke(capsys, ["rho", "--lattice", "[[2]]",
                                "--matrix", "1,1,1,0"])
    assert code == EXIT_INVALID and "error" in json.loads(out)
    code, _ = invoke(capsys, ["discform", "--lattice", "no-such-file.json"])
    assert code == EXIT_INVALID
    code, _ = invoke(capsys, ["rho", "--lattice", "[[1]]", "--matrix", "1,1,0,1"])
    assert code == EXIT_INVALID  # T is not in Gamma_odd
    code, _ = invoke(capsys, ["gauss", "--lattice", "[[2]]", "--prime", "2",
                              "--a", "1", "--c", "2097152"])
    assert code == EXIT_CAP
    code, _ = invoke(capsys, ["gauss", "--lattice", "[[2]]", "--prime", "2",
                              "--a", "1"])
    assert code == EXIT_INVALID  # missing --c
    with pytest.raises(SystemExit):
        main(["frobnicate", "--lattice", "[[2]]"])


def test_cli_gauss_and_pretty(capsys):
    code, out = invoke(capsys, ["gauss", "--lattice", "[[2]]", "--prime", "2",
                                "--a", "3", "--c", "2", "--format", "both"])
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["ok"]
    assert payload["closed"]["numeric"]["real"][0] == "2"
    code, out = invoke(capsys, ["rho", "--lattice", "[[2]]",
                                "--matrix", "0,-1,1,0", "--pretty"])
    assert code == EXIT_OK
    assert out.startswith("dim: 2")
    assert "1/2 - 1/2*z8^2" in out
