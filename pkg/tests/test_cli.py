import json

import pytest

from fastmap_explorer.cli import main

from conftest import FIXTURES

HEART = ["--data", str(FIXTURES / "heart.data"), "--names", str(FIXTURES / "heart.names")]


class TestConvert:
    def test_html(self, tmp_path, capsys):
        out = tmp_path / "heart.html"
        assert main(["convert", *HEART, "--out-format", "html", "--out", str(out)]) == 0
        text = out.read_text()
        assert text.count("<tr>") == 24

    def test_data_names_pair(self, tmp_path):
        out = tmp_path / "copy.data"
        main(["convert", *HEART, "--out-format", "data_names", "--out", str(out)])
        assert (tmp_path / "copy.data").exists()
        assert (tmp_path / "copy.names").exists()

    def test_text(self, tmp_path):
        out = tmp_path / "heart.txt"
        main(["convert", *HEART, "--out-format", "text", "--out", str(out)])
        assert out.read_text().splitlines()[0].startswith("age")

    def test_delimited(self, tmp_path):
        out = tmp_path / "heart.csv"
        main(["convert", *HEART, "--out-format", "delimited", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0].split(",")[0] == "age"
        assert len(lines) == 24


class TestProject:
    def test_output_shape(self, tmp_path):
        out = tmp_path / "coords.tsv"
        main([
            "project", *HEART, "--k", "2", "--pivot-iters", "5",
            "--znorm", "sigma", "--impute", "drop", "--seed", "42", "--out", str(out),
        ])
        lines = out.read_text().splitlines()
        assert lines[0] == "row_id\tx1\tx2\tclass"
        assert len(lines) == 24
        first = lines[1].split("\t")
        assert first[0] == "0"
        assert first[3] == "sick"
        float(first[1]), float(first[2])  # coordinates parse

    def test_deterministic_across_runs(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        args = ["project", *HEART, "--znorm", "sigma", "--impute", "drop", "--seed", "42"]
        main([*args, "--out", str(a)])
        main([*args, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_k3(self, tmp_path):
        out = tmp_path / "coords.tsv"
        main(["project", *HEART, "--k", "3", "--out", str(out)])
        assert out.read_text().splitlines()[0] == "row_id\tx1\tx2\tx3\tclass"

    def test_bad_impute_value(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["project", *HEART, "--impute", "what", "--out", str(tmp_path / "x.tsv")])


class TestStats:
    def test_without_coords(self, tmp_path):
        out = tmp_path / "report.json"
        main(["stats", *HEART, "--out", str(out)])
        report = json.loads(out.read_text())
        assert report["clusters"]["clusters"][0]["diameter_base"] > 0
        names = {a["name"] for a in report["attributes"]}
        assert "age" in names and "diagnosis" in names

    def test_with_coords_round_trip(self, tmp_path):
        coords = tmp_path / "coords.tsv"
        main(["project", *HEART, "--znorm", "sigma", "--seed", "1", "--out", str(coords)])
        out = tmp_path / "report.json"
        main(["stats", *HEART, "--coords", str(coords), "--out", str(out)])
        report = json.loads(out.read_text())
        clusters = report["clusters"]["clusters"]
        assert all(c["diameter_projected"] is not None for c in clusters)
        assert report["clusters"]["weighted_projected"]["diameter"] > 0


class TestExtract:
    def test_where_columns_sort(self, tmp_path, capsys):
        out = tmp_path / "extract.data"
        main([
            "extract", *HEART,
            "--where", "age:ge:50", "--where", "age:le:60",
            "--columns", "age,diagnosis",
            "--sort", "age:desc",
            "--emit-sql",
            "--out", str(out),
        ])
        sql = capsys.readouterr().out.splitlines()[0]
        assert sql == (
            "select age, diagnosis from heart "
            "where (age >= 50) and (age <= 60) order by age desc"
        )
        lines = out.read_text().splitlines()
        ages = [float(line.split(",")[0]) for line in lines]
        assert all(50 <= a <= 60 for a in ages)
        assert ages == sorted(ages, reverse=True)
        assert (tmp_path / "extract.names").exists()

    def test_distinct(self, tmp_path):
        out = tmp_path / "unique.txt"
        main(["extract", *HEART, "--columns", "diagnosis", "--distinct", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0] == "diagnosis"
        assert sorted(lines[1:]) == ["buff", "sick"]

    def test_smart_or_for_two_tokens(self, tmp_path, capsys):
        main([
            "extract", *HEART,
            "--where", "thal:eq:fix", "--where", "thal:eq:norm",
            "--emit-sql",
        ])
        sql = capsys.readouterr().out
        assert "(thal = 'fix') or (thal = 'norm')" in sql

    def test_is_null_triple(self, capsys):
        main(["extract", *HEART, "--where", "thal:is_null", "--emit-sql"])
        assert "thal IS NULL" in capsys.readouterr().out

    def test_bad_operation_exits(self):
        with pytest.raises(SystemExit):
            main(["extract", *HEART, "--where", "age:starting:5", "--emit-sql"])


def test_parse_errors_warn_but_load(tmp_path, capsys):
    names = tmp_path / "t.names"
    data = tmp_path / "t.data"
    names.write_text('<metadata separator=","><attribute name="x" type="continuous"/></metadata>')
    data.write_text("1\nbroken\n2\n")
    out = tmp_path / "o.txt"
    main(["convert", "--data", str(data), "--names", str(names),
          "--out-format", "delimited", "--out", str(out)])
    err = capsys.readouterr().err
    assert "t.data:2" in err
    assert len(out.read_text().splitlines()) == 3  # header + 2 good rows
