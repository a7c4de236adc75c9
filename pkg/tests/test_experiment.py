import csv
import io
import json
import logging

import pytest

from sidonlab.experiment import (
    COLUMNS,
    ExperimentConfig,
    ExperimentError,
    format_value,
    moduli_for,
    render,
    run_experiment,
    run_to_file,
)


def cfg(**kw):
    base = dict(families=["singer"], primes=[2, 3], moduli=[2, 3])
    base.update(kw)
    return ExperimentConfig(**base)


def test_row_count_and_order():
    rows = list(run_experiment(cfg(families=["singer"], primes=[3, 2], moduli=[3, 2])))
    assert [(r["family"], r["param"], r["m"]) for r in rows] == [
        ("singer", 2, 2), ("singer", 2, 3), ("singer", 3, 2), ("singer", 3, 3),
    ]


def test_mixed_families_sorted():
    rows = list(run_experiment(cfg(families=["singer", "bose_chowla", "erdos_turan"], primes=[5, 3], moduli=[4])))
    keys = [(r["family"], r["param"], r["m"]) for r in rows]
    assert keys == sorted(keys) and len(keys) == 6


def test_erdos_turan_row():
    (row,) = run_experiment(cfg(families=["erdos_turan"], primes=[5], moduli=[5]))
    assert row["dev_l2"] == pytest.approx(2.0)
    assert row["N_m"] == 2 and row["d0"] == 9
    assert row["bound"] == pytest.approx(2.900, abs=1e-3)
    assert list(row) == list(COLUMNS)


def test_bad_cell_is_named_and_no_file_left(tmp_path):
    out = tmp_path / "rows.csv"
    with pytest.raises(ExperimentError, match=r"\(bose_chowla, 4\)"):
        run_to_file(cfg(families=["bose_chowla"], primes=[4]), out)
    assert list(tmp_path.iterdir()) == []


def test_moduli_rule_per_cell():
    c = cfg(moduli="2..floor(N^{1/6})")
    # N = 7 gives floor(7^(1/6)) = 1: empty; N = 2*101^2 gives 5
    assert moduli_for(c, 7) == []
    assert moduli_for(c, 2 * 101**2) == [2, 3, 4, 5]
    assert moduli_for(c, 64) == [2]
    assert moduli_for(cfg(moduli="1..ceil(N^{1/2})"), 50) == list(range(1, 9))
    assert moduli_for(cfg(moduli="3..N^{1/2}"), 49) == [3, 4, 5, 6, 7]


def test_empty_range_cells_are_skipped_and_logged(caplog):
    with caplog.at_level(logging.INFO, logger="sidonlab.experiment"):
        rows = list(run_experiment(cfg(families=["singer", "erdos_turan"], primes=[2, 101], moduli="2..floor(N^{1/6})")))
    # singer(2): N=7 -> skipped; singer(101): N=10303 -> 2..4; erdos_turan: N=8 skipped, 20402 -> 2..5
    assert len(rows) == 3 + 4
    assert sum("skipping cell" in m for m in caplog.messages) == 2


@pytest.mark.parametrize(
    "kw",
    [
        dict(families=[]),
        dict(primes=[]),
        dict(moduli=[]),
        dict(families=["ruzsa"]),
        dict(format="xml"),
        dict(grid_factor=4),
        dict(moduli="2-5"),
        dict(moduli="2..log(N)"),
        dict(moduli=[0]),
    ],
)
def test_config_validation(kw):
    with pytest.raises(ExperimentError):
        cfg(**kw)


def test_config_load(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"families": ["singer"], "params": [2], "moduli": [2]}))
    c = ExperimentConfig.load(p)
    assert c.primes == [2]
    p.write_text(json.dumps({"families": ["singer"], "primes": [2], "moduli": [2], "colour": 1}))
    with pytest.raises(ExperimentError, match="colour"):
        ExperimentConfig.load(p)
    with pytest.raises(ExperimentError):
        ExperimentConfig.load(tmp_path / "missing.json")


def test_format_value():
    assert format_value(2.0) == "2.0"
    assert format_value(0.6896976482496431) == "0.689698"
    assert format_value(-0.1715728752538097) == "-0.171573"
    assert format_value(1234567.0) == "1.23457e+06"
    assert format_value(9) == "9"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value("singer") == "singer"


def test_csv_and_json_share_fields(tmp_path):
    rows = list(run_experiment(cfg()))
    parsed = list(csv.DictReader(io.StringIO(render(rows, "csv"))))
    assert tuple(parsed[0]) == COLUMNS
    js = json.loads(render(rows, "json"))
    assert [tuple(r) for r in js] == [COLUMNS] * len(rows)
    assert js[0]["dev_l2"] == rows[0]["dev_l2"]


def test_header_is_exact():
    text = render(list(run_experiment(cfg())), "csv")
    assert text.splitlines()[0] == "family,param,N,k,ell,m,dev_l2,dev_linf,bound,branch,ratio_l2,uniformity,N_m,d0,epsilon,dichotomy"


def test_thread_count_does_not_change_output(tmp_path, monkeypatch):
    c = cfg(families=["singer", "bose_chowla", "erdos_turan"], primes=[5, 7, 11, 13], moduli="2..6", check_f=True)
    monkeypatch.setenv("SIDONLAB_THREADS", "1")
    a = run_to_file(c, tmp_path / "a.csv").read_bytes()
    monkeypatch.setenv("SIDONLAB_THREADS", "4")
    b = run_to_file(c, tmp_path / "b.csv").read_bytes()
    assert a == b
