import io
import json

import numpy as np
import pytest
from django.core.management.base import CommandError

from common.commands import RunConfig, parse_grid
from common.exporters import dump_json, fmt, write_csv
from common.parallel import parallel_map, row_chunks, worker_count


def test_fmt_uses_twelve_significant_digits():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(-0.0) == "0"
    assert fmt(np.float64(2.5)) == "2.5"
    assert fmt(7) == "7"
    assert fmt(True) == "true"
    assert fmt(float("nan")) == "nan"


def test_write_csv_formats_rows_and_counts_them():
    stream = io.StringIO()
    count = write_csv(stream, ["a", "b"], [(1, 0.1 + 0.2), (2, "R1")])
    assert count == 2
    assert stream.getvalue() == "a,b\n1,0.3\n2,R1\n"


def test_dump_json_is_sorted_and_rounded():
    payload = json.loads(dump_json({"b": 1 / 3, "a": [np.float64(2.0), np.bool_(True)]}))
    assert payload == {"a": [2.0, True], "b": 0.333333333333}
    assert dump_json({"b": 1, "a": 2}).index('"a"') < dump_json({"b": 1, "a": 2}).index('"b"')


def test_parallel_map_keeps_input_order():
    assert parallel_map(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]


def test_row_chunks_cover_every_row_once():
    chunks = row_chunks(10, workers=3)
    assert chunks == [range(0, 4), range(4, 8), range(8, 10)]


def test_worker_count_reads_the_thread_cap(settings):
    settings.LORENTZ_MOBIUS_THREADS = "3"
    assert worker_count() == 3
    settings.LORENTZ_MOBIUS_THREADS = "many"
    assert worker_count() >= 1


def test_parse_grid_accepts_square_and_rectangular_grids():
    assert parse_grid("64x32") == (64, 32)
    assert parse_grid("64") == (64, 64)
    with pytest.raises(CommandError) as e:
        parse_grid("1x5")
    assert e.value.returncode == 1


def test_run_config_rejects_nonpositive_tolerance():
    with pytest.raises(CommandError) as e:
        RunConfig(command="lines", tol=0.0)
    assert e.value.returncode == 1
    assert "--tol" in str(e.value)
