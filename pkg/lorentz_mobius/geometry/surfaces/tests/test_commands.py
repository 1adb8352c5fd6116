import csv
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError


def test_invert_writes_one_row_per_sample():
    out = StringIO()
    call_command("invert", "--surface=plane:xy", "--grid=4x4", stdout=out)
    rows = list(csv.DictReader(StringIO(out.getvalue())))
    assert len(rows) == 16
    first = rows[0]
    assert (first["u"], first["v"]) == ("-0.75", "-0.75")
    # (-0.75, -0.75, 0) has <p,p> = 1.125
    assert float(first["y0"]) == pytest.approx(-0.75 / 1.125)
    assert {r["region_source"] for r in rows} == {"R1"}
    assert {r["region_image"] for r in rows} == {"R1"}


def test_invert_skips_points_on_the_light_cone():
    out = StringIO()
    call_command("invert", "--surface=plane:lightlike", "--grid=4x4", stdout=out)
    rows = list(csv.DictReader(StringIO(out.getvalue())))
    # (u, v, v) has <p,p> = u², never zero at cell centers
    assert len(rows) == 16


def test_mesh_writes_an_obj_file(tmp_path):
    path = tmp_path / "plane.obj"
    out = StringIO()
    call_command("mesh", "--surface=plane:xy", "--grid=2x2", f"--out={path}", stdout=out)
    lines = path.read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 4
    assert sum(line.startswith("f ") for line in lines) == 2
    assert "4 vertices, 2 triangles" in out.getvalue()


def test_mesh_requires_an_output_path():
    with pytest.raises(CommandError):
        call_command("mesh", "--surface=plane:xy")


@pytest.mark.parametrize("surface", ["blob", "sphere:1,2", "graph:spiral"])
def test_unknown_surfaces_are_usage_errors(surface):
    with pytest.raises(CommandError) as e:
        call_command("invert", f"--surface={surface}", "--grid=4", stdout=StringIO())
    assert e.value.returncode == 1
    assert str(e.value).startswith("--surface:")
