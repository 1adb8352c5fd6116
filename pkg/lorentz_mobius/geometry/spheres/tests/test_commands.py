import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError


def _run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def test_sphere_check_reports_a_nonconvex_image():
    report = json.loads(_run("sphere_check", "--center=2,0,0", "--radius=1", "--grid=32x32"))
    assert report["is_closed"] is True
    assert report["is_ovaloid"] is False
    assert report["parabolic_empty"] is False
    assert report["dist_to_lc"] == pytest.approx(2**0.5, abs=1e-11)
    assert report["witnesses"]


def test_sphere_check_reports_an_ovaloid():
    report = json.loads(_run("sphere_check", "--center=4,0,0", "--radius=1", "--grid=32x32"))
    assert report["is_ovaloid"] is True
    assert report["parabolic_empty"] is True
    assert report["f_roots"] == []


def test_sphere_check_output_is_deterministic():
    args = ("sphere_check", "--center=2,0,0", "--radius=1", "--grid=32x32")
    assert _run(*args) == _run(*args)


@pytest.mark.parametrize(
    "args",
    [
        ("--center=1,2", "--radius=1"),
        ("--center=a,b,c", "--radius=1"),
        ("--center=2,0,0", "--radius=0"),
        ("--center=2,0,0", "--radius=1", "--grid=1x4"),
    ],
)
def test_sphere_check_usage_errors(args):
    with pytest.raises(CommandError) as e:
        _run("sphere_check", *args)
    assert e.value.returncode == 1


def test_ovaloid_search_on_a_sphere(tmp_path):
    out = tmp_path / "search.json"
    call_command("ovaloid_search", "--surface=sphere:0,0,0,1", "--grid=48", f"--out={out}")
    report = json.loads(out.read_text())
    assert report["verified"] is True
    assert report["R"] >= 2
    assert report["translation"][0] >= 2


def test_ovaloid_search_rejects_a_flat_surface():
    with pytest.raises(CommandError) as e:
        _run("ovaloid_search", "--surface=plane:xy", "--grid=16")
    assert e.value.returncode == 2


def test_ovaloid_search_needs_enough_samples():
    with pytest.raises(CommandError) as e:
        _run("ovaloid_search", "--surface=sphere:0,0,0,1", "--sample-n=4")
    assert e.value.returncode == 1
