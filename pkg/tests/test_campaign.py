import gzip
from fractions import Fraction

import pytest

from shady.campaign import certificate_path, check_files, grid_coverage, run_campaign
from shady.farkas import BoundFails, build_grid
from shady.polytope import builtin

A84 = Fraction(84, 83)


def read(path):
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as fh:
        return fh.read()


@pytest.fixture(scope="module")
def J():
    return builtin("J")


@pytest.fixture(scope="module")
def reference(J, tmp_path_factory):
    out = tmp_path_factory.mktemp("ref")
    s = run_campaign(J, 3, A84, out, compress=False)
    return s, [read(p) for p in s.files]


def test_counts_and_names(reference):
    s, texts = reference
    assert s.counts == [49, 49, 49] and s.total == 147
    assert [p.name for p in s.files] == [f"farkas-certificates-J-3-84_83-{i}.csv" for i in (1, 2, 3)]
    assert all(t.count("\n") == 49 for t in texts)


def test_all_lines_verify(J, reference):
    s, _ = reference
    rep = check_files(J, s.files, A84)
    assert rep.ok and rep.checked == 147


def test_covers_grid(reference):
    s, _ = reference
    assert grid_coverage(s.files) == set(build_grid(3).points)


def test_parallel_output_identical(J, reference, tmp_path):
    s = run_campaign(J, 3, A84, tmp_path, jobs=2, compress=False)
    assert [read(p) for p in s.files] == reference[1]


def test_resume_after_truncation(J, reference, tmp_path):
    s = run_campaign(J, 3, A84, tmp_path, compress=True)
    p = s.files[1]
    text = read(p)
    cut = text[: len(text) // 2]   # mid-line truncation
    with gzip.open(p, "wt") as fh:
        fh.write(cut)
    s.files[2].unlink()
    s2 = run_campaign(J, 3, A84, tmp_path, compress=True)
    assert s2.resumed == 49 + cut.count("\n")
    assert [read(q) for q in s2.files] == reference[1]


def test_corrupt_line_is_reported(J, reference, tmp_path):
    text = reference[1][0].splitlines()
    text[5] = text[5].replace("//", "0//", 1)
    p = tmp_path / "bad.csv"
    p.write_text("\n".join(text) + "\n")
    rep = check_files(J, [p], A84)
    assert not rep.ok and rep.failures[0][1] == 6


def test_bound_fails_for_cube(tmp_path):
    with pytest.raises(BoundFails) as err:
        run_campaign(builtin("cube"), 2, 1, tmp_path, compress=False)
    assert err.value.lam == 1
    first = certificate_path(tmp_path, "cube", 2, 1, 0, compress=False)
    assert first.exists()


def test_cube_below_one_succeeds(tmp_path):
    cube = builtin("cube")
    s = run_campaign(cube, 2, Fraction(1, 2), tmp_path, compress=False)
    assert s.total == 75 and check_files(cube, s.files, Fraction(1, 2)).ok
