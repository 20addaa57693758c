import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csdict.hashcore import HashFunctionId  # noqa: E402
from csdict.tpchgen import GenConfig, dump_tbl, generate, generate_rows  # noqa: E402

_criteria = {}


def pytest_runtest_logreport(report):
    marker = _criteria.get(report.nodeid)
    if marker is None:
        return
    outcome = marker.setdefault("outcome", "PASS")
    if report.failed:
        marker["outcome"] = "FAIL"
    elif report.skipped and outcome == "PASS" and report.when == "setup":
        marker["outcome"] = "SKIP"


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = {"n": m.args[0], "title": m.args[1]}


def pytest_terminal_summary(terminalreporter):
    ran = [c for c in _criteria.values() if "outcome" in c]
    if not ran:
        return
    merged = {}
    for c in ran:
        m = merged.setdefault(c["n"], {"titles": [], "outcomes": set()})
        if c["title"] not in m["titles"]:
            m["titles"].append(c["title"])
        m["outcomes"].add(c["outcome"])
    terminalreporter.section("acceptance criteria")
    for n in sorted(merged):
        m = merged[n]
        outcome = next(o for o in ("FAIL", "SKIP", "PASS") if o in m["outcomes"])
        terminalreporter.write_line(f"criterion {n}: {outcome}  {'; '.join(m['titles'])}")


@pytest.fixture(params=list(HashFunctionId), ids=lambda f: f.value)
def hash_fn(request):
    return request.param


@pytest.fixture(scope="session")
def rows100():
    return generate_rows(GenConfig(seed=1, scale_rows=100))


@pytest.fixture(scope="session")
def db100():
    return generate(GenConfig(seed=1, scale_rows=100))


@pytest.fixture(scope="session")
def small_db():
    return generate(GenConfig(seed=7, scale_rows=8))


@pytest.fixture(scope="session")
def data100(tmp_path_factory, db100):
    d = tmp_path_factory.mktemp("tbl100")
    dump_tbl(db100, d)
    return d


@pytest.fixture(scope="session")
def small_data(tmp_path_factory, small_db):
    d = tmp_path_factory.mktemp("tbl8")
    dump_tbl(small_db, d)
    return d
