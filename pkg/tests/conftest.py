import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion name -> short description, in report order
CRITERIA = {
    "listing_fidelity": "Paris fixture yields the thematic triples, axiom-conformant structure and WKT prefix (<1 s)",
    "round_trip": "reconstruct(build(g)) == g for >=500 random geometries (<10 s)",
    "wkt_coherence": "asWKT literal agrees with structure and geom:crs for every feature (0 mismatches)",
    "projection_accuracy": "LCC forward within 1e-3 m of reference, round trip within 1e-9 deg (<1 s)",
    "query_oracle": "bbox query equals vertex-in-box oracle on >=50 features, >=20 boxes (<5 s)",
    "determinism": "two `convert --sorted` runs are byte-identical",
    "shapefile_decoding": "authored bytes decode exactly; .prj default; magic and truncation errors",
    "geofla_integration": "optional: real GEOFLA departments, box (1,3,42,44) gives the nine names",
}

_outcomes: dict[str, list[str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    report = outcome.get_result()
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(marker.args[0], []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, text in CRITERIA.items():
        results = _outcomes.get(name)
        if not results:
            continue
        if "failed" in results:
            status = "FAIL"
        elif all(r == "skipped" for r in results):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"{status}  {name}: {text}")
