import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion with a one-line verdict")


_VERDICTS: dict = {}


def pytest_runtest_logreport(report):
    # setup time counts too: module fixtures do the heavy lifting for some criteria
    marker = dict(report.user_properties).get("criterion")
    if marker is None or report.when == "teardown":
        return
    verdict, seconds = _VERDICTS.get(marker, ("PASS", 0.0))
    if report.failed or (report.when == "call" and not report.passed):
        verdict = "FAIL"
    _VERDICTS[marker] = (verdict, seconds + report.duration)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), (verdict, seconds) in sorted(_VERDICTS.items()):
        terminalreporter.write_line(f"criterion {number} {verdict} ({seconds:.1f} s): {title}")
