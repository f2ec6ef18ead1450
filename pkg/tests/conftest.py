import hypothesis
import numpy as np
import pytest

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def unit_params():
    from wva_probe.spectral import SpectralParams

    return SpectralParams(e0=0.0, delta_e=0.1, gamma=1.0)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""
    lines = request.config._acceptance_lines

    def report(number, title, ok, detail, runtime, limit):
        timed = runtime < limit
        status = "PASS" if (ok and timed) else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title} | {detail} | runtime {runtime:.2f}s (limit {limit:g}s)"
        lines.append((number, line))
        print(line)
        assert ok, line
        assert timed, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)
