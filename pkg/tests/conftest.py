import pytest

from dirtymac.channel import average_snrs
from dirtymac.config import load_config, preset_path

_criterion_lines = []


@pytest.fixture(scope="session")
def criterion_report():
    """Collector for the one-line acceptance verdicts printed after the run."""
    def record(line: str) -> None:
        _criterion_lines.append(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig2_cfg():
    return load_config(preset_path("fig2"))


@pytest.fixture(scope="session")
def fig3_cfg():
    return load_config(preset_path("fig3"))


@pytest.fixture(scope="session")
def fig3_avgs(fig3_cfg):
    return average_snrs(fig3_cfg.scenario)
