import socket

import pytest

from saskit.dataio import save_ascii
from saskit.models import default_qgrid, generate_dataset


@pytest.fixture
def no_network(monkeypatch):
    """Make any socket connection attempt an immediate test failure."""
    def deny(*args, **kwargs):
        raise AssertionError("network access attempted during an offline test")
    monkeypatch.setattr(socket.socket, "connect", deny)
    monkeypatch.setattr(socket, "create_connection", deny)


@pytest.fixture(scope="session")
def colloid_mirror_text():
    """Synthetic sphere data mirroring the dilute-colloid fit workflow:
    r = 578.3 A in heavy water, 2% noise."""
    ds = generate_dataset(
        "sphere",
        {"radius": 578.3, "sld": 1.0, "sld_solvent": 6.36,
         "scale": 1.0, "background": 0.001},
        default_qgrid(0.002, 0.05, 120), noise_fraction=0.02, seed=11)
    return save_ascii(ds)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {report.outcome.upper()}: {name}")
