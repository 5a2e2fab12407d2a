"""
Shared fixtures
"""
import pytest

from bouncer import BouncerSpectrum
from magnetics import WireArrayConfig
from transitions import ExcitationModel, GradientWaveform


@pytest.fixture(scope="session")
def spectrum():
    return BouncerSpectrum(n_states=4)


@pytest.fixture(scope="session")
def benchmark_array():
    return WireArrayConfig()


@pytest.fixture(scope="session")
def benchmark_excitation():
    return ExcitationModel(beta_hat=0.52, B1=0.8e-3, B0y=0.3e-3)


@pytest.fixture(scope="session")
def benchmark_waveform():
    return GradientWaveform(beta_hat=0.52, B1=0.8e-3, B0y=0.3e-3, frequency=100.0, phase=0.0)
