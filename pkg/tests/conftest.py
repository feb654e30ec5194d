import pytest

from sawatom.response import default_model


@pytest.fixture(scope="session")
def gaas():
    """GaAs n=10 with gate, atom locked to the IDT."""
    return default_model("GaAs")


@pytest.fixture(scope="session")
def linbo3():
    return default_model("LiNbO3")


@pytest.fixture(scope="session")
def gaas_nogate():
    return default_model("GaAs", C_g=0.0)


@pytest.fixture(scope="session")
def linbo3_nogate():
    return default_model("LiNbO3", C_g=0.0)
