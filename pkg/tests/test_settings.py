import pytest

from stratscat.settings import Settings, solver_settings


def test_defaults():
    settings = Settings()
    assert settings.RTOL == 1e-10
    assert settings.ATOL == 1e-12
    assert settings.N_SLICES == 1000
    assert settings.PASS_TOLERANCE == 1e-5


def test_override_restores():
    with solver_settings.override(N_SLICES=10, RTOL=1e-6):
        assert solver_settings.N_SLICES == 10
        assert solver_settings.RTOL == 1e-6
    assert solver_settings.N_SLICES == 1000
    assert solver_settings.RTOL == 1e-10


def test_override_nested():
    with solver_settings.override(N_SLICES=10):
        with solver_settings.override(N_SLICES=20):
            assert solver_settings.N_SLICES == 20
        assert solver_settings.N_SLICES == 10


def test_override_restores_after_error():
    with pytest.raises(RuntimeError):
        with solver_settings.override(BLOWUP_Q=5.0):
            raise RuntimeError()
    assert solver_settings.BLOWUP_Q == 1e8


def test_override_unknown():
    with pytest.raises(KeyError) as excinfo:
        with solver_settings.override(NOT_A_SETTING=1):
            pass
    assert "NOT_A_SETTING" in str(excinfo.value)
