import pytest

from src.settings import LabSettings


def test_defaults():
    settings = LabSettings()
    assert (settings.M, settings.L) == (256, 128)
    assert settings.fp_tol == 1e-6
    assert settings.out_dir == "out"
    assert settings.grid().M == 256


def test_from_env(monkeypatch):
    monkeypatch.setenv("BERNOULLI_LAB_M", "64")
    monkeypatch.setenv("BERNOULLI_LAB_NEWTON_TOL", "1e-10")
    monkeypatch.setenv("BERNOULLI_LAB_OUT", "/tmp/lab")
    monkeypatch.setenv("BERNOULLI_LAB_L", "")
    settings = LabSettings.from_env()
    assert settings.M == 64
    assert settings.newton_tol == 1e-10
    assert settings.out_dir == "/tmp/lab"
    assert settings.L == 128


def test_from_env_rejects_garbage(monkeypatch):
    monkeypatch.setenv("BERNOULLI_LAB_M", "many")
    with pytest.raises(ValueError, match="BERNOULLI_LAB_M"):
        LabSettings.from_env()


def test_overrides():
    settings = LabSettings().with_overrides(M=32, L=None, jobs=4)
    assert settings.M == 32
    assert settings.L == 128
    assert settings.jobs == 4
    with pytest.raises(ValueError):
        LabSettings().with_overrides(colour="blue")
    with pytest.raises(ValueError):
        LabSettings().with_overrides(jobs=0)


def test_plaplace_carries_tolerances():
    params = LabSettings(M=32, L=24, newton_tol=1e-9).plaplace(3.0)
    assert params.p == 3.0
    assert params.L == 24
    assert params.grid.M == 32
    assert params.newton_tol == 1e-9


def test_invalid_settings():
    with pytest.raises(ValueError):
        LabSettings(step0=0.1, step_floor=0.2)
    with pytest.raises(ValueError):
        LabSettings(fp_tol=0.0)
    with pytest.raises(ValueError):
        LabSettings(bracket_pad=0.9)


def test_to_dict_round_trips():
    settings = LabSettings(M=64)
    assert LabSettings(**settings.to_dict()) == settings
