import pytest

from app import settings


def test_worker_count(monkeypatch):
    monkeypatch.setattr(settings, "THREADS", 0)
    assert settings.worker_count(3) == 3
    assert settings.worker_count() >= 1
    monkeypatch.setattr(settings, "THREADS", 2)
    assert settings.worker_count(8) == 2


def test_int_from_env(monkeypatch):
    monkeypatch.setenv("CRSEQ_TEST_VALUE", "12")
    assert settings._int_from_env("CRSEQ_TEST_VALUE", 3) == 12
    monkeypatch.setenv("CRSEQ_TEST_VALUE", " ")
    assert settings._int_from_env("CRSEQ_TEST_VALUE", 3) == 3
    monkeypatch.setenv("CRSEQ_TEST_VALUE", "ten")
    with pytest.raises(ValueError):
        settings._int_from_env("CRSEQ_TEST_VALUE", 3)
