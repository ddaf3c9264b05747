from datetime import datetime, timezone
from fractions import Fraction as F

import pytest

from spectile.config import Defaults, load_config
from spectile.db import init_db, make_engine, make_session_factory, normalize_url
from spectile.models import AnalysisRun, RunOutcome

ENV_NAMES = [
    "SPECTILE_TOLERANCE_ZERO",
    "SPECTILE_TOLERANCE_COMPLETENESS",
    "SPECTILE_GRID_SPACING",
    "SPECTILE_WINDOW_RADIUS",
    "SPECTILE_POINT_CAP",
    "SPECTILE_THREADS",
    "SPECTILE_DATABASE_URL",
    "SPECTILE_LOG_LEVEL",
]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    cfg = load_config()
    assert cfg.tolerance_zero == Defaults.TOLERANCE_ZERO
    assert cfg.grid_spacing == F(1, 64)
    assert cfg.window_radius == Defaults.WINDOW_RADIUS
    assert cfg.database_url is None
    assert cfg.log_level == "INFO"
    assert cfg.header()["grid_spacing"] == "1/64"


def test_environment_is_read(monkeypatch):
    monkeypatch.setenv("SPECTILE_TOLERANCE_ZERO", "1e-7")
    monkeypatch.setenv("SPECTILE_GRID_SPACING", "1/128")
    monkeypatch.setenv("SPECTILE_THREADS", " 2 ")
    monkeypatch.setenv("SPECTILE_LOG_LEVEL", "debug")
    cfg = load_config()
    assert cfg.tolerance_zero == 1e-7
    assert cfg.grid_spacing == F(1, 128)
    assert cfg.threads == 2
    assert cfg.log_level == "DEBUG"


def test_overrides_win_over_environment(monkeypatch):
    monkeypatch.setenv("SPECTILE_WINDOW_RADIUS", "12")
    cfg = load_config(window_radius=5.0, grid_spacing="1/8", threads=None)
    assert cfg.window_radius == 5.0
    assert cfg.grid_spacing == F(1, 8)
    assert cfg.threads == Defaults.THREADS


@pytest.mark.parametrize(
    "name, value",
    [
        ("SPECTILE_TOLERANCE_ZERO", "tiny"),
        ("SPECTILE_TOLERANCE_ZERO", "0"),
        ("SPECTILE_TOLERANCE_COMPLETENESS", "-1e-6"),
        ("SPECTILE_GRID_SPACING", "1/0"),
        ("SPECTILE_GRID_SPACING", "-1/64"),
        ("SPECTILE_WINDOW_RADIUS", "0"),
        ("SPECTILE_POINT_CAP", "many"),
        ("SPECTILE_THREADS", "0"),
        ("SPECTILE_LOG_LEVEL", "chatty"),
    ],
)
def test_invalid_settings_raise(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(RuntimeError) as info:
        load_config()
    assert name in str(info.value)


def test_bad_override_raises():
    with pytest.raises(RuntimeError):
        load_config(grid_spacing="fine")


def test_normalize_url():
    assert normalize_url("postgres://u:p@host/db") == "postgresql://u:p@host/db"
    assert normalize_url("sqlite:///runs.db") == "sqlite:///runs.db"


def test_ledger_round_trip(tmp_path):
    engine = make_engine(f"sqlite:///{tmp_path / 'runs.db'}")
    init_db(engine)
    Session = make_session_factory(engine)
    with Session() as session:
        session.add(
            AnalysisRun(
                command="certify",
                body_digest="ab" * 32,
                outcome=RunOutcome.Certified,
                exit_code=0,
                report_json="{}",
                created_at=datetime(2024, 1, 1, tzinfo=timezone.utc),
            )
        )
        session.commit()
    with Session() as session:
        (run,) = session.query(AnalysisRun).all()
    assert run.outcome is RunOutcome.Certified
    assert run.command == "certify"
