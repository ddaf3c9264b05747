from contextlib import contextmanager
from typing import Iterator

from sqlalchemy import create_engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker


class Base(DeclarativeBase):
    pass


def normalize_url(url: str) -> str:
    # Hosted Postgres often hands out postgres:// which SQLAlchemy no longer accepts.
    if url.startswith("postgres://"):
        return url.replace("postgres://", "postgresql://", 1)
    return url


def make_engine(database_url: str):
    url = normalize_url(database_url)
    if url.startswith("sqlite"):
        return create_engine(url)
    return create_engine(url, pool_pre_ping=True)


def make_session_factory(engine) -> sessionmaker[Session]:
    return sessionmaker(engine, expire_on_commit=False)


def init_db(engine) -> None:
    # models must be imported so their tables are registered on Base.metadata
    from spectile import models  # noqa: F401

    Base.metadata.create_all(engine)


@contextmanager
def open_ledger(database_url: str) -> Iterator[sessionmaker[Session]]:
    """Session factory on a fresh engine; the engine is disposed on exit."""
    engine = make_engine(database_url)
    try:
        init_db(engine)
        yield make_session_factory(engine)
    finally:
        engine.dispose()
