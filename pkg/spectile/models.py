import enum
from datetime import datetime

from sqlalchemy import DateTime, Enum, Index, Integer, String, Text
from sqlalchemy.orm import Mapped, mapped_column

from spectile.db import Base


class RunOutcome(str, enum.Enum):
    Verified = "Verified"
    Certified = "Certified"
    Refuted = "Refuted"
    Refused = "Refused"
    Computed = "Computed"
    Failed = "Failed"


class AnalysisRun(Base):
    __tablename__ = "analysis_runs"
    __table_args__ = (Index("ix_analysis_runs_command_created", "command", "created_at"),)

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    command: Mapped[str] = mapped_column(String(32), nullable=False)
    body_digest: Mapped[str | None] = mapped_column(String(64), nullable=True, index=True)
    outcome: Mapped[RunOutcome] = mapped_column(Enum(RunOutcome), nullable=False)
    exit_code: Mapped[int] = mapped_column(Integer, nullable=False)
    report_json: Mapped[str] = mapped_column(Text, nullable=False)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), nullable=False)
