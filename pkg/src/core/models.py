"""
Database Models for the Run Ledger

This module defines the SQLAlchemy models for:
- RunRecords (one row per CLI run, mirroring its manifest)
- ClaimChecks (one row per oracle verdict)
"""

import enum
from datetime import datetime

from sqlalchemy import Column, DateTime, Float, ForeignKey, Index, Integer, String, Text, Enum as SQLEnum
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class Verdict(str, enum.Enum):
    """Outcome of a claim check"""
    PASS = "pass"
    FAIL = "fail"
    TIMEOUT = "timeout"


class RunRecord(Base):
    """One CLI invocation"""
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True, index=True)
    command = Column(String(50), nullable=False, index=True)
    seed = Column(Integer, nullable=True)

    # JSON blobs, serialized with sorted keys
    versions = Column(Text, nullable=False, default="{}")
    input_digests = Column(Text, nullable=False, default="{}")
    outputs = Column(Text, nullable=False, default="[]")

    exit_code = Column(Integer, default=0, nullable=False)
    wall_time = Column(Float, nullable=True)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False)

    checks = relationship("ClaimCheck", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<RunRecord(id={self.id}, command={self.command}, exit_code={self.exit_code})>"


class ClaimCheck(Base):
    """Verdict of one oracle run"""
    __tablename__ = "claim_checks"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("runs.id", ondelete="CASCADE"), nullable=True)

    claim = Column(String(50), nullable=False)
    instance = Column(Text, nullable=False)
    method = Column(String(50), nullable=True)
    verdict = Column(SQLEnum(Verdict), nullable=False)
    witness = Column(Text, nullable=True)
    error_type = Column(String(100), nullable=True)

    wall_time = Column(Float, nullable=True)
    checked_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    run = relationship("RunRecord", back_populates="checks")

    __table_args__ = (
        Index("idx_claim_verdict", "claim", "verdict"),
    )

    def __repr__(self):
        return f"<ClaimCheck(id={self.id}, claim={self.claim}, verdict={self.verdict})>"
