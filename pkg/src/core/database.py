"""
Database Connection and Session Management

This module provides the run-ledger connection, session management,
and small query helpers.
"""

import logging
from contextlib import contextmanager
from typing import Generator, Optional

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, Session
from sqlalchemy.pool import StaticPool

from .models import Base, ClaimCheck, RunRecord, Verdict

logger = logging.getLogger(__name__)


class Database:
    """Run-ledger connection manager"""

    def __init__(self, database_url: str = "sqlite:///laurent_rows.db", echo: bool = False):
        """
        Initialize database connection

        Args:
            database_url: SQLAlchemy database URL
            echo: Whether to echo SQL statements (for debugging)
        """
        self.database_url = database_url
        self.echo = echo

        if database_url.startswith("sqlite"):
            self.engine = create_engine(
                database_url,
                echo=echo,
                connect_args={"check_same_thread": False},
                poolclass=StaticPool
            )
        else:
            self.engine = create_engine(
                database_url,
                echo=echo,
                pool_pre_ping=True
            )

        # expire_on_commit=False keeps attributes readable after the session closes
        self.SessionLocal = sessionmaker(
            autocommit=False,
            autoflush=False,
            bind=self.engine,
            expire_on_commit=False
        )

        logger.info(f"Database initialized: {database_url}")

    def create_tables(self):
        """Create all ledger tables"""
        logger.info("Creating ledger tables...")
        Base.metadata.create_all(bind=self.engine)
        logger.info("Ledger tables created successfully")

    def drop_tables(self):
        """Drop all ledger tables (USE WITH CAUTION!)"""
        logger.warning("Dropping all ledger tables...")
        Base.metadata.drop_all(bind=self.engine)

    @contextmanager
    def get_session(self) -> Generator[Session, None, None]:
        """
        Context manager for database sessions

        Usage:
            with db.get_session() as session:
                run = session.query(RunRecord).first()
        """
        session = self.SessionLocal()
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Database session error: {e}")
            raise
        finally:
            session.close()

    def get_stats(self) -> dict:
        """Get ledger statistics"""
        with self.get_session() as session:
            stats = {
                "runs": session.query(RunRecord).count(),
                "checks": session.query(ClaimCheck).count(),
            }
            for verdict in Verdict:
                stats[f"checks_{verdict.value}"] = session.query(ClaimCheck).filter(
                    ClaimCheck.verdict == verdict
                ).count()
            return stats


# Global database instance
db: Optional[Database] = None


def init_database(database_url: str = "sqlite:///laurent_rows.db", echo: bool = False) -> Database:
    """
    Initialize global database instance and its tables

    Args:
        database_url: SQLAlchemy database URL
        echo: Whether to echo SQL statements

    Returns:
        Database instance
    """
    global db
    db = Database(database_url, echo)
    db.create_tables()
    return db


def get_db() -> Database:
    """
    Get global database instance

    Raises:
        RuntimeError: If database not initialized
    """
    if db is None:
        raise RuntimeError("Database not initialized. Call init_database() first.")
    return db
