"""
Claim Check Service

This service runs the verification oracles for one claim instance,
turns the outcome into a verdict report and stores it in the run ledger.
"""

import json
import logging
import time
from typing import Any, Callable, Dict, Optional, Tuple

from ..core.base import LocalBase
from ..core.database import Database
from ..core.errors import AlgebraError, OracleTimeout, UsageError
from ..core.models import ClaimCheck, Verdict
from ..core.schema_loader import load_artifact_file
from .groebner import MonomialOrder
from .oracles import cell_irreducibility, chain_audit, localization_iso_verify, regular_sequence_check
from .presentations import (
    build_presentation,
    grading_check,
    select_localization_data,
    stabilization_index,
    suslin_presentation,
    universal_map,
)
from .reduction_service import ReductionService
from .rows import ReductionResult, RowBundle

logger = logging.getLogger(__name__)

CLAIMS = ("regseq", "irreducible", "loc-iso", "grading", "suslin-grading", "universal-map", "chain-audit")


def _require(instance: Dict[str, Any], *keys: str) -> Tuple[Any, ...]:
    missing = [key for key in keys if instance.get(key) is None]
    if missing:
        raise UsageError(f"instance is missing {', '.join(missing)}")
    return tuple(instance[key] for key in keys)


def _base(instance: Dict[str, Any]) -> LocalBase:
    return LocalBase.from_name(instance.get("base") or "Q")


class CheckService:
    """Service for running claim checks"""

    def __init__(self, db: Optional[Database] = None, config: Optional[Dict] = None):
        """
        Initialize check service

        Args:
            db: Database instance for the run ledger, or None to skip recording
            config: full application config (the "oracle" and "reduction" sections are used)
        """
        self.db = db
        config = config or {}
        oracle = config.get("oracle", {})
        self.pair_budget = int(oracle.get("pair_budget", 200_000))
        self.hilbert_degree = int(oracle.get("hilbert_degree", 3))
        self.order = MonomialOrder.from_name(oracle.get("order", "degrevlex"))
        self.reduction = ReductionService(config.get("reduction"))
        self.handlers: Dict[str, Callable[[Dict[str, Any]], Tuple[bool, str, Any]]] = {
            "regseq": self._check_regseq,
            "irreducible": self._check_irreducible,
            "loc-iso": self._check_loc_iso,
            "grading": self._check_grading,
            "suslin-grading": self._check_suslin_grading,
            "universal-map": self._check_universal_map,
            "chain-audit": self._check_chain_audit,
        }

    # ── claims ────────────────────────────────────────────────────────────

    def _check_regseq(self, instance):
        r, k, n = _require(instance, "r", "k", "n")
        method = instance.get("method") or "hilbert"
        degree = int(instance.get("degree") or self.hilbert_degree)
        report = regular_sequence_check(r, k, n, _base(instance), method, degree, self.pair_budget, self.order)
        return report.passed, method, report.to_dict()

    def _check_irreducible(self, instance):
        r, k, n, ell, i = _require(instance, "r", "k", "n", "l", "i")
        report = cell_irreducibility(r, k, n, ell, i, _base(instance))
        return report.passed, "criterion", report.to_dict()

    def _check_loc_iso(self, instance):
        r, k, n, ell, i = _require(instance, "r", "k", "n", "l", "i")
        data = select_localization_data(r, k, n, ell, i, _base(instance))
        witness = localization_iso_verify(data, cross_check=bool(instance.get("cross_check")), pair_budget=self.pair_budget)
        return witness.passed, "cofactors", witness.to_dict()

    def _check_grading(self, instance):
        r, k, n = _require(instance, "r", "k", "n")
        report = grading_check(build_presentation(r, k, n, _base(instance)))
        return report.passed, "exact", report.to_dict()

    def _check_suslin_grading(self, instance):
        r, k, n = _require(instance, "r", "k", "n")
        report = grading_check(suslin_presentation(r, k, n))
        return report.passed, "exact", report.to_dict()

    def _check_universal_map(self, instance):
        (path,) = _require(instance, "in")
        artifact = load_artifact_file(path)
        if isinstance(artifact, RowBundle):
            artifact = self.reduction.reduce(artifact, instance.get("precision"))
        if not isinstance(artifact, ReductionResult):
            raise UsageError("universal-map needs a RowBundle or ReductionResult artifact")
        artifact.verify()
        universal = universal_map(artifact.weierstrass_row, artifact.certificate.cofactors)
        witness = universal.to_dict()
        witness["stabilization_index"] = stabilization_index(universal)
        return True, "exact", witness

    def _check_chain_audit(self, instance):
        r, k, n = _require(instance, "r", "k", "n")
        report = chain_audit(r, k, n, _base(instance), self.pair_budget)
        return report.passed, "grid", report.to_dict()

    # ── running ───────────────────────────────────────────────────────────

    def run(self, claim: str, instance: Dict[str, Any]) -> Dict[str, Any]:
        """
        Run one claim check

        Args:
            claim: one of CLAIMS
            instance: instance parameters (r, k, n, l, i, base, method, degree, in)

        Returns:
            Report dict {claim, instance, method, verdict, witness, wall_time}

        Raises:
            UsageError: for unknown claims or incomplete instances
        """
        if claim not in self.handlers:
            raise UsageError(f"unknown claim {claim!r}; expected one of {', '.join(CLAIMS)}")

        started = time.perf_counter()
        method = instance.get("method")
        try:
            passed, method, witness = self.handlers[claim](instance)
            verdict = Verdict.PASS if passed else Verdict.FAIL
            error_type = None
        except UsageError:
            raise
        except OracleTimeout as e:
            logger.warning(f"{claim} timed out after {e.pairs} pairs")
            verdict, witness, error_type = Verdict.TIMEOUT, {"error": str(e), "pairs": e.pairs}, type(e).__name__
        except AlgebraError as e:
            logger.info(f"{claim} failed: {type(e).__name__}: {e}")
            verdict, witness, error_type = Verdict.FAIL, {"error": str(e), "type": type(e).__name__}, type(e).__name__
        wall_time = round(time.perf_counter() - started, 3)

        report = {
            "schema": "v1/Report",
            "claim": claim,
            "instance": {key: value for key, value in sorted(instance.items()) if value is not None},
            "method": method,
            "verdict": verdict.value,
            "witness": witness,
            "wall_time": wall_time,
        }
        logger.info(f"Check {claim} {report['instance']}: {verdict.value} in {wall_time}s")
        self.record(report, error_type)
        return report

    def record(self, report: Dict[str, Any], error_type: Optional[str] = None,
               run_id: Optional[int] = None) -> Optional[ClaimCheck]:
        """Save a ClaimCheck row for a report; ledger failures are logged, not raised."""
        if self.db is None:
            return None
        try:
            with self.db.get_session() as session:
                check = ClaimCheck(
                    run_id=run_id,
                    claim=report["claim"],
                    instance=json.dumps(report["instance"], sort_keys=True),
                    method=report["method"],
                    verdict=Verdict(report["verdict"]),
                    witness=json.dumps(report["witness"], sort_keys=True, default=str),
                    error_type=error_type,
                    wall_time=report["wall_time"],
                )
                session.add(check)
                session.flush()
                return check
        except Exception as e:
            logger.error(f"Error recording {report['claim']} check in the ledger: {e}", exc_info=True)
            return None
