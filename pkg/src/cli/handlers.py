"""
Command Handlers

One method per CLI command. Every command that writes an artifact also
writes a RunManifest next to it and records the run in the ledger when
one is configured.
"""

import hashlib
import itertools
import json
import logging
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import sympy

from .. import __version__
from ..core.base import LocalBase
from ..core.database import Database
from ..core.errors import UsageError
from ..core.models import RunRecord, Verdict
from ..core.schema_loader import dumps_canonical, load_artifact_file, write_json
from ..services.check_service import CheckService
from ..services.completion import complete_length2
from ..services.generator import default_seed, gen_example
from ..services.presentations import build_presentation
from ..services.reduction_service import ReductionService, verify_reduction
from ..services.rows import ReductionResult, RowBundle

logger = logging.getLogger(__name__)

INSTANCE_KEYS = ("r", "k", "n", "l", "i", "base")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def versions() -> Dict[str, str]:
    return {
        "laurent-rows": __version__,
        "python": platform.python_version(),
        "sympy": sympy.__version__,
    }


@dataclass
class RunManifest:
    """Provenance of one CLI run"""
    command: str
    seed: Optional[int] = None
    arguments: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    wall_time: float = 0.0
    exit_code: int = 0

    def add_input(self, path: Path) -> None:
        self.inputs[str(path)] = sha256_file(path)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "v1/Manifest",
            "command": self.command,
            "seed": self.seed,
            "arguments": self.arguments,
            "versions": versions(),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_time": self.wall_time,
            "exit_code": self.exit_code,
        }


def parse_list(value: Any, cast=int) -> List[Any]:
    """"0,1,2" -> [0, 1, 2]; None -> [None]."""
    if value is None:
        return [None]
    if isinstance(value, (list, tuple)):
        return [cast(v) for v in value]
    try:
        return [cast(part.strip()) for part in str(value).split(",") if part.strip()]
    except ValueError as e:
        raise UsageError(f"cannot parse {value!r}: {e}") from e


def expand_instances(args) -> List[Dict[str, Any]]:
    """Cartesian product of the list-valued instance flags."""
    columns = {
        "r": parse_list(args.r),
        "k": parse_list(args.k),
        "n": parse_list(args.n),
        "l": parse_list(args.l),
        "i": parse_list(args.i),
        "base": parse_list(args.base, str),
    }
    instances = []
    for values in itertools.product(*(columns[key] for key in INSTANCE_KEYS)):
        instance = dict(zip(INSTANCE_KEYS, values))
        instance.update(
            method=args.method,
            degree=args.degree,
            cross_check=args.cross_check or None,
            precision=args.precision,
        )
        instance["in"] = str(args.input) if args.input else None
        instances.append(instance)
    return instances


def _run_claim(job) -> Dict[str, Any]:
    """Worker entry point; runs without a ledger, the parent records."""
    claim, instance, config = job
    return CheckService(None, config).run(claim, instance)


def verdict_exit_code(reports: Sequence[Dict[str, Any]]) -> int:
    verdicts = {report["verdict"] for report in reports}
    if Verdict.FAIL.value in verdicts:
        return 1
    if Verdict.TIMEOUT.value in verdicts:
        return 5
    return 0


class CliHandlers:
    """Handler class for CLI commands"""

    def __init__(self, config: Dict[str, Any], db: Optional[Database] = None):
        """
        Initialize handlers

        Args:
            config: merged application config
            db: run ledger, or None
        """
        self.config = config
        self.db = db
        self.reduction_service = ReductionService(config.get("reduction"))
        self.check_service = CheckService(db, config)

    # ── bookkeeping ───────────────────────────────────────────────────────

    def _write_artifact(self, manifest: RunManifest, out: Path, data: Dict[str, Any]) -> None:
        write_json(out, data)
        manifest.outputs.append(str(out))
        logger.info(f"Wrote {data.get('schema', 'artifact')} to {out}")

    def _finish(self, manifest: RunManifest, started: float, out: Optional[Path]) -> None:
        manifest.wall_time = round(time.perf_counter() - started, 3)
        if out is not None:
            manifest_path = out.with_suffix(".manifest.json")
            write_json(manifest_path, manifest.to_dict())
            logger.info(f"Wrote manifest to {manifest_path}")
        self.record_run(manifest)

    def record_run(self, manifest: RunManifest) -> Optional[int]:
        if self.db is None:
            return None
        try:
            with self.db.get_session() as session:
                run = RunRecord(
                    command=manifest.command,
                    seed=manifest.seed,
                    versions=json.dumps(versions(), sort_keys=True),
                    input_digests=json.dumps(manifest.inputs, sort_keys=True),
                    outputs=json.dumps(manifest.outputs),
                    exit_code=manifest.exit_code,
                    wall_time=manifest.wall_time,
                )
                session.add(run)
                session.flush()
                return run.id
        except Exception as e:
            logger.error(f"Error recording run in the ledger: {e}", exc_info=True)
            return None

    # ── commands ──────────────────────────────────────────────────────────

    def gen_row(self, args) -> int:
        """Write a seeded exactly unimodular RowBundle."""
        started = time.perf_counter()
        generator = self.config.get("generator", {})
        seed = default_seed(args.seed)
        steps = args.steps if args.steps is not None else int(generator.get("steps", 4))
        base = LocalBase.from_name(args.base)
        low, high = generator.get("degree_range", [-2, 2])
        bundle, _ = gen_example(
            args.r, base, seed, steps,
            degree_range=(int(low), int(high)),
            coefficient_bound=int(generator.get("coefficient_bound", 2)),
        )
        manifest = RunManifest("gen-row", seed, {"r": args.r, "base": base.name, "steps": steps})
        out = Path(args.out)
        self._write_artifact(manifest, out, bundle.to_dict())
        self._finish(manifest, started, out)
        return 0

    def reduce(self, args) -> int:
        """Reduce a bundle to Weierstrass form, or re-verify a stored result."""
        started = time.perf_counter()
        manifest = RunManifest("reduce", arguments={"precision": args.precision, "verify_only": args.verify_only})

        if args.verify_only:
            if not args.result:
                raise UsageError("--verify-only needs --result FILE")
            result_path = Path(args.result)
            manifest.add_input(result_path)
            result = load_artifact_file(result_path, "ReductionResult")
            if args.input:
                bundle = load_artifact_file(args.input, "RowBundle")
                manifest.add_input(Path(args.input))
                verify_reduction(bundle, result)
            else:
                result.verify()
            logger.info(f"Certificates in {result_path} re-verified")
            self._finish(manifest, started, None)
            return 0

        if not args.input or not args.out:
            raise UsageError("reduce needs --in and --out")
        in_path = Path(args.input)
        manifest.add_input(in_path)
        bundle: RowBundle = load_artifact_file(in_path, "RowBundle")
        manifest.seed = bundle.seed
        result: ReductionResult = self.reduction_service.reduce(bundle, args.precision)
        self.reduction_service.verify(bundle, result)
        out = Path(args.out)
        self._write_artifact(manifest, out, result.to_dict())
        self._finish(manifest, started, out)
        return 0

    def complete2(self, args) -> int:
        """Complete a length-2 row to a 2x2 matrix of determinant 1."""
        started = time.perf_counter()
        in_path = Path(args.input)
        manifest = RunManifest("complete2")
        manifest.add_input(in_path)
        bundle: RowBundle = load_artifact_file(in_path, "RowBundle")
        manifest.seed = bundle.seed
        matrix = complete_length2(bundle)
        data = {
            "schema": "v1/Completion",
            "base": bundle.base.name,
            "matrix": matrix.to_dict(lambda x: x.to_dict()),
            "determinant": matrix.determinant().to_dict(),
        }
        out = Path(args.out)
        self._write_artifact(manifest, out, data)
        self._finish(manifest, started, out)
        return 0

    def presentation(self, args) -> int:
        """Write the presentation of B_{r,k,n}."""
        started = time.perf_counter()
        base = LocalBase.from_name(args.base)
        presentation = build_presentation(int(args.r), int(args.k), int(args.n), base)
        manifest = RunManifest("presentation", arguments={"r": args.r, "k": args.k, "n": args.n, "base": base.name})
        out = Path(args.out)
        self._write_artifact(manifest, out, presentation.to_dict())
        self._finish(manifest, started, out)
        return 0

    def check(self, args) -> int:
        """Run claim checks; verdict JSON on stdout."""
        started = time.perf_counter()
        instances = expand_instances(args)
        manifest = RunManifest("check", arguments={"claim": args.claim, "instances": len(instances)})
        if args.input:
            manifest.add_input(Path(args.input))

        jobs = max(1, int(args.jobs or 1))
        work = [(args.claim, instance, self.config) for instance in instances]
        if jobs > 1 and len(work) > 1:
            logger.info(f"Fanning out {len(work)} instances over {jobs} workers")
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reports = list(pool.map(_run_claim, work))
        else:
            reports = [_run_claim(job) for job in work]

        manifest.exit_code = verdict_exit_code(reports)
        manifest.wall_time = round(time.perf_counter() - started, 3)
        run_id = self.record_run(manifest)
        for report in reports:
            self.check_service.record(report, run_id=run_id)

        payload = reports[0] if len(reports) == 1 else reports
        sys.stdout.write(dumps_canonical(payload))
        if args.out:
            out = Path(args.out)
            self._write_artifact(manifest, out, payload if isinstance(payload, dict) else {"schema": "v1/ReportList", "reports": payload})
            write_json(out.with_suffix(".manifest.json"), manifest.to_dict())
        return manifest.exit_code
