import json
import logging
from importlib import import_module
from pathlib import Path
from typing import Any, Dict, Union

from .errors import SchemaError

logger = logging.getLogger(__name__)

# schema tag -> (module, class) of the loader; imported lazily so the core
# package stays independent of the services layer
LOADERS = {
    "v1/RowBundle": ("..services.rows", "RowBundle"),
    "v1/ReductionResult": ("..services.rows", "ReductionResult"),
    "v1/IdealRow": ("..services.rows", "IdealRow"),
    "v1/Presentation": ("..services.presentations", "RingPresentation"),
}


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise SchemaError(f"cannot read artifact {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}") from e


def dumps_canonical(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_canonical(data), encoding="utf-8")
    return path


def load_artifact(data: Dict[str, Any], expected: str = None) -> Any:
    """Dispatch an artifact dict to the from_dict of its schema tag."""
    tag = data.get("schema")
    if expected is not None and tag != f"v1/{expected}":
        raise SchemaError(f"expected schema v1/{expected}, got {tag!r}")
    if tag not in LOADERS:
        raise SchemaError(f"unknown artifact schema {tag!r}")
    module, name = LOADERS[tag]
    loader = getattr(import_module(module, package=__package__), name)
    logger.debug("Loading %s artifact", tag)
    return loader.from_dict(data)


def load_artifact_file(path: Union[str, Path], expected: str = None) -> Any:
    """Read a JSON artifact and return the typed object."""
    return load_artifact(read_json(path), expected)
