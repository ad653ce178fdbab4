"""Reading instance, coloring and transcript files; writing JSON documents."""

import json
import logging
import sys
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ValidationError

from batchcolor.core.errors import BatchColorError, InstanceFormatError
from batchcolor.core.graph import BatchedGraphInstance
from batchcolor.models.schemas import ColoringFile, ErrorDocument, InstanceFile, Transcript

logger = logging.getLogger(__name__)


def _read(path: Union[str, Path]) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InstanceFormatError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{path} is not JSON: {e}")


def load_instance(path: Union[str, Path]) -> BatchedGraphInstance:
    """Instance file, or a duel transcript whose batches are replayed."""
    data = _read(path)
    try:
        if isinstance(data, dict) and "adversary" in data and "instance" in data:
            logger.info(f"replaying the {data['adversary']} transcript in {path}")
            return Transcript.model_validate(data).instance.to_instance()
        return InstanceFile.model_validate(data).to_instance()
    except ValidationError as e:
        raise InstanceFormatError(f"{path}: {e.error_count()} format errors", {"errors": e.errors()[:10]})


def load_coloring(path: Union[str, Path]) -> ColoringFile:
    try:
        return ColoringFile.model_validate(_read(path))
    except ValidationError as e:
        raise InstanceFormatError(f"{path}: {e.error_count()} format errors", {"errors": e.errors()[:10]})


def write_document(doc: BaseModel, out: Optional[Union[str, Path]] = None) -> None:
    text = doc.model_dump_json(indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text + "\n")


def error_document(e: BatchColorError) -> ErrorDocument:
    return ErrorDocument(error=str(e), type=type(e).__name__, exit_code=e.exit_code,
                         details=json.loads(json.dumps(e.details, default=str)))
