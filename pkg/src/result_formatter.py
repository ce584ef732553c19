"""
Canonical JSON and TSV rendering of command results.

JSON documents are dumped with sorted keys, two-space indentation, floats
rounded to six decimals and a trailing newline, so parsing a document and
rendering it again gives the same bytes.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar, Union

import pandas as pd
from pydantic import BaseModel

logger = logging.getLogger(__name__)

FLOAT_DIGITS = 6

M = TypeVar('M', bound=BaseModel)


class ResultFormatter:
    """Formatter turning result models into stable text."""

    @staticmethod
    def round_floats(value: Any) -> Any:
        """Recursively round every float in a JSON-like structure."""
        if isinstance(value, float):
            return round(value, FLOAT_DIGITS)
        if isinstance(value, dict):
            return {key: ResultFormatter.round_floats(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [ResultFormatter.round_floats(item) for item in value]
        return value

    @staticmethod
    def to_json(document: Union[BaseModel, Dict[str, Any]]) -> str:
        """
        Render a document canonically.

        Args:
            document: Pydantic model (dumped without None fields) or plain dict

        Returns:
            JSON text ending in a newline
        """
        data = document.model_dump(exclude_none=True) if isinstance(document, BaseModel) else document
        return json.dumps(ResultFormatter.round_floats(data), sort_keys=True, indent=2,
                          ensure_ascii=False) + "\n"

    @staticmethod
    def from_json(text: str, model: Type[M]) -> M:
        return model.model_validate_json(text)

    @staticmethod
    def to_tsv(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
        """Tab-separated table with a header row and six-decimal floats."""
        frame = pd.DataFrame(rows, columns=columns)
        return frame.to_csv(sep='\t', index=False, float_format=f'%.{FLOAT_DIGITS}f', na_rep='nan')

    @staticmethod
    def emit(text: str, out: Optional[Union[str, Path]] = None):
        """Write to ``out`` when given, otherwise to stdout."""
        if out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        Path(out).write_text(text, encoding='utf-8')
        logger.info(f"✓ Wrote {out}")
