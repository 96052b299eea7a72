"""
Plain-text portable pixmaps (PPM ``P3``) for golden frame fixtures.

Layout: magic ``P3``, width, height, max value, then ``width*height`` RGB
triples in row-major order. ``#`` starts a comment that runs to end of line.
Values are rescaled to 0..255 when the max value is not 255.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..exceptions import ContractError
from .frames import as_rgb

logger = logging.getLogger(__name__)


def _tokens(text: str) -> List[str]:
    tokens: List[str] = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    return tokens


def parse_ppm(text: str) -> np.ndarray:
    """
    Parse P3 text into a ``(height, width, 3)`` uint8 frame.

    Raises:
        ContractError: On a wrong magic, bad header or pixel count mismatch.
    """
    tokens = _tokens(text)
    if not tokens or tokens[0] != "P3":
        raise ContractError(f"Not a plain PPM (expected magic P3, found {tokens[:1]})")
    try:
        width, height, max_value = (int(t) for t in tokens[1:4])
        values = np.array([int(t) for t in tokens[4:]], dtype=np.int64)
    except ValueError as e:
        raise ContractError(f"Malformed PPM: {e}") from e

    if width < 1 or height < 1 or not 1 <= max_value <= 255:
        raise ContractError(f"Bad PPM header: {width}x{height}, max value {max_value}")
    if values.size != width * height * 3:
        raise ContractError(f"PPM has {values.size} samples, expected {width * height * 3}")
    if np.any(values < 0) or np.any(values > max_value):
        raise ContractError(f"PPM sample outside [0, {max_value}]")

    if max_value != 255:
        values = np.rint(values * 255.0 / max_value).astype(np.int64)
    return values.reshape(height, width, 3).astype(np.uint8)


def read_ppm(path: Union[str, Path]) -> np.ndarray:
    frame = parse_ppm(Path(path).read_text(encoding="ascii"))
    logger.debug(f"Read {frame.shape[1]}x{frame.shape[0]} frame from {path}")
    return frame


def format_ppm(frame: np.ndarray, comment: Optional[str] = None) -> str:
    rgb = as_rgb(frame)
    height, width, _ = rgb.shape
    lines = ["P3"]
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{width} {height}")
    lines.append("255")
    for row in rgb:
        lines.append(" ".join(f"{r} {g} {b}" for r, g, b in row))
    return "\n".join(lines) + "\n"


def write_ppm(path: Union[str, Path], frame: np.ndarray, comment: Optional[str] = None) -> None:
    Path(path).write_text(format_ppm(frame, comment), encoding="ascii")
