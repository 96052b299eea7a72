"""Preprocess - frame pipeline for image observations and PPM fixtures."""

from .frames import (
    STACK_DEPTH,
    FramePipeline,
    FrameStack,
    as_rgb,
    luminance,
    pixel_max,
    push_frame,
    rescale,
)
from .pixmap import format_ppm, parse_ppm, read_ppm, write_ppm

__all__ = [
    "STACK_DEPTH",
    "FramePipeline",
    "FrameStack",
    "as_rgb",
    "luminance",
    "pixel_max",
    "push_frame",
    "rescale",
    "format_ppm",
    "parse_ppm",
    "read_ppm",
    "write_ppm",
]
