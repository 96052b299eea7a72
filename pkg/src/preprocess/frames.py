"""
Frame pipeline: pairwise pixel max, luminance, area rescale, stack of 4.

Frames are numpy arrays: RGB frames are ``(height, width, 3)`` uint8,
grayscale frames are ``(height, width)`` float64 in [0, 1].

The stacked observation is the four frames flattened oldest first, so the
pixel at (row r, col c) of stack slot k lands at index ``k*H*W + r*W + c``.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import cv2
import numpy as np

from ..exceptions import ContractError, DimensionError

logger = logging.getLogger(__name__)

STACK_DEPTH = 4

# BT.601 luma weights
LUMA_R, LUMA_G, LUMA_B = 0.299, 0.587, 0.114


def as_rgb(frame: np.ndarray) -> np.ndarray:
    """
    Validate and convert an RGB frame to uint8.

    Raises:
        DimensionError: If the array is not (H, W, 3).
        ContractError: If a channel value lies outside [0, 255].
    """
    array = np.asarray(frame)
    if array.ndim != 3 or array.shape[2] != 3 or array.shape[0] < 1 or array.shape[1] < 1:
        raise DimensionError("RGB frame must be (height, width, 3)", array.shape, ("H", "W", 3))
    if array.dtype != np.uint8:
        if np.any(array < 0) or np.any(array > 255) or np.any(array != np.round(array)):
            raise ContractError("RGB channel values must be integers in [0, 255]")
        array = array.astype(np.uint8)
    return array


def pixel_max(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-pixel, per-channel maximum of two RGB frames."""
    a, b = as_rgb(a), as_rgb(b)
    if a.shape != b.shape:
        raise DimensionError("pixel_max needs equal frame sizes", a.shape, b.shape)
    return np.maximum(a, b)


def luminance(frame: np.ndarray) -> np.ndarray:
    """
    Luma channel in [0, 1].

    Each channel is normalised before weighting, so a pure primary maps to
    its weight exactly (red gives 0.299).
    """
    rgb = as_rgb(frame).astype(np.float64) / 255.0
    luma = rgb[..., 0] * LUMA_R + rgb[..., 1] * LUMA_G + rgb[..., 2] * LUMA_B
    return np.clip(luma, 0.0, 1.0)


def rescale(frame: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """
    Area-average downscale of a grayscale frame.

    Args:
        frame: ``(H, W)`` float frame.
        out_w: Output width, 1 <= out_w <= W.
        out_h: Output height, 1 <= out_h <= H.

    Returns:
        ``(out_h, out_w)`` float64 frame. For integer factors every output
        pixel is the mean of its source block.

    Raises:
        ContractError: On non-positive sizes or a requested upscale.
    """
    gray = np.asarray(frame, dtype=np.float64)
    if gray.ndim != 2:
        raise DimensionError("rescale expects a grayscale (H, W) frame", gray.shape, ("H", "W"))
    height, width = gray.shape
    if out_w < 1 or out_h < 1:
        raise ContractError(f"Output size must be positive, got {out_w}x{out_h}")
    if out_w > width or out_h > height:
        raise ContractError(f"Upscaling {width}x{height} -> {out_w}x{out_h} is not supported")
    if (out_h, out_w) == gray.shape:
        return gray.copy()
    if height % out_h == 0 and width % out_w == 0:
        # cv2 area weights are float32; integer factors are exact block means in float64
        blocks = gray.reshape(out_h, height // out_h, out_w, width // out_w)
        return blocks.mean(axis=(1, 3))
    resized = cv2.resize(gray, (int(out_w), int(out_h)), interpolation=cv2.INTER_AREA)
    return np.asarray(resized, dtype=np.float64).reshape(out_h, out_w)


@dataclass(frozen=True)
class FrameStack:
    """Immutable stack of the most recent grayscale frames, newest last."""
    frames: Tuple[np.ndarray, ...] = ()
    depth: int = STACK_DEPTH

    @property
    def frame_shape(self) -> Optional[Tuple[int, ...]]:
        return self.frames[0].shape if self.frames else None

    def observation(self) -> np.ndarray:
        """Flattened frames, oldest first."""
        if not self.frames:
            raise ContractError("FrameStack is empty")
        return np.concatenate([f.reshape(-1) for f in self.frames])


def push_frame(stack: FrameStack, frame: np.ndarray) -> Tuple[FrameStack, np.ndarray]:
    """
    Append a grayscale frame, dropping the oldest.

    The first push fills every slot with the new frame.

    Returns:
        Tuple (new stack, flattened observation).

    Raises:
        DimensionError: If the frame size differs from the stacked frames.
    """
    gray = np.array(frame, dtype=np.float64)
    if gray.ndim != 2:
        raise DimensionError("push_frame expects a grayscale (H, W) frame", gray.shape, ("H", "W"))
    if stack.frames and gray.shape != stack.frame_shape:
        raise DimensionError("Frame size does not match stack", gray.shape, stack.frame_shape)

    if stack.frames:
        frames = stack.frames[1:] + (gray,)
    else:
        frames = (gray,) * stack.depth
    updated = FrameStack(frames=frames, depth=stack.depth)
    return updated, updated.observation()


@dataclass
class FramePipeline:
    """
    Raw RGB frames in, stacked observations out.

    Each raw frame is max-pooled with its predecessor (the first frame with
    itself), reduced to luminance, rescaled and pushed onto the stack.
    """
    out_w: int = 8
    out_h: int = 8
    depth: int = STACK_DEPTH
    _previous: Optional[np.ndarray] = field(default=None, init=False, repr=False)
    _stack: FrameStack = field(default_factory=FrameStack, init=False, repr=False)

    def __post_init__(self):
        if self.depth < 1:
            raise ContractError(f"Stack depth must be positive, got {self.depth}")
        self._stack = FrameStack(depth=self.depth)

    @property
    def observation_dim(self) -> int:
        return self.depth * self.out_w * self.out_h

    @property
    def stack(self) -> FrameStack:
        return self._stack

    def reset(self) -> None:
        self._previous = None
        self._stack = FrameStack(depth=self.depth)

    def process(self, raw: np.ndarray) -> np.ndarray:
        """Feed one raw frame and return the current flattened observation."""
        raw = as_rgb(raw)
        merged = pixel_max(self._previous if self._previous is not None else raw, raw)
        self._previous = raw
        gray = rescale(luminance(merged), self.out_w, self.out_h)
        self._stack, observation = push_frame(self._stack, gray)
        return observation
