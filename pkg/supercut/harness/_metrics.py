from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import numpy as np
import numpy.typing as npt

from supercut.types import Mask
from supercut.utils.exceptions import ShapeMismatch, UndefinedOverlap


def overlap(mask_s: npt.ArrayLike, mask_g: npt.ArrayLike) -> Fraction:
    """
    Return the intersection over union of two masks, exactly.

    Raises:
        ShapeMismatch: If the masks differ in shape.
        UndefinedOverlap: If both masks are empty.

    Examples:
        >>> overlap([[1, 1, 0, 0]], [[0, 1, 1, 1]])
        Fraction(1, 3)
        >>> overlap([1, 0], [0, 1])
        Fraction(0, 1)
    """
    s = np.asarray(mask_s) != 0
    g = np.asarray(mask_g) != 0
    if s.shape != g.shape:
        raise ShapeMismatch(g.shape, "mask", s.shape)
    union = int((s | g).sum())
    if not union:
        raise UndefinedOverlap()
    return Fraction(int((s & g).sum()), union)


def best_overlap(segment: Mask, ground_truth: Sequence[Mask]) -> Fraction:
    """The overlap with the ground truth segment the `segment` matches best."""
    return max(
        (overlap(segment, truth) for truth in ground_truth if truth.any()),
        default=Fraction(0),
    )
