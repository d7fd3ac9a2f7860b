"""Curriculum weight schedulers.

A scheduler maps the current epoch ``e`` to a weight ``lambda`` in [0, 1]
that blends the easy (binary) loss against the hard (three-class) loss.
Every kind starts at ``lambda = 1`` (pure easy task) and is identically 0
from the switch epoch onward (pure hard task). Closed forms on
``0 <= e < switch_epoch``, with ``t = e / switch_epoch``:

    cosine             (cos(pi * t) + 1) / 2
    linear             1 - t
    concave_quadratic  1 - t^2
    convex_quadratic   (1 - t)^2
    exponential        floor^t            (floor defaults to 1e-3)
    logarithm          log(1 + switch_epoch - e) / log(1 + switch_epoch)
    step               1

``constant_zero`` returns 0 at every epoch; it exists so a plain
hard-task baseline runs through the same training path as the
scheduled arms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

KINDS = (
    "cosine",
    "linear",
    "concave_quadratic",
    "convex_quadratic",
    "exponential",
    "logarithm",
    "step",
    "constant_zero",
)

#: Kinds that actually schedule a curriculum (everything but the baseline).
CURRICULUM_KINDS = tuple(k for k in KINDS if k != "constant_zero")

DEFAULT_EXP_FLOOR = 1e-3


@dataclass(frozen=True)
class SchedulerSpec:
    """A scheduler kind plus its hyperparameters.

    ``switch_epoch`` is the first epoch with weight 0; ``total_epochs``
    bounds the valid epoch range. ``exp_floor`` is the terminal value the
    exponential kind decays toward.
    """

    kind: str
    switch_epoch: int
    total_epochs: int
    exp_floor: float = DEFAULT_EXP_FLOOR

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown scheduler kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )
        if not isinstance(self.switch_epoch, int) or isinstance(self.switch_epoch, bool):
            raise ValueError("switch_epoch must be an integer")
        if not isinstance(self.total_epochs, int) or isinstance(self.total_epochs, bool):
            raise ValueError("total_epochs must be an integer")
        if self.switch_epoch < 1:
            raise ValueError(f"switch_epoch must be >= 1, got {self.switch_epoch}")
        if self.total_epochs < self.switch_epoch:
            raise ValueError(
                f"total_epochs ({self.total_epochs}) must be >= switch_epoch ({self.switch_epoch})"
            )
        if not (0.0 < self.exp_floor < 1.0):
            raise ValueError(f"exp_floor must lie in (0, 1), got {self.exp_floor}")


def default_switch_epoch(total_epochs: int) -> int:
    """Half the training budget, rounded down (used when a config omits it)."""
    return max(1, total_epochs // 2)


def lambda_at(spec: SchedulerSpec, epoch: int) -> float:
    """Curriculum weight at ``epoch`` for the given spec.

    The weight is held fixed for all batches within an epoch. Raises
    ``ValueError`` when ``epoch`` is outside ``[0, total_epochs]``.
    """
    if not isinstance(epoch, int) or isinstance(epoch, bool):
        raise ValueError(f"epoch must be an integer, got {epoch!r}")
    if epoch < 0 or epoch > spec.total_epochs:
        raise ValueError(
            f"epoch {epoch} out of range [0, {spec.total_epochs}] for scheduler {spec.kind!r}"
        )
    if spec.kind == "constant_zero":
        return 0.0
    # The cut-off branch wins at the boundary for every kind, including
    # convex_quadratic whose closed form is also 0 there.
    if epoch >= spec.switch_epoch:
        return 0.0
    t = epoch / spec.switch_epoch
    if spec.kind == "cosine":
        return (math.cos(t * math.pi) + 1.0) / 2.0
    if spec.kind == "linear":
        return 1.0 - t
    if spec.kind == "concave_quadratic":
        return 1.0 - t * t
    if spec.kind == "convex_quadratic":
        return (epoch - spec.switch_epoch) ** 2 / spec.switch_epoch**2
    if spec.kind == "exponential":
        return spec.exp_floor**t
    if spec.kind == "logarithm":
        return math.log(1.0 + spec.switch_epoch - epoch) / math.log(1.0 + spec.switch_epoch)
    assert spec.kind == "step"
    return 1.0


def schedule(spec: SchedulerSpec) -> list[float]:
    """The per-epoch weights ``[lambda(0), ..., lambda(total_epochs - 1)]``."""
    return [lambda_at(spec, e) for e in range(spec.total_epochs)]
