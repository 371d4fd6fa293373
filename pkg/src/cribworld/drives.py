"""Homeostatic interoception: thirst and hunger.

Both drives grow each step and are reduced only by ingestion.  This module
emits levels, never rewards; any reward-like quantity must be derived by an
agent from consecutive observations.
"""

from __future__ import annotations

from dataclasses import dataclass


class InvalidSubstanceError(ValueError):
    pass


@dataclass
class DriveParams:
    thirst_rate: float = 0.001
    hunger_rate: float = 0.0005
    cry_threshold: float = 0.6


@dataclass
class DriveState:
    thirst: float = 0.0
    hunger: float = 0.0

    def _clamp(self) -> None:
        self.thirst = min(1.0, max(0.0, self.thirst))
        self.hunger = min(1.0, max(0.0, self.hunger))


def tick(drives: DriveState, params: DriveParams) -> None:
    drives.thirst += params.thirst_rate
    drives.hunger += params.hunger_rate
    drives._clamp()


def ingest(drives: DriveState, substance: str, amount: float) -> None:
    if amount < 0:
        raise ValueError("amount must be non-negative")
    if substance == "water":
        drives.thirst -= amount
    elif substance == "milk":
        # Milk quenches thirst at half efficacy, so water stays the better answer.
        drives.thirst -= 0.5 * amount
        drives.hunger -= amount
    else:
        raise InvalidSubstanceError(f"unknown substance {substance!r}")
    drives._clamp()
