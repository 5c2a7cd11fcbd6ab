"""The group rotation behind the Mirsky measure, and Monte Carlo checks.

The truncated odometer is the product of the cyclic groups Z/bZ over the
known elements with coordinatewise +1; its Haar measure is the product of
uniforms.  Pushing a Haar point through the freeness indicator gives windows
distributed by the truncated Mirsky measure, so sampling yields an unbiased
estimator of cylinder masses to cross-validate the exact evaluators.

Sampling uses numpy's Philox counter-based generator keyed by the seed, so
streams are reproducible across platforms and the sample matrix can be
regenerated chunk by chunk if a caller wants to parallelize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bset import BSet
from .words import Word


@dataclass(frozen=True)
class OdometerPoint:
    """One residue per known element; the state of the rotation."""

    bset: BSet
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != len(self.bset.elements):
            raise ValueError("one residue per element required")
        for r, b in zip(self.residues, self.bset.elements):
            if not 0 <= r < b:
                raise ValueError(f"residue {r} out of range for modulus {b}")

    @classmethod
    def zero(cls, bset: BSet) -> "OdometerPoint":
        return cls(bset, (0,) * len(bset.elements))


def advance(point: OdometerPoint, t: int) -> OdometerPoint:
    """Rotate by t steps: coordinatewise (r + t) mod b.  A group action."""
    return OdometerPoint(
        point.bset,
        tuple((r + t) % b for r, b in zip(point.residues, point.bset.elements)),
    )


def phi_window(point: OdometerPoint, a: int, b: int) -> Word:
    """Freeness window: bit at n is 1 iff r_k + n != 0 mod b_k for every k."""
    if a > b:
        raise ValueError("window bounds out of order")
    length = b - a + 1
    bits = np.ones(length, dtype=np.uint8)
    for r, el in zip(point.residues, point.bset.elements):
        first = (-(r + a)) % el
        bits[first::el] = 0
    return Word((bits + ord("0")).tobytes().decode("ascii"))


def haar_sample(bset: BSet, rng: np.random.Generator) -> OdometerPoint:
    """One Haar-distributed point: independent uniform residues."""
    return OdometerPoint(
        bset, tuple(int(rng.integers(0, b)) for b in bset.elements)
    )


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def to_dict(self, word: Word) -> dict:
        return {
            "word": word.bits,
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def mc_estimate_cylinder(bset: BSet, word: Word, samples: int, seed: int) -> McEstimate:
    """Fraction of Haar samples whose freeness window matches the word.

    Unbiased for the truncated Mirsky mass of the cylinder.  The standard
    error is the usual binomial sqrt(m(1-m)/N).
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    rng = make_rng(seed)
    n = len(word)
    match = np.ones(samples, dtype=bool)
    target = np.frombuffer(word.bits.encode(), dtype=np.uint8) - ord("0")
    residues = [rng.integers(0, b, size=samples) for b in bset.elements]
    for i in range(n):
        free = np.ones(samples, dtype=bool)
        for r, b in zip(residues, bset.elements):
            free &= (r + i) % b != 0
        match &= free == target[i].astype(bool)
    mean = float(match.mean())
    stderr = math.sqrt(mean * (1.0 - mean) / samples)
    return McEstimate(mean, stderr, samples, seed)
