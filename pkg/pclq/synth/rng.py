"""
Splittable counter-based random streams.

Each stream is a Philox generator keyed from (seed, path) through
``numpy.random.SeedSequence``; child streams are derived by extending the
path, so results never depend on the order in which trials are scheduled.
"""

import math

import numpy as np


class CounterRng:
    """Counter-based random stream addressed by a seed and an index path."""

    def __init__(self, seed: int, path: tuple[int, ...] = ()) -> None:
        """
        Create the stream for (seed, path).

        Args:
            seed: Non-negative 64-bit base seed
            path: Index path identifying the sub-stream

        """
        if seed < 0 or seed >= 2**64:
            msg = f"seed must be an unsigned 64-bit integer, got {seed}"
            raise ValueError(msg)
        self._seed = seed
        self._path = tuple(int(i) for i in path)
        sequence = np.random.SeedSequence(entropy=seed, spawn_key=self._path)
        key = sequence.generate_state(2, dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        """Show the stream address."""
        return f"CounterRng(seed={self._seed}, path={self._path})"

    @property
    def seed(self) -> int:
        """Base seed."""
        return self._seed

    @property
    def path(self) -> tuple[int, ...]:
        """Index path of this stream."""
        return self._path

    def split(self, *indices: int) -> "CounterRng":
        """Derive an independent child stream; the parent is not advanced."""
        return CounterRng(self._seed, self._path + tuple(indices))

    def uniform(self, size: int | tuple[int, ...]) -> np.ndarray:
        """Uniform variates on [0, 1)."""
        return self._generator.random(size)

    def standard_normal(self, shape: int | tuple[int, ...]) -> np.ndarray:
        """
        Standard Gaussian variates by the Box-Muller transform.

        Pairs (u1, u2) of uniforms give r cos(theta) and r sin(theta) with
        r = sqrt(-2 log u1) and theta = 2 pi u2; u1 is taken on (0, 1].
        """
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        count = math.prod(shape)
        if count == 0:
            return np.zeros(shape)
        pairs = (count + 1) // 2
        u1 = 1.0 - self._generator.random(pairs)
        u2 = self._generator.random(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        z = np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])
        return z[:count].reshape(shape)
