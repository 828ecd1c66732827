"""Counter-based random number streams.

Every stochastic component of a run owns its own stream, derived from the
master seed and a small integer stream id.  Streams are backed by Philox,
a counter-based generator, so stream k's output depends only on
(seed, k) -- never on how many draws any other stream has consumed.
Stream 0 is reserved for the fundamental-value process; agent i uses
stream i + 1.
"""

import numpy as np

FUNDAMENTAL_STREAM = 0


def stream(seed: int, stream_id: int) -> np.random.Generator:
    """Return the generator for (seed, stream_id).

    Calling this twice with the same arguments yields two independent
    generator objects that produce identical draw sequences.
    """
    if seed < 0 or stream_id < 0:
        raise ValueError(f"seed and stream_id must be non-negative, got ({seed}, {stream_id})")
    key = np.array([seed, stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def agent_stream(seed: int, agent_id: int) -> np.random.Generator:
    """Stream for agent `agent_id` (ids start at 0; stream 0 is the fundamental's)."""
    return stream(seed, agent_id + 1)


def fundamental_stream(seed: int) -> np.random.Generator:
    return stream(seed, FUNDAMENTAL_STREAM)
