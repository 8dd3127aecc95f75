"""Chaotic-masking secure-communication link simulator.

The heavy lifting lives in the compiled extension ``chaoscomm._core``; this
package re-exports its public surface.
"""

from chaoscomm._core import (
    SimulationDiverged,
    __version__,
    add_noise,
    bit_from_voltage,
    comparator_bit,
    filter_gain,
    message,
    simulate,
    splitmix64,
    sweep,
    xor_mask,
)

__all__ = [
    "SimulationDiverged",
    "__version__",
    "add_noise",
    "bit_from_voltage",
    "comparator_bit",
    "filter_gain",
    "message",
    "simulate",
    "splitmix64",
    "sweep",
    "xor_mask",
]
