"""
Receiver-side decoding oracle: successive-cancellation rates, Eve rates, secrecy outage
and the three ACK/NACK rules. Every function is pure.
"""

from .ack import ack_full_eve_csi, ack_no_security, ack_outage, eve_lattice, exact_masked_sum, secrecy_margins, secrecy_outage_prob
from .models import JointRealization
from .rates import bob_rate, bob_rates, decode_order, eve_rate, eve_rates

__all__ = [
    "JointRealization",
    # Rates
    "decode_order",
    "bob_rate",
    "eve_rate",
    "bob_rates",
    "eve_rates",
    # ACK rules
    "ack_no_security",
    "ack_full_eve_csi",
    "ack_outage",
    "secrecy_outage_prob",
    # Vectorized helpers
    "eve_lattice",
    "secrecy_margins",
    "exact_masked_sum",
]
