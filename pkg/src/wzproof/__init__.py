"""Exact-arithmetic WZ and creative-telescoping proofs with priced results."""

from .arith import Poly, RatFunc, Ring
from .certify import (CertificateBundle, ProofReport, deserialize, semi_rigorous_solvability, serialize,
                      verify_multisum, verify_probabilistic, verify_rigorous)
from .expr import parse, parse_identity, to_text
from .gosper import gosper_sum
from .hyper import HyperTerm, to_hyper_term
from .pricing import Cost, PriceTag, compose, estimate_cost
from .recurrence import direct_sum, prove_identity, solve_first_order, unroll, verify_bundle
from .telescope import Certificate, Recurrence, find_recurrence, wz_pair

__version__ = "0.1.0"

__all__ = [
    "Poly", "RatFunc", "Ring", "CertificateBundle", "ProofReport", "deserialize", "serialize",
    "semi_rigorous_solvability", "verify_multisum", "verify_probabilistic", "verify_rigorous", "parse",
    "parse_identity", "to_text", "gosper_sum", "HyperTerm", "to_hyper_term", "Cost", "PriceTag", "compose",
    "estimate_cost", "direct_sum", "prove_identity", "solve_first_order", "unroll", "verify_bundle", "Certificate",
    "Recurrence", "find_recurrence", "wz_pair",
]
