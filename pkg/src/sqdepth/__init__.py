"""Depth, Stanley depth and combinatorial invariants of squarefree quotients I/J."""

from .monomials import QQ, FieldSpec, Instance, InstanceError, MonomialIdeal, SqMonomial
from .homology import depth_of, koszul_homology, hochster_depth_oracle
from .stanley import build_poset, sdepth, sdepth_decision, brute_force_sdepth
from .constructions import derive_sets, gcd_family, check_theorem_hypotheses
from .formats import parse_instance, dump_instance

__version__ = "0.1.0"

__all__ = [
    "QQ", "FieldSpec", "Instance", "InstanceError", "MonomialIdeal", "SqMonomial",
    "depth_of", "koszul_homology", "hochster_depth_oracle",
    "build_poset", "sdepth", "sdepth_decision", "brute_force_sdepth",
    "derive_sets", "gcd_family", "check_theorem_hypotheses",
    "parse_instance", "dump_instance",
]
