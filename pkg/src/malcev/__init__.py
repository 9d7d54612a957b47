"""Nilpotency-type properties and structure of finite semigroups."""

from .core import (AssociativityError, CapacityError, FiniteSemigroup, MalformedTableError,
                   PreconditionError, SemigroupError, adjoin_identity, closure,
                   enumerate_ideals, enumerate_subsemigroups, is_ideal, rees_quotient,
                   validate_associativity)
from .nilpotency import (is_malcev_nilpotent, is_neumann_taylor, is_positively_engel,
                         is_weakly_malcev_nilpotent, nilpotency_class, group_nilpotency_class)

__all__ = [
    "AssociativityError", "CapacityError", "FiniteSemigroup", "MalformedTableError",
    "PreconditionError", "SemigroupError", "adjoin_identity", "closure", "enumerate_ideals",
    "enumerate_subsemigroups", "is_ideal", "rees_quotient", "validate_associativity",
    "is_malcev_nilpotent", "is_neumann_taylor", "is_positively_engel",
    "is_weakly_malcev_nilpotent", "nilpotency_class", "group_nilpotency_class",
]
