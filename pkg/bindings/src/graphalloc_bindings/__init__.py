"""Standard episodic-environment bindings for the graphalloc benchmark."""
from .env import BoundEnvironment
from .external import (
    ExternalPolicyError,
    NonDeterministicPolicy,
    evaluate_external_policy,
)

__version__ = "0.1.0"

__all__ = [
    "BoundEnvironment",
    "evaluate_external_policy",
    "ExternalPolicyError",
    "NonDeterministicPolicy",
]
