"""Parameter-controlled bar-infilling generation."""

from .constraints import ConstraintReport, enforce_constraints, max_simultaneous
from .engine import GeneratedOutput, StepTraceEntry, generate
from .generator import EffectiveTrackConstraints, Generator, WindowView
from .markov import ContextMarkovGenerator
from .params import (
    DurationClass,
    GenerationRequest,
    GlobalParams,
    TrackParams,
    effective_polyphony,
    resolve_density,
)
from .planner import GenerationStep, StepPlan, plan_steps
from .sampling import derive_rng, mix_seed, temperature_sample

__all__ = [
    "ConstraintReport",
    "ContextMarkovGenerator",
    "DurationClass",
    "EffectiveTrackConstraints",
    "GeneratedOutput",
    "GenerationRequest",
    "GenerationStep",
    "Generator",
    "GlobalParams",
    "StepPlan",
    "StepTraceEntry",
    "TrackParams",
    "WindowView",
    "derive_rng",
    "effective_polyphony",
    "enforce_constraints",
    "generate",
    "max_simultaneous",
    "mix_seed",
    "plan_steps",
    "resolve_density",
    "temperature_sample",
]
