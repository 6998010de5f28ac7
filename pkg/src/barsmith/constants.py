"""Parameter bounds shared by the engine, the REST validators, and the web UI.

This module is the single source of truth. The service exposes it verbatim at
``GET /constants`` and ``python -m barsmith.constants`` prints it as JSON so
the frontend build can assert its own copy has not drifted.
"""

from __future__ import annotations

import json

TEMPERATURE_MIN = 0.8
TEMPERATURE_MAX = 1.2

POLYPHONY_HARD_LIMIT_MIN = 1
POLYPHONY_HARD_LIMIT_MAX = 6

PERCENTAGE_MIN = 0
PERCENTAGE_MAX = 100

MODEL_DIM_MIN = 1
MODEL_DIM_MAX = 8
MODEL_DIM_DEFAULT = 4

TRACKS_PER_STEP_MIN = 1
TRACKS_PER_STEP_MAX = 8
TRACKS_PER_STEP_DEFAULT = 4

BARS_PER_STEP_MIN = 1
BARS_PER_STEP_MAX = 8
BARS_PER_STEP_DEFAULT = 2

MAX_STEPS_MIN = 0  # 0 = unlimited
MAX_STEPS_MAX = 8

TEMPO_DEFAULT = 120

NOTE_DENSITY_MIN = 0  # 0 = pick at random per request
NOTE_DENSITY_MAX = 10

POLYPHONY_RANGE_MIN = 0
POLYPHONY_RANGE_MAX = 6

# Ordered note-duration scale; "any" means unbounded on that side.
DURATION_SCALE = ("any", "1/32", "1/16", "1/8", "1/4", "1/2", "whole")

GM_PROGRAM_MIN = 0
GM_PROGRAM_MAX = 127
INSTRUMENT_GROUP_MIN = 0
INSTRUMENT_GROUP_MAX = 7

BATCH_SIZE_MIN = 1


def bounds_document() -> dict:
    """The canonical bounds document, keyed by parameter name."""
    return {
        "temperature": {"min": TEMPERATURE_MIN, "max": TEMPERATURE_MAX},
        "polyphony_hard_limit": {
            "min": POLYPHONY_HARD_LIMIT_MIN,
            "max": POLYPHONY_HARD_LIMIT_MAX,
        },
        "percentage": {"min": PERCENTAGE_MIN, "max": PERCENTAGE_MAX},
        "model_dim": {
            "min": MODEL_DIM_MIN,
            "max": MODEL_DIM_MAX,
            "default": MODEL_DIM_DEFAULT,
        },
        "tracks_per_step": {
            "min": TRACKS_PER_STEP_MIN,
            "max": TRACKS_PER_STEP_MAX,
            "default": TRACKS_PER_STEP_DEFAULT,
        },
        "bars_per_step": {
            "min": BARS_PER_STEP_MIN,
            "max": BARS_PER_STEP_MAX,
            "default": BARS_PER_STEP_DEFAULT,
        },
        "max_steps": {"min": MAX_STEPS_MIN, "max": MAX_STEPS_MAX, "default": 0},
        "tempo": {"min": 1, "default": TEMPO_DEFAULT},
        "note_density": {"min": NOTE_DENSITY_MIN, "max": NOTE_DENSITY_MAX},
        "polyphony_range": {"min": POLYPHONY_RANGE_MIN, "max": POLYPHONY_RANGE_MAX},
        "duration_scale": list(DURATION_SCALE),
        "gm_program": {"min": GM_PROGRAM_MIN, "max": GM_PROGRAM_MAX},
        "instrument_group": {"min": INSTRUMENT_GROUP_MIN, "max": INSTRUMENT_GROUP_MAX},
        "batch_size": {"min": BATCH_SIZE_MIN},
    }


if __name__ == "__main__":
    print(json.dumps(bounds_document(), indent=2, sort_keys=True))
