"""General MIDI program numbers and the coarse 8-group instrument selector.

GM defines 16 families of 8 programs. The coarse selector exposed to users
has 8 groups, each covering 2 adjacent GM families (16 programs). Selecting
a group resolves to the first program of the group.
"""

from __future__ import annotations

from ..errors import InvalidParams

GROUP_SIZE = 16

INSTRUMENT_GROUPS = (
    "Piano & Chromatic Percussion",
    "Organ & Guitar",
    "Bass & Strings",
    "Ensemble & Brass",
    "Reed & Pipe",
    "Synth Lead & Synth Pad",
    "Synth Effects & Ethnic",
    "Percussive & Sound Effects",
)

GM_FAMILIES = (
    "Piano", "Chromatic Percussion", "Organ", "Guitar",
    "Bass", "Strings", "Ensemble", "Brass",
    "Reed", "Pipe", "Synth Lead", "Synth Pad",
    "Synth Effects", "Ethnic", "Percussive", "Sound Effects",
)

PERCUSSION_CHANNEL = 9


def group_of_program(program: int) -> int:
    """Map a GM program 0-127 to its group 0-7."""
    if not 0 <= program <= 127:
        raise InvalidParams(f"GM program {program} out of range 0-127")
    return program // GROUP_SIZE


def program_for_group(group: int) -> int:
    """Representative GM program (first of the group) for a group id 0-7."""
    if not 0 <= group <= 7:
        raise InvalidParams(f"instrument group {group} out of range 0-7")
    return group * GROUP_SIZE


def group_name(group: int) -> str:
    if not 0 <= group <= 7:
        raise InvalidParams(f"instrument group {group} out of range 0-7")
    return INSTRUMENT_GROUPS[group]
