"""Bar-grid score model and its canonical document serialization."""

from .docs import note_from_doc, note_to_doc, piece_from_doc, piece_to_doc
from .instruments import (
    INSTRUMENT_GROUPS,
    PERCUSSION_CHANNEL,
    group_name,
    group_of_program,
    program_for_group,
)
from .piece import (
    Bar,
    BarSelection,
    Cell,
    Piece,
    Track,
    add_track,
    bar_length_ticks,
    delete_track,
    edit_track_metadata,
    notes_in_cell,
    piece_to_midifile,
    replace_cell_notes,
    segment_bars,
)

__all__ = [
    "Bar",
    "BarSelection",
    "Cell",
    "INSTRUMENT_GROUPS",
    "PERCUSSION_CHANNEL",
    "Piece",
    "Track",
    "add_track",
    "bar_length_ticks",
    "delete_track",
    "edit_track_metadata",
    "group_name",
    "group_of_program",
    "notes_in_cell",
    "note_from_doc",
    "note_to_doc",
    "piece_from_doc",
    "piece_to_doc",
    "piece_to_midifile",
    "program_for_group",
    "replace_cell_notes",
    "segment_bars",
]
