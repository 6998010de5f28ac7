"""Reference generator worker speaking the line-delimited protocol.

Run as `python -m barsmith.genworker`. Wraps the built-in context generator
behind the same wire contract an external neural model would implement, so
the subprocess path is exercised end to end without any model weights.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .generation.generator import EffectiveTrackConstraints, WindowView
from .generation.markov import ContextMarkovGenerator
from .generation.params import DurationClass
from .midi.notes import NoteEvent
from .score.docs import note_from_doc, note_to_doc
from .score.piece import Bar, Track
from .service.subprocess_gen import PROTOCOL_VERSION, cell_key


def window_from_request(doc: dict) -> WindowView:
    bars = tuple(
        Bar(b["index"], b["start"], b["end"], b["numerator"], b["denominator"])
        for b in doc["bars"]
    )
    tracks = tuple(
        Track(
            name=t.get("name", ""),
            channel=t.get("channel", 0),
            program=t.get("program", 0),
            is_percussion=t.get("is_percussion", False),
        )
        for t in sorted(doc["tracks"], key=lambda t: t["index"])
    )
    notes: dict[tuple[int, int], tuple[NoteEvent, ...]] = {}
    context = set()
    for cell in doc["cells"]:
        key = (cell["track"], cell["bar"])
        notes[key] = tuple(note_from_doc(n) for n in cell["notes"])
        if cell.get("context"):
            context.add(key)
    targets = tuple((t, b) for t, b in doc["targets"])
    return WindowView(
        ppq=doc["ppq"],
        bars=bars,
        tracks=tracks,
        notes=notes,
        target_cells=targets,
        context_cells=frozenset(context),
    )


def constraints_from_request(doc: dict) -> dict[int, EffectiveTrackConstraints]:
    out = {}
    for key, c in doc["constraints"].items():
        index = int(key)
        out[index] = EffectiveTrackConstraints(
            track_index=index,
            program=c["program"],
            is_percussion=c.get("is_percussion", False),
            density=c["density"],
            polyphony=tuple(c["polyphony"]),
            duration_classes=tuple(
                DurationClass.from_label(label) for label in c["duration_classes"]
            ),
            duration_ticks=tuple(c["duration_ticks"]),
        )
    return out


def serve(stdin=None, stdout=None, name: str = "builtin-worker") -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    generator = ContextMarkovGenerator()

    hello = {
        "type": "hello",
        "name": name,
        "version": generator.version,
        "protocol_version": PROTOCOL_VERSION,
    }
    stdout.write(json.dumps(hello) + "\n")
    stdout.flush()

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            if request.get("type") == "shutdown":
                return
            if request.get("type") != "generate":
                raise ValueError(f"unknown request type {request.get('type')!r}")
            window = window_from_request(request)
            constraints = constraints_from_request(request)
            rng = random.Random(request["seed"])
            produced = generator.generate_cells(
                window, constraints, request["temperature"], rng
            )
            response = {
                "type": "result",
                "cells": {
                    cell_key(cell): [note_to_doc(n) for n in notes]
                    for cell, notes in produced.items()
                },
            }
        except Exception as exc:  # protocol boundary: report, don't die
            response = {"type": "error", "message": f"{type(exc).__name__}: {exc}"}
        stdout.write(json.dumps(response) + "\n")
        stdout.flush()


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--name", default="builtin-worker")
    args = parser.parse_args(argv)
    serve(name=args.name)


if __name__ == "__main__":
    main()
