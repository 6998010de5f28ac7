"""Command-line client for the composition service (plus `serve`).

Every subcommand except `serve` and `constants` talks HTTP to a running
service; point it elsewhere with --url or BARSMITH_URL.
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click
import httpx

from . import constants
from .service.app import create_app
from .service.config import AppConfig

DEFAULT_URL = os.environ.get("BARSMITH_URL", "http://127.0.0.1:8000")


def client(url: str) -> httpx.Client:
    return httpx.Client(base_url=url, timeout=60.0)


def fail_on_error(response: httpx.Response) -> dict:
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"{response.status_code}: {detail}")
    return response.json()


@click.group()
def main() -> None:
    """Co-creative multi-track MIDI composition service client."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_path, host, port) -> None:
    """Run the service."""
    import uvicorn

    config = AppConfig.load(config_path)
    if host:
        config.host = host
    if port:
        config.port = port
    uvicorn.run(create_app(config), host=config.host, port=config.port)


@main.command("constants")
def constants_cmd() -> None:
    """Print the shared parameter-bounds document as JSON."""
    click.echo(json.dumps(constants.bounds_document(), indent=2, sort_keys=True))


@main.command()
@click.argument("midi_file", type=click.Path(exists=True, path_type=Path))
@click.option("--url", default=DEFAULT_URL)
def upload(midi_file: Path, url: str) -> None:
    """Create a session from a seed MIDI file."""
    with client(url) as c:
        response = c.post(
            "/sessions",
            files={"file": (midi_file.name, midi_file.read_bytes(), "audio/midi")},
        )
    doc = fail_on_error(response)
    click.echo(json.dumps({"id": doc["id"], "tracks": len(doc["piece"]["tracks"]), "bars": len(doc["piece"]["bars"])}))


@main.command()
@click.argument("session_id")
@click.option("--url", default=DEFAULT_URL)
def show(session_id: str, url: str) -> None:
    """Show a session's piece summary."""
    with client(url) as c:
        doc = fail_on_error(c.get(f"/sessions/{session_id}"))
    piece = doc["piece"]
    click.echo(f"session {doc['id']} created {doc['created_at']}")
    click.echo(f"  ppq {piece['ppq']}, {len(piece['bars'])} bars")
    for i, track in enumerate(piece["tracks"]):
        flags = " percussion" if track["is_percussion"] else ""
        click.echo(
            f"  track {i}: {track['name'] or '(unnamed)'} ch{track['channel']}"
            f" prog{track['program']}{flags} {len(track['notes'])} notes"
        )


@main.command()
@click.argument("session_id")
@click.option("--cells", required=True, help="Selection as track:bar pairs, e.g. '0:0,0:1,1:2'")
@click.option("--batch-size", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--temperature", default=1.0, show_default=True)
@click.option("--percentage", default=100, show_default=True)
@click.option("--density", default=0, show_default=True, help="Note density 0-10 (0 = random)")
@click.option("--tempo", default=constants.TEMPO_DEFAULT, show_default=True)
@click.option("--wait/--no-wait", default=True, show_default=True)
@click.option("--url", default=DEFAULT_URL)
def generate(session_id, cells, batch_size, seed, temperature, percentage, density, tempo, wait, url) -> None:
    """Request a generation batch over the selected cells."""
    selection = []
    for token in cells.split(","):
        t, b = token.strip().split(":")
        selection.append([int(t), int(b)])
    tracks = sorted({t for t, _ in selection})
    body = {
        "selection": selection,
        "global_params": {
            "temperature": temperature,
            "percentage": percentage,
            "tempo": tempo,
        },
        "per_track": {str(t): {"note_density": density} for t in tracks},
        "batch_size": batch_size,
        "seed": seed,
    }
    with client(url) as c:
        doc = fail_on_error(c.post(f"/sessions/{session_id}/generate", json=body))
        batch_id = doc["id"]
        click.echo(f"batch {batch_id} {doc['status']}")
        if not wait:
            return
        while doc["status"] in ("pending", "running"):
            time.sleep(0.2)
            doc = fail_on_error(c.get(f"/batches/{batch_id}"))
    click.echo(f"batch {batch_id} {doc['status']}")
    if doc["status"] == "failed":
        raise click.ClickException(doc.get("error") or "generation failed")
    for out in doc["outputs"]:
        click.echo(f"  #{out['rank']} {out['id']} distance {out['distance']:.4f}")


@main.command()
@click.argument("batch_id")
@click.option("--threshold", type=float, default=None)
@click.option("--url", default=DEFAULT_URL)
def ranking(batch_id: str, threshold: float | None, url: str) -> None:
    """Show a batch's similarity ranking."""
    params = {} if threshold is None else {"threshold": threshold}
    with client(url) as c:
        doc = fail_on_error(c.get(f"/batches/{batch_id}/ranking", params=params))
    for entry in doc["entries"]:
        click.echo(f"#{entry['rank']} {entry['output_id']} distance {entry['distance']:.4f}")


@main.command()
@click.argument("output_id")
@click.option("--url", default=DEFAULT_URL)
def promote(output_id: str, url: str) -> None:
    """Turn a generated output into a new session."""
    with client(url) as c:
        doc = fail_on_error(c.post(f"/outputs/{output_id}/promote"))
    click.echo(doc["id"])


@main.command()
@click.argument("entity_id")
@click.option("--output", "is_output", is_flag=True, help="entity is an output id, not a session id")
@click.option("-o", "--dest", type=click.Path(path_type=Path), default=None)
@click.option("--url", default=DEFAULT_URL)
def export(entity_id: str, is_output: bool, dest: Path | None, url: str) -> None:
    """Download a session's or output's MIDI file."""
    path = f"/outputs/{entity_id}/midi" if is_output else f"/sessions/{entity_id}/midi"
    with client(url) as c:
        response = c.get(path)
    if response.status_code >= 400:
        fail_on_error(response)
    dest = dest or Path(f"{entity_id}.mid")
    dest.write_bytes(response.content)
    click.echo(str(dest))


@main.command()
@click.argument("session_id")
@click.option("--tempo", type=int, default=None, help="Override playback tempo (BPM)")
@click.option("--output-id", default=None, help="Audition a generated output")
@click.option("--url", default=DEFAULT_URL)
def play(session_id: str, tempo: int | None, output_id: str | None, url: str) -> None:
    """Start server-side playback on the session's event channel."""
    body = {"tempo_override": tempo, "output_id": output_id}
    with client(url) as c:
        doc = fail_on_error(c.post(f"/sessions/{session_id}/playback", json=body))
    click.echo(f"playing {doc['events']} events")


if __name__ == "__main__":
    main()
