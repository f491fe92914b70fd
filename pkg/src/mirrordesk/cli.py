"""Command-line interface.

Zero-config runs use the packaged case-study fixtures: a fresh data
directory is seeded with the persona, the context-event log, the
competency framework, and the ten-candidate pool.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import click

from .episode import DecisionEpisode
from .fitmetrics import Evaluation, comparison_table, fit_score
from .ingest import load_framework_file, load_profiles_file, read_jsonl
from .store import Store, replay_log
from .api import create_app, episode_evaluation

FIXTURES = resources.files("mirrordesk") / "fixtures"


def fixture_path(name: str) -> Path:
    return Path(str(FIXTURES / name))


def load_evaluations(path=None) -> dict[str, Evaluation]:
    doc = json.loads(Path(path or fixture_path("evaluations.json")).read_text())
    return {
        name: Evaluation(evaluator=name, ranked=list(entry["ranked"]),
                         excluded=set(entry.get("excluded", [])))
        for name, entry in doc.items()
    }


def bootstrap_store(data_dir, framework_path=None, profiles_path=None,
                    seed_fixture_events: bool = True) -> Store:
    """Open (and on first use, seed) a store under ``data_dir``."""
    framework = load_framework_file(framework_path or fixture_path("framework.json"))
    profiles = load_profiles_file(profiles_path or fixture_path("profiles.jsonl"))
    store = Store(data_dir, framework=framework, profiles=profiles)
    if seed_fixture_events and not store.entries:
        store.seed_persona(json.loads(fixture_path("persona.json").read_text()))
        store.ingest_event_docs(read_jsonl(fixture_path("events.jsonl")))
    return store


def _print_ranking(episode: DecisionEpisode) -> None:
    click.echo(f"episode {episode.id}  mode={episode.mode}  "
               f"snapshot v{episode.snapshot_version}")
    click.echo(f"{'rank':<6}{'candidate':<12}{'total':<10}{'gate':<14}{'uncertainty':<12}")
    for i, card in enumerate(episode.ranking, start=1):
        click.echo(f"{i:<6}{card.candidate_id:<12}{card.total:<10.4f}"
                   f"{card.gate.status:<14}{card.uncertainty:<12.3f}")
    click.echo(f"options include inaction: "
               f"{any(o['option'] == 'no-hire' for o in episode.options)}")


@click.group()
@click.option("--data-dir", "-d", envvar="MIRRORDESK_DATA",
              default="./mirrordesk-data", show_default=True)
@click.pass_context
def main(ctx, data_dir):
    """Context-sensitive decision-support engine."""
    ctx.obj = {"data_dir": data_dir}


@main.command()
@click.argument("log", required=False, type=click.Path(exists=True))
@click.option("--strict/--lenient", default=False, show_default=True)
@click.pass_context
def ingest(ctx, log, strict):
    """Ingest a context-event log (defaults to the packaged fixture)."""
    store = bootstrap_store(ctx.obj["data_dir"], seed_fixture_events=log is None)
    if log is not None:
        report = store.ingest_event_docs(read_jsonl(log), strict=strict)
        click.echo(f"nodes_created={report.nodes_created} "
                   f"evidence_attached={report.evidence_attached} "
                   f"rejected={report.rejected}")
    click.echo(f"snapshot {store.current_snapshot_hash()}")


@main.command()
@click.option("--mode", type=click.Choice(["context_rich", "context_free"]),
              default="context_rich", show_default=True)
@click.option("--framework", "framework_path", type=click.Path(exists=True))
@click.option("--profiles", "profiles_path", type=click.Path(exists=True))
@click.option("--seed", type=int, default=None)
@click.pass_context
def episode(ctx, mode, framework_path, profiles_path, seed):
    """Run one decision episode and print the ranked recommendations."""
    store = bootstrap_store(ctx.obj["data_dir"], framework_path, profiles_path)
    ep = store.run_episode(mode=mode, seed=seed)
    _print_ranking(ep)


@main.command()
@click.pass_context
def rank(ctx):
    """Print the ranking of the most recent episode (runs one if none)."""
    store = bootstrap_store(ctx.obj["data_dir"])
    try:
        ep = store.latest_episode()
    except Exception:
        ep = store.run_episode()
    _print_ranking(ep)


@main.command()
@click.option("--human", default="CEO", show_default=True)
@click.option("--machine", default="context_rich", show_default=True)
@click.pass_context
def fit(ctx, human, machine):
    """Quantify alignment between a human evaluation and a machine run."""
    store = bootstrap_store(ctx.obj["data_dir"])
    evaluations = load_evaluations()
    if human not in evaluations:
        raise click.ClickException(f"no evaluation on file for {human!r}")
    ep = store.run_episode(mode=machine)
    report = fit_score(evaluations[human], episode_evaluation(ep))
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--left", default="context_rich", show_default=True)
@click.option("--right", default="context_free", show_default=True)
@click.pass_context
def compare(ctx, left, right):
    """Side-by-side rankings for two episode modes."""
    store = bootstrap_store(ctx.obj["data_dir"])
    left_eval = episode_evaluation(store.run_episode(mode=left))
    right_eval = episode_evaluation(store.run_episode(mode=right))
    click.echo(comparison_table(left_eval, right_eval))


@main.command()
@click.pass_context
def replay(ctx):
    """Verify the log checksum chain and print the replayed snapshot hash."""
    store = bootstrap_store(ctx.obj["data_dir"], seed_fixture_events=False)
    graph, config = replay_log(store.entries)
    from .graph import snapshot_hash
    click.echo(f"entries={len(store.entries)} snapshot={snapshot_hash(graph)} "
               f"config_version={config.version}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Serve the HTTP API over the store."""
    import uvicorn

    store = bootstrap_store(ctx.obj["data_dir"])
    app = create_app(store, evaluations=load_evaluations())
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
