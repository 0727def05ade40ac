"""Command-line surface: validate, plan, ingest, analyze, report, render.

The pipeline is file based: every command reads project files and writes
its outputs into ``--out``. Running ``ingest`` then ``analyze`` then
``report`` over intermediate files produces byte-identical results to the
one-shot ``report`` command. Exit codes: 0 success, 1 validation issues,
2 I/O or parse failure. Set ``FLOWKIT_LOG`` for diagnostics verbosity.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path
from typing import NoReturn

import click

from .builder import InvalidInput, TeamSpec, build_activity_map, build_target_map, validate_team
from .config import ConfigError, load_analysis_config, load_strategy, load_team
from .conformance import (
    ACCEPTANCE_TEMPLATE,
    SCHEDULE_TEMPLATE,
    STATUS_UPDATE_TEMPLATE,
    AnalysisConfig,
    analyze_acceptance,
    analyze_scheduled,
    analyze_status_update,
    project_days,
    result_to_dict,
    update_current_map,
    violation_to_dict,
)
from .events import events_from_jsonl, events_to_jsonl, merge_timeline
from .ingest import parse_call_log, parse_status_log, parse_vcs_log
from .model import map_from_json, map_to_json, parse_timestamp, validate_map
from .render import chart_svg, render_report, to_graph_description, yellow_pages_rows
from .report import (
    communication_timeline,
    compliance_chart,
    media_usage_duration,
    media_usage_frequency,
)
from .strategy import CommunicationStrategy, validate_strategy

log = logging.getLogger("flowkit")


def _setup_logging() -> None:
    level = os.environ.get("FLOWKIT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _fail_io(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_team_strategy(team_path: str, strategy_path: str) -> tuple[TeamSpec, CommunicationStrategy]:
    try:
        return load_team(team_path), load_strategy(strategy_path)
    except ConfigError as exc:
        _fail_io(str(exc))


def _load_config(config_path: str | None) -> AnalysisConfig:
    if config_path is None:
        return AnalysisConfig()
    try:
        return load_analysis_config(config_path)
    except ConfigError as exc:
        _fail_io(str(exc))


def _report_issues(issues) -> int:
    errors = 0
    for issue in issues:
        click.echo(f"{issue.severity}: {issue.code} [{issue.subject}] {issue.message}", err=True)
        if issue.severity == "error":
            errors += 1
    return errors


def _out_dir(out: str) -> Path:
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail_io(f"cannot create output directory {out!r}: {exc}")
    return path


def _read_lines(path: str) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        _fail_io(f"cannot read {path!r}: {exc}")


def _ingest_streams(
    team: TeamSpec,
    status_logs: tuple[str, ...],
    vcs_logs: tuple[str, ...],
    call_logs: tuple[str, ...],
    event_files: tuple[str, ...],
    chat_burst: int | None,
):
    streams = []
    all_issues = []
    for path in status_logs:
        events, issues = parse_status_log(_read_lines(path), source=path, team=team)
        streams.append(events)
        all_issues.extend(issues)
    for path in vcs_logs:
        events, issues = parse_vcs_log(_read_lines(path), source=path, team=team)
        streams.append(events)
        all_issues.extend(issues)
    for path in call_logs:
        events, issues = parse_call_log(
            _read_lines(path), source=path, team=team, chat_burst_minutes=chat_burst
        )
        streams.append(events)
        all_issues.extend(issues)
    for path in event_files:
        try:
            streams.append(events_from_jsonl(Path(path).read_text(encoding="utf-8")))
        except OSError as exc:
            _fail_io(f"cannot read {path!r}: {exc}")
        except (ValueError, KeyError) as exc:
            _fail_io(f"{path}: bad event record: {exc}")
    for issue in all_issues:
        click.echo(
            f"{issue.severity}: {issue.source}:{issue.line_no}: {issue.message}", err=True
        )
    timeline = merge_timeline(streams)
    log.debug("ingested %d events from %d streams (%d parse issues)",
              len(timeline), len(streams), len(all_issues))
    return timeline


def _analyze_all(timeline, team, strategy, config):
    status_result, status_violations = analyze_status_update(timeline, team, config)
    acceptance_result, acceptance_violations = analyze_acceptance(timeline, config)
    schedule_result, schedule_violations = analyze_scheduled(timeline, strategy, config)
    results = [status_result, acceptance_result, schedule_result]
    violations = status_violations + acceptance_violations + schedule_violations
    for result in results:
        log.debug("%s: %d ok / %d temporal / %d qualitative",
                  result.activity_id, result.ok, result.temporal, result.qualitative)
    return results, violations


def _write_analysis(out: Path, results, violations) -> None:
    compliance_doc = {"results": [result_to_dict(r) for r in results]}
    (out / "compliance.json").write_text(
        json.dumps(compliance_doc, indent=2) + "\n", encoding="utf-8"
    )
    lines = "".join(json.dumps(violation_to_dict(v), sort_keys=True) + "\n" for v in violations)
    (out / "violations.jsonl").write_text(lines, encoding="utf-8")


_team_option = click.option("--team", "team_path", type=str, help="Team declaration file.")
_strategy_option = click.option(
    "--strategy", "strategy_path", type=str, help="Communication strategy file."
)
_config_option = click.option("--config", "config_path", type=str, default=None,
                              help="Analysis configuration file.")
_out_option = click.option("--out", default="out", show_default=True,
                           help="Output directory.")
_events_option = click.option("--events", "event_files", multiple=True, type=str,
                              help="Normalized JSONL event file (repeatable).")
_status_log_option = click.option("--status-log", "status_logs", multiple=True, type=str,
                                  help="Raw status log (repeatable).")
_vcs_log_option = click.option("--vcs-log", "vcs_logs", multiple=True, type=str,
                               help="Raw version-control log (repeatable).")
_call_log_option = click.option("--call-log", "call_logs", multiple=True, type=str,
                                help="Raw call/chat export (repeatable).")
_chat_burst_option = click.option("--chat-burst", "chat_burst", type=int, default=None,
                                  help="Collapse chat bursts within this many minutes.")


@click.group()
@click.version_option()
def main() -> None:
    """Plan and manage distributed-team communication."""
    _setup_logging()


@main.command()
@click.argument("team_arg", required=False)
@click.argument("strategy_arg", required=False)
@_team_option
@_strategy_option
def validate(team_arg, strategy_arg, team_path, strategy_path) -> None:
    """Check a team and strategy; exit 1 when invariants are broken."""
    team_file = team_arg or team_path
    strategy_file = strategy_arg or strategy_path
    if not team_file or not strategy_file:
        _fail_io("validate needs a team file and a strategy file")
    team, strategy = _load_team_strategy(team_file, strategy_file)
    errors = _report_issues(validate_strategy(strategy))
    errors += _report_issues(validate_team(team, strategy))
    if errors:
        click.echo(f"{errors} error(s) found", err=True)
        sys.exit(1)
    click.echo("ok")


@main.command()
@_team_option
@_strategy_option
@_out_option
def plan(team_path, strategy_path, out) -> None:
    """Build the target map and one map per activity."""
    if not team_path or not strategy_path:
        _fail_io("plan needs --team and --strategy")
    team, strategy = _load_team_strategy(team_path, strategy_path)
    out_path = _out_dir(out)
    try:
        target = build_target_map(team, strategy)
    except InvalidInput as exc:
        _report_issues(exc.issues)
        sys.exit(1)
    (out_path / "target_map.json").write_text(map_to_json(target), encoding="utf-8")
    (out_path / "target_map.dot").write_text(
        to_graph_description(target, strategy.catalog), encoding="utf-8"
    )
    for activity in strategy.activities:
        assignment = strategy.assignment_for(activity.id)
        if assignment is None:
            continue
        activity_map = build_activity_map(activity, assignment, team)
        (out_path / f"activity_{activity.id}.json").write_text(
            map_to_json(activity_map), encoding="utf-8"
        )
        (out_path / f"activity_{activity.id}.dot").write_text(
            to_graph_description(activity_map, strategy.catalog), encoding="utf-8"
        )
    click.echo(f"wrote target map and {len(strategy.activities)} activity maps to {out}")


@main.command()
@_team_option
@_status_log_option
@_vcs_log_option
@_call_log_option
@_chat_burst_option
@_events_option
@_out_option
def ingest(team_path, status_logs, vcs_logs, call_logs, chat_burst, event_files, out) -> None:
    """Normalize raw logs into one merged JSONL timeline."""
    if not team_path:
        _fail_io("ingest needs --team to resolve people")
    try:
        team = load_team(team_path)
    except ConfigError as exc:
        _fail_io(str(exc))
    timeline = _ingest_streams(team, status_logs, vcs_logs, call_logs, event_files, chat_burst)
    out_path = _out_dir(out)
    (out_path / "events.jsonl").write_text(events_to_jsonl(timeline), encoding="utf-8")
    click.echo(f"wrote {len(timeline)} events to {out}/events.jsonl")


@main.command()
@_team_option
@_strategy_option
@_events_option
@_config_option
@_out_option
def analyze(team_path, strategy_path, event_files, config_path, out) -> None:
    """Run the three conformance analyzers over a normalized timeline."""
    if not team_path or not strategy_path:
        _fail_io("analyze needs --team and --strategy")
    if not event_files:
        _fail_io("analyze needs at least one --events file")
    team, strategy = _load_team_strategy(team_path, strategy_path)
    config = _load_config(config_path)
    timeline = _ingest_streams(team, (), (), (), event_files, None)
    results, violations = _analyze_all(timeline, team, strategy, config)
    out_path = _out_dir(out)
    _write_analysis(out_path, results, violations)
    for result in results:
        click.echo(
            f"{result.activity_id}: {result.compliance_pct}% ok, "
            f"{result.temporal_pct}% temporal, {result.qualitative_pct}% qualitative"
        )


@main.command()
@_team_option
@_strategy_option
@_status_log_option
@_vcs_log_option
@_call_log_option
@_chat_burst_option
@_events_option
@_config_option
@click.option("--as-of", "as_of", type=str, default=None,
              help="Timestamp for the current-map snapshot (default: last event).")
@_out_option
def report(team_path, strategy_path, status_logs, vcs_logs, call_logs, chat_burst,
           event_files, config_path, as_of, out) -> None:
    """Full pipeline: ingest, analyze, update map, render HTML report."""
    if not team_path or not strategy_path:
        _fail_io("report needs --team and --strategy")
    team, strategy = _load_team_strategy(team_path, strategy_path)
    config = _load_config(config_path)
    timeline = _ingest_streams(team, status_logs, vcs_logs, call_logs, event_files, chat_burst)
    out_path = _out_dir(out)
    (out_path / "events.jsonl").write_text(events_to_jsonl(timeline), encoding="utf-8")

    results, violations = _analyze_all(timeline, team, strategy, config)
    _write_analysis(out_path, results, violations)

    try:
        target = build_target_map(team, strategy)
    except InvalidInput as exc:
        _report_issues(exc.issues)
        sys.exit(1)
    if as_of is not None:
        try:
            snapshot_at = parse_timestamp(as_of)
        except ValueError as exc:
            _fail_io(f"bad --as-of timestamp: {exc}")
    elif timeline:
        snapshot_at = max(e.start for e in timeline)
    else:
        snapshot_at = None
    current = update_current_map(target, timeline, snapshot_at) if snapshot_at else target
    current_issues = validate_map(current)
    if current_issues:
        _report_issues(current_issues)
        map_text = to_graph_description(target, strategy.catalog)
    else:
        map_text = to_graph_description(current, strategy.catalog)
    (out_path / "current_map.dot").write_text(map_text, encoding="utf-8")
    (out_path / "target_map.dot").write_text(
        to_graph_description(target, strategy.catalog), encoding="utf-8"
    )

    dev_count = sum(1 for p in team.persons if "developer" in p.roles) or len(team.persons) or 1
    day_count = len(project_days(config, timeline)) or 1
    status_result = results[0]
    charts = [
        media_usage_frequency(timeline, strategy.catalog),
        media_usage_duration(timeline, dev_count, day_count, strategy.catalog),
        communication_timeline(timeline),
        compliance_chart(status_result),
    ]
    chart_files = ["frequency.svg", "duration.svg", "timeline.svg", "compliance.svg"]
    for chart, filename in zip(charts, chart_files):
        (out_path / filename).write_text(chart_svg(chart) + "\n", encoding="utf-8")
        (out_path / filename.replace(".svg", ".json")).write_text(
            json.dumps(chart.to_dict(), indent=2) + "\n", encoding="utf-8"
        )

    html_text = render_report(
        charts,
        results,
        map_text,
        yellow_pages_rows(current if not current_issues else target),
        violations,
        title="Communication report",
        templates=(STATUS_UPDATE_TEMPLATE, ACCEPTANCE_TEMPLATE, SCHEDULE_TEMPLATE),
    )
    (out_path / "report.html").write_text(html_text, encoding="utf-8")
    click.echo(f"wrote report.html and charts to {out}")


@main.command("render")
@click.option("--map", "map_path", type=str, required=True, help="Flow map JSON file.")
@_strategy_option
@click.option("--out", default=None,
              help="Output directory for the .dot file (default: stdout).")
def render_cmd(map_path, strategy_path, out) -> None:
    """Render a stored flow map as graph-description text."""
    try:
        flow_map = map_from_json(Path(map_path).read_text(encoding="utf-8"))
    except OSError as exc:
        _fail_io(f"cannot read {map_path!r}: {exc}")
    except (ValueError, KeyError) as exc:
        _fail_io(f"{map_path}: bad map JSON: {exc}")
    catalog = ()
    if strategy_path:
        try:
            catalog = load_strategy(strategy_path).catalog
        except ConfigError as exc:
            _fail_io(str(exc))
    issues = validate_map(flow_map)
    if issues:
        _report_issues(issues)
        sys.exit(1)
    text = to_graph_description(flow_map, catalog)
    if out is None:
        click.echo(text, nl=False)
    else:
        target = _out_dir(out) / (Path(map_path).stem + ".dot")
        target.write_text(text, encoding="utf-8")
        click.echo(f"wrote {target}")


if __name__ == "__main__":
    main()
