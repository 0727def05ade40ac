"""flowkit: plan and manage distributed-team communication.

Declare a team and a communication strategy in TOML, compile them into
flow maps, ingest raw communication logs into a normalized timeline,
check conformance against the strategy, and render compliance reports.
"""

__version__ = "0.1.0"

from .model import (
    FlowDirection,
    FlowMap,
    FlowStrength,
    InformationState,
    Issue,
    MapKind,
    SolidityCriteria,
    classify_state,
    validate_map,
)
from .strategy import (
    CommunicationActivity,
    CommunicationStrategy,
    Medium,
    MediumAssignment,
    choose_medium,
    rank_media,
    validate_strategy,
)
from .builder import TeamSpec, build_activity_map, build_target_map, flow_width, validate_team
from .events import CommEvent, EventKind, merge_timeline
from .conformance import (
    AnalysisConfig,
    ComplianceResult,
    analyze_acceptance,
    analyze_scheduled,
    analyze_status_update,
    compliance,
    update_current_map,
)
from .report import (
    communication_timeline,
    compliance_chart,
    media_usage_duration,
    media_usage_frequency,
)
from .render import render_report, to_graph_description

__all__ = [
    "AnalysisConfig",
    "CommEvent",
    "CommunicationActivity",
    "CommunicationStrategy",
    "ComplianceResult",
    "EventKind",
    "FlowDirection",
    "FlowMap",
    "FlowStrength",
    "InformationState",
    "Issue",
    "MapKind",
    "Medium",
    "MediumAssignment",
    "SolidityCriteria",
    "TeamSpec",
    "analyze_acceptance",
    "analyze_scheduled",
    "analyze_status_update",
    "build_activity_map",
    "build_target_map",
    "choose_medium",
    "classify_state",
    "communication_timeline",
    "compliance",
    "compliance_chart",
    "flow_width",
    "media_usage_duration",
    "media_usage_frequency",
    "merge_timeline",
    "rank_media",
    "render_report",
    "to_graph_description",
    "update_current_map",
    "validate_map",
    "validate_strategy",
    "validate_team",
]
