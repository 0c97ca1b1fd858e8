"""The guided 5-step inspection workflow and rule-based conformity engine.

A session walks a fixed state machine:

    Created -> ProductScanned -> DefectIdentified -> SeverityAssessed
            -> MeasurementLogged -> SuggestionIssued -> DecisionRecorded

with two self-loops: a defect may be re-identified before assessment and
measurements may be logged repeatedly. Every transition is appended to
an event sink (JSON-lines log in the service), so sessions recover by
replay.

Conformity suggestions use first-match-by-priority semantics over the
latest measurement per metric: the lowest-priority-number rule whose
predicate holds decides the action; no match yields Review. The
operator always has the final word, but a decision that contradicts the
suggestion requires an override comment — a forced rationale is new
knowledge, not friction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Optional

from .errors import (
    DuplicatePriority,
    EmptyProductId,
    IllegalTransition,
    InvalidRule,
    NonFiniteValue,
    OverrideCommentRequired,
    UnknownDefect,
    UnknownMedia,
    UnknownSession,
)
from .graph import NodeKind, PropertyGraph
from .media import MediaStore


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionState(str, Enum):
    CREATED = "Created"
    PRODUCT_SCANNED = "ProductScanned"
    DEFECT_IDENTIFIED = "DefectIdentified"
    SEVERITY_ASSESSED = "SeverityAssessed"
    MEASUREMENT_LOGGED = "MeasurementLogged"
    SUGGESTION_ISSUED = "SuggestionIssued"
    DECISION_RECORDED = "DecisionRecorded"


class Decision(str, Enum):
    CONFORM = "Conform"
    SCRAP = "Scrap"
    REWORK = "Rework"


class RuleAction(str, Enum):
    CONFORM = "Conform"
    SCRAP = "Scrap"
    REVIEW = "Review"


class RuleOp(str, Enum):
    LE = "LE"
    LT = "LT"
    GE = "GE"
    GT = "GT"
    EQ = "EQ"
    BETWEEN = "BETWEEN"


@dataclass(frozen=True)
class ConformityRule:
    rule_id: str
    defect_id: str
    metric: str
    op: RuleOp
    threshold: float | tuple[float, float] | list[float]
    action: RuleAction
    priority: int

    def __post_init__(self) -> None:
        if not self.metric:
            raise InvalidRule("rule metric must be nonempty")
        if self.op is RuleOp.BETWEEN:
            bounds = self.bounds()
            if bounds[0] > bounds[1]:
                raise InvalidRule(f"BETWEEN bounds out of order: {bounds}")
        else:
            value = self.scalar_threshold()
            if not math.isfinite(value):
                raise InvalidRule("threshold must be finite")

    def scalar_threshold(self) -> float:
        if isinstance(self.threshold, (tuple, list)):
            raise InvalidRule(f"{self.op.value} takes a single threshold")
        return float(self.threshold)

    def bounds(self) -> tuple[float, float]:
        if not isinstance(self.threshold, (tuple, list)) or len(self.threshold) != 2:
            raise InvalidRule("BETWEEN takes [low, high]")
        return float(self.threshold[0]), float(self.threshold[1])

    def matches(self, value: float) -> bool:
        if self.op is RuleOp.LE:
            return value <= self.scalar_threshold()
        if self.op is RuleOp.LT:
            return value < self.scalar_threshold()
        if self.op is RuleOp.GE:
            return value >= self.scalar_threshold()
        if self.op is RuleOp.GT:
            return value > self.scalar_threshold()
        if self.op is RuleOp.EQ:
            return value == self.scalar_threshold()
        low, high = self.bounds()
        return low <= value <= high

    def to_dict(self) -> dict:
        threshold = list(self.threshold) if isinstance(self.threshold, (tuple, list)) else self.threshold
        return {"rule_id": self.rule_id, "defect_id": self.defect_id, "metric": self.metric,
                "op": self.op.value, "threshold": threshold, "action": self.action.value,
                "priority": self.priority}

    @classmethod
    def from_dict(cls, d: dict) -> "ConformityRule":
        return cls(rule_id=d["rule_id"], defect_id=d["defect_id"], metric=d["metric"],
                   op=RuleOp(d["op"]), threshold=d["threshold"],
                   action=RuleAction(d["action"]), priority=d["priority"])


@dataclass(frozen=True)
class Suggestion:
    action: RuleAction
    matched_rule_id: Optional[str]
    explanation: str

    def to_dict(self) -> dict:
        return {"action": self.action.value, "matched_rule_id": self.matched_rule_id,
                "explanation": self.explanation}


class RuleBook:
    """Per-defect conformity rules, evaluated in ascending priority."""

    def __init__(self) -> None:
        self._rules: dict[tuple[str, int], ConformityRule] = {}

    def register(self, rule: ConformityRule) -> None:
        key = (rule.defect_id, rule.priority)
        existing = self._rules.get(key)
        if existing is not None:
            if existing == rule:
                return
            raise DuplicatePriority(
                f"defect {rule.defect_id!r} already has a different rule at priority {rule.priority}")
        self._rules[key] = rule

    def rules_for(self, defect_id: str) -> list[ConformityRule]:
        return sorted((r for r in self._rules.values() if r.defect_id == defect_id),
                      key=lambda r: r.priority)

    def all_rules(self) -> list[ConformityRule]:
        return sorted(self._rules.values(), key=lambda r: (r.defect_id, r.priority))

    def evaluate(self, defect_id: str, latest_by_metric: dict[str, float]) -> Suggestion:
        for rule in self.rules_for(defect_id):
            value = latest_by_metric.get(rule.metric)
            if value is not None and rule.matches(value):
                return Suggestion(
                    action=rule.action,
                    matched_rule_id=rule.rule_id,
                    explanation=(f"rule {rule.rule_id}: {rule.metric} {rule.op.value} "
                                 f"{rule.threshold} -> {rule.action.value}"),
                )
        return Suggestion(action=RuleAction.REVIEW, matched_rule_id=None,
                          explanation="no rule matched")

    def to_list(self) -> list[dict]:
        return [r.to_dict() for r in self.all_rules()]

    @classmethod
    def from_list(cls, rules: list[dict]) -> "RuleBook":
        book = cls()
        for d in rules:
            book.register(ConformityRule.from_dict(d))
        return book


@dataclass
class MeasurementRecord:
    measurement_id: str
    defect_id: str
    metric: str
    value: float
    unit: str
    commentary_media_id: Optional[str]
    created_at: str

    def to_dict(self) -> dict:
        return {"measurement_id": self.measurement_id, "defect_id": self.defect_id,
                "metric": self.metric, "value": self.value, "unit": self.unit,
                "commentary_media_id": self.commentary_media_id, "created_at": self.created_at}


@dataclass
class InspectionSession:
    session_id: str
    product_id: str
    operator_id: str
    state: SessionState
    defect_id: Optional[str] = None
    measurements: list[MeasurementRecord] = field(default_factory=list)
    suggestion: Optional[Suggestion] = None
    decision: Optional[Decision] = None
    override_comment: Optional[str] = None
    history: list[tuple[str, str]] = field(default_factory=list)  # (state, timestamp)

    def latest_by_metric(self) -> dict[str, float]:
        latest = {}
        for record in self.measurements:
            latest[record.metric] = record.value
        return latest

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "product_id": self.product_id,
            "operator_id": self.operator_id,
            "state": self.state.value,
            "defect_id": self.defect_id,
            "measurements": [m.to_dict() for m in self.measurements],
            "suggestion": self.suggestion.to_dict() if self.suggestion else None,
            "decision": self.decision.value if self.decision else None,
            "override_comment": self.override_comment,
            "history": [list(h) for h in self.history],
        }


@dataclass
class AssessmentInfo:
    session: InspectionSession
    instruction: str
    guide_media_ids: list[str]
    missing_instruction: bool


EventSink = Callable[[dict], None]


class WorkflowEngine:
    """Owns all inspection sessions; every mutation goes through here."""

    def __init__(self, graph: PropertyGraph, media: MediaStore, rules: RuleBook,
                 clock: Callable[[], str] = _utc_now,
                 event_sink: Optional[EventSink] = None) -> None:
        self.graph = graph
        self.media = media
        self.rules = rules
        self._clock = clock
        self._sink = event_sink
        self._sessions: dict[str, InspectionSession] = {}
        self._counter = 0

    # --- access -------------------------------------------------------------

    def get_session(self, session_id: str) -> InspectionSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def sessions(self) -> list[InspectionSession]:
        return list(self._sessions.values())

    def __len__(self) -> int:
        return len(self._sessions)

    # --- transitions ------------------------------------------------------------

    def _emit(self, event: dict) -> None:
        if self._sink is not None:
            self._sink(event)

    def _advance(self, session: InspectionSession, state: SessionState, ts: str) -> None:
        session.state = state
        session.history.append((state.value, ts))

    def start_session(self, product_id: str, operator_id: str) -> InspectionSession:
        if not product_id:
            raise EmptyProductId("product id must be nonempty")
        self._counter += 1
        session_id = f"s-{self._counter:06d}"
        ts = self._clock()
        session = InspectionSession(session_id=session_id, product_id=product_id,
                                    operator_id=operator_id, state=SessionState.CREATED)
        self._advance(session, SessionState.PRODUCT_SCANNED, ts)
        self._sessions[session_id] = session
        self._emit({"event": "session_started", "session_id": session_id,
                    "product_id": product_id, "operator_id": operator_id, "ts": ts})
        return session

    def attach_defect(self, session_id: str, defect_id: str) -> InspectionSession:
        session = self.get_session(session_id)
        if session.state not in (SessionState.PRODUCT_SCANNED, SessionState.DEFECT_IDENTIFIED):
            raise IllegalTransition(f"cannot attach defect in state {session.state.value}")
        if not self.graph.has_node(defect_id) or self.graph.get_node(defect_id).kind is not NodeKind.DEFECT:
            raise UnknownDefect(defect_id)
        ts = self._clock()
        session.defect_id = defect_id
        self._advance(session, SessionState.DEFECT_IDENTIFIED, ts)
        self._emit({"event": "defect_attached", "session_id": session_id,
                    "defect_id": defect_id, "ts": ts})
        return session

    def mark_assessed(self, session_id: str) -> AssessmentInfo:
        session = self.get_session(session_id)
        if session.state is not SessionState.DEFECT_IDENTIFIED:
            raise IllegalTransition(f"cannot assess in state {session.state.value}")
        ts = self._clock()
        self._advance(session, SessionState.SEVERITY_ASSESSED, ts)
        defect = self.graph.get_node(session.defect_id)
        instruction = str(defect.props.get("measurement_instruction", ""))
        guides = [n.id for n in self.graph.neighbors(defect.id, rel_filter="has_image")]
        self._emit({"event": "assessed", "session_id": session_id, "ts": ts})
        return AssessmentInfo(session=session, instruction=instruction,
                              guide_media_ids=guides,
                              missing_instruction=not instruction)

    def log_measurement(self, session_id: str, metric: str, value: float, unit: str,
                        commentary_media_id: Optional[str] = None) -> MeasurementRecord:
        session = self.get_session(session_id)
        if session.state not in (SessionState.SEVERITY_ASSESSED, SessionState.MEASUREMENT_LOGGED):
            raise IllegalTransition(f"cannot log measurement in state {session.state.value}")
        if not metric:
            raise NonFiniteValue("metric must be nonempty")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            raise NonFiniteValue(f"measurement value must be finite, got {value!r}")
        if commentary_media_id is not None and not self.media.contains(commentary_media_id):
            raise UnknownMedia(commentary_media_id)
        ts = self._clock()
        record = MeasurementRecord(
            measurement_id=f"{session_id}-m{len(session.measurements) + 1}",
            defect_id=session.defect_id or "", metric=metric, value=float(value),
            unit=unit, commentary_media_id=commentary_media_id, created_at=ts)
        session.measurements.append(record)
        self._advance(session, SessionState.MEASUREMENT_LOGGED, ts)
        self._emit({"event": "measurement_logged", "session_id": session_id,
                    "measurement_id": record.measurement_id, "metric": metric,
                    "value": record.value, "unit": unit,
                    "commentary_media_id": commentary_media_id, "ts": ts})
        return record

    def evaluate_conformity(self, session_id: str) -> Suggestion:
        session = self.get_session(session_id)
        if session.state is not SessionState.MEASUREMENT_LOGGED:
            raise IllegalTransition(f"cannot evaluate in state {session.state.value}")
        ts = self._clock()
        suggestion = self.rules.evaluate(session.defect_id or "", session.latest_by_metric())
        session.suggestion = suggestion
        self._advance(session, SessionState.SUGGESTION_ISSUED, ts)
        self._emit({"event": "suggestion_issued", "session_id": session_id,
                    "action": suggestion.action.value,
                    "matched_rule_id": suggestion.matched_rule_id,
                    "explanation": suggestion.explanation, "ts": ts})
        return suggestion

    def record_decision(self, session_id: str, decision: Decision,
                        override_comment: Optional[str] = None) -> InspectionSession:
        session = self.get_session(session_id)
        if session.state is not SessionState.SUGGESTION_ISSUED:
            raise IllegalTransition(f"cannot record decision in state {session.state.value}")
        decision = Decision(decision)
        assert session.suggestion is not None
        differs = decision.value != session.suggestion.action.value
        if differs and not (override_comment or "").strip():
            raise OverrideCommentRequired(
                f"decision {decision.value} contradicts suggestion "
                f"{session.suggestion.action.value}; an override comment is required")
        ts = self._clock()
        session.decision = decision
        session.override_comment = override_comment if differs else None
        self._advance(session, SessionState.DECISION_RECORDED, ts)
        self._emit({"event": "decision_recorded", "session_id": session_id,
                    "decision": decision.value, "override_comment": session.override_comment,
                    "ts": ts})
        return session

    # --- replay --------------------------------------------------------------

    def apply_event(self, event: dict) -> None:
        """Rebuild state from a logged event without re-emitting or re-deciding.

        Replay trusts the log: the suggestion is applied verbatim rather
        than re-evaluated (the rule set may have changed since), but state
        changes go through the same transition bookkeeping.
        """
        kind = event["event"]
        if kind not in ("session_started", "defect_attached", "assessed",
                        "measurement_logged", "suggestion_issued", "decision_recorded"):
            raise ValueError(f"unknown event type {kind!r}")
        ts = event["ts"]
        if kind == "session_started":
            session = InspectionSession(
                session_id=event["session_id"], product_id=event["product_id"],
                operator_id=event["operator_id"], state=SessionState.CREATED)
            self._advance(session, SessionState.PRODUCT_SCANNED, ts)
            self._sessions[session.session_id] = session
            suffix = event["session_id"].rsplit("-", 1)[-1]
            if suffix.isdigit():
                self._counter = max(self._counter, int(suffix))
            return
        session = self.get_session(event["session_id"])
        if kind == "defect_attached":
            session.defect_id = event["defect_id"]
            self._advance(session, SessionState.DEFECT_IDENTIFIED, ts)
        elif kind == "assessed":
            self._advance(session, SessionState.SEVERITY_ASSESSED, ts)
        elif kind == "measurement_logged":
            session.measurements.append(MeasurementRecord(
                measurement_id=event["measurement_id"], defect_id=session.defect_id or "",
                metric=event["metric"], value=event["value"], unit=event["unit"],
                commentary_media_id=event.get("commentary_media_id"), created_at=ts))
            self._advance(session, SessionState.MEASUREMENT_LOGGED, ts)
        elif kind == "suggestion_issued":
            session.suggestion = Suggestion(action=RuleAction(event["action"]),
                                            matched_rule_id=event.get("matched_rule_id"),
                                            explanation=event.get("explanation", ""))
            self._advance(session, SessionState.SUGGESTION_ISSUED, ts)
        elif kind == "decision_recorded":
            session.decision = Decision(event["decision"])
            session.override_comment = event.get("override_comment")
            self._advance(session, SessionState.DECISION_RECORDED, ts)
