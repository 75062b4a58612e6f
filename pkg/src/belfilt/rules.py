"""Per-frame fusion of parameter evidence through logic-rule trees.

An action's rule is a tree of AND/OR nodes over parameter leaves.  Leaves
are discounted by their per-frame reliability before combination; AND maps
to the conjunctive rule, OR to the disjunctive rule.  Folds run left to
right so results are bit-reproducible (both rules are associative, so the
order is semantically irrelevant).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Union

from .errors import AlphaOutOfRangeError, ConfigError, FrameMismatchError, MissingParameterError
from .masses import MassDistribution, combine_conjunctive, combine_disjunctive, discount


@dataclass(frozen=True)
class Leaf:
    param: str


@dataclass(frozen=True)
class And:
    children: tuple["RuleExpr", ...]

    def __post_init__(self) -> None:
        _check_children(self.children, "and")


@dataclass(frozen=True)
class Or:
    children: tuple["RuleExpr", ...]

    def __post_init__(self) -> None:
        _check_children(self.children, "or")


RuleExpr = Union[Leaf, And, Or]


def _check_children(children, kind: str) -> None:
    if len(children) < 2:
        raise ConfigError(f"'{kind}' nodes need at least 2 children, got {len(children)}")
    for child in children:
        if not isinstance(child, (Leaf, And, Or)):
            raise ConfigError(f"invalid rule node {child!r}")


def rule_from_json(obj) -> RuleExpr:
    """Parse ``{"param": p}`` / ``{"and": [...]}`` / ``{"or": [...]}``,
    nested arbitrarily."""
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ConfigError(f"rule node must be a single-key object, got {obj!r}")
    (key, value), = obj.items()
    if key == "param":
        if not isinstance(value, str):
            raise ConfigError(f"'param' must name a parameter, got {value!r}")
        return Leaf(value)
    if key in ("and", "or"):
        if not isinstance(value, list):
            raise ConfigError(f"'{key}' must hold a list of rule nodes")
        children = tuple(rule_from_json(child) for child in value)
        return And(children) if key == "and" else Or(children)
    raise ConfigError(f"unknown rule node kind {key!r}")


def rule_to_json(rule: RuleExpr) -> dict:
    if isinstance(rule, Leaf):
        return {"param": rule.param}
    key = "and" if isinstance(rule, And) else "or"
    return {key: [rule_to_json(child) for child in rule.children]}


def rule_params(rule: RuleExpr) -> set[str]:
    """Parameter ids referenced anywhere in the tree."""
    if isinstance(rule, Leaf):
        return {rule.param}
    out: set[str] = set()
    for child in rule.children:
        out |= rule_params(child)
    return out


@dataclass(frozen=True)
class FrameEvidence:
    """One frame's evidence: per parameter, a mass on the action frame and
    a reliability coefficient in [0, 1]."""

    items: Mapping[str, tuple[MassDistribution, float]]

    def __post_init__(self) -> None:
        items = dict(self.items)
        object.__setattr__(self, "items", items)
        frame = None
        for pid, (mass, alpha) in items.items():
            if not 0.0 <= float(alpha) <= 1.0:
                raise AlphaOutOfRangeError(f"reliability of {pid!r} is {alpha!r}")
            if frame is None:
                frame = mass.frame
            elif mass.frame != frame:
                raise FrameMismatchError(f"evidence for {pid!r} sits on a different frame")

    def mass(self, pid: str) -> MassDistribution:
        return self._get(pid)[0]

    def alpha(self, pid: str) -> float:
        return self._get(pid)[1]

    def _get(self, pid: str) -> tuple[MassDistribution, float]:
        try:
            return self.items[pid]
        except KeyError:
            raise MissingParameterError(f"no evidence for parameter {pid!r}") from None


def evaluate_rule(rule: RuleExpr, evidence: FrameEvidence) -> MassDistribution:
    """Fold the tree: discounted leaf masses combined conjunctively under
    AND and disjunctively under OR."""
    if isinstance(rule, Leaf):
        return discount(evidence.mass(rule.param), evidence.alpha(rule.param))
    results = [evaluate_rule(child, evidence) for child in rule.children]
    op = combine_conjunctive if isinstance(rule, And) else combine_disjunctive
    return reduce(op, results)


def fuse_frame(rules: Mapping[str, RuleExpr], evidence: FrameEvidence) -> dict[str, MassDistribution]:
    """Evaluate every action's rule independently on the same evidence."""
    return {action: evaluate_rule(rule, evidence) for action, rule in rules.items()}
