"""
Cross-field checks on a RunConfig.

Structural rules (types, ranges, unknown keys) live in the JSON schema;
this validator covers the rules that relate several fields.
"""
from typing import List

from src.config import RunConfig
from src.models.results import Severity, ValidationIssue, ValidationResult
from src.validators.base import BaseValidator


class ConfigValidator(BaseValidator):
    """Semantic validation of a loaded RunConfig."""

    def validate(self, target: RunConfig) -> ValidationResult:
        issues: List[ValidationIssue] = []
        issues.extend(self._check_gripper(target))
        issues.extend(self._check_evaluation(target))
        issues.extend(self._check_dataset(target))
        issues.extend(self._check_unit_vector(target.pipeline.support_normal,
                                              "pipeline.support_normal", "pipeline"))
        issues.extend(self._check_friction(target))
        return self._result(target.source, issues)

    def _check_gripper(self, cfg: RunConfig) -> List[ValidationIssue]:
        g = cfg.gripper
        issues = self._check_less_than(g.finger_thickness, g.g_w,
                                       "gripper.finger_thickness", "gripper.g_w", "gripper")
        issues += self._check_less_than(g.palm_clearance, g.finger_depth,
                                        "gripper.palm_clearance", "gripper.finger_depth",
                                        "gripper")
        return issues

    def _check_evaluation(self, cfg: RunConfig) -> List[ValidationIssue]:
        e = cfg.evaluation
        issues = self._check_less_than(e.top_k, e.top_m, "evaluation.top_k",
                                       "evaluation.top_m", "evaluation")
        if e.top_m > e.res_u * e.res_v:
            issues.append(ValidationIssue(
                severity=Severity.ERROR,
                category="evaluation",
                message=f"evaluation.top_m ({e.top_m}) exceeds the "
                        f"{e.res_u}x{e.res_v} grid size",
                key_path="evaluation.top_m",
                suggestion="Lower top_m or refine the evaluation grid"
            ))
        return issues

    def _check_dataset(self, cfg: RunConfig) -> List[ValidationIssue]:
        d = cfg.dataset
        issues = []
        if d.length_min > d.length_max:
            issues += self._check_less_than(d.length_min, d.length_max, "dataset.length_min",
                                            "dataset.length_max", "dataset")
        if d.delta_min > d.delta_max:
            issues += self._check_less_than(d.delta_min, d.delta_max, "dataset.delta_min",
                                            "dataset.delta_max", "dataset")
        if d.delta_max >= d.length_min:
            issues.append(ValidationIssue(
                severity=Severity.ERROR,
                category="dataset",
                message="dataset.delta_max must be smaller than dataset.length_min "
                        "so every face keeps a positive length",
                key_path="dataset.delta_max"
            ))
        if d.width > cfg.gripper.g_w:
            issues.append(ValidationIssue(
                severity=Severity.WARNING,
                category="dataset",
                message=f"training cuboid width {d.width} exceeds gripper.g_w {cfg.gripper.g_w}",
                key_path="dataset.width"
            ))
        return issues

    def _check_friction(self, cfg: RunConfig) -> List[ValidationIssue]:
        f = cfg.friction
        if f.mu_std > 0 and f.n_samples == 1:
            return [ValidationIssue(
                severity=Severity.INFO,
                category="friction",
                message="a single friction draw ignores friction.mu_std",
                key_path="friction.n_samples"
            )]
        return []
