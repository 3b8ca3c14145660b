"""Verification report shared by all certification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    name: str
    passed: bool
    margin: int | None = None
    err_deg: int | None = None
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        m = "" if self.margin is None else f" margin={self.margin}"
        e = "" if self.err_deg is None else f" err={self.err_deg}"
        return f"{status} {self.name}{m}{e}"

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "err_deg": self.err_deg,
            "details": self.details,
        }


def compare_report(name, lhs, rhs, err=None, **details) -> VerificationReport:
    """Certify lhs == rhs within precision; margin as in LaurentNumber.margin."""
    agree, margin = lhs.margin(rhs)
    e = err if err is not None else (lhs - rhs).err
    return VerificationReport(name, agree, margin, e, details)
