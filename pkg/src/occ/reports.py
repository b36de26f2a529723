"""Small pass/fail report objects shared by the checking entry points."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    detail: str = ""
    expected: str = ""
    actual: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        tail = f": {self.detail}" if self.detail else ""
        return f"{status} {self.name}{tail}"

    def to_json_obj(self):
        return {
            "item": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Report:
    title: str
    items: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return all(i.passed for i in self.items)

    def lines(self):
        out = [f"== {self.title} =="]
        out.extend(i.line() for i in self.items)
        out.append(f"{'OK' if self.passed else 'FAILED'} ({sum(i.passed for i in self.items)}/{len(self.items)} passed)")
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def to_json_obj(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "items": [i.to_json_obj() for i in self.items],
        }


def merge_reports(title, reports) -> Report:
    """Flatten several reports into one, prefixing items with their source."""
    items = []
    for rep in reports:
        for i in rep.items:
            items.append(
                CheckItem(f"{rep.title}: {i.name}", i.passed, i.detail, i.expected, i.actual)
            )
    return Report(title, tuple(items))
