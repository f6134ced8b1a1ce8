"""Shared registry for the acceptance suite's one-line-per-criterion report."""

lines: list[str] = []


def report(criterion: str, passed: bool, detail: str = "") -> bool:
    status = "PASS" if passed else "FAIL"
    suffix = f" — {detail}" if detail else ""
    lines.append(f"{criterion}: {status}{suffix}")
    return passed
