"""
Verification report module.
Compares computed values with reference values and summarises pass rates.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_INFO = "info"
STATUS_ERROR = "error"


def relative_difference(value, reference) -> float:
    """
    |value - reference| / |reference|, or the absolute difference when the
    reference is zero. Exact inputs give an exact difference before the final
    float conversion.
    """
    if isinstance(value, Fraction) and isinstance(reference, Fraction):
        diff = abs(value - reference)
        return float(diff / abs(reference)) if reference != 0 else float(diff)
    value, reference = float(value), float(reference)
    diff = abs(value - reference)
    return diff / abs(reference) if reference != 0.0 else diff


def compare_values(value, reference, tol: float) -> Dict[str, Any]:
    """
    Compare two values under a tolerance.

    Business Logic:
    - exact values (Fractions) pass only when equal
    - floats pass when the relative difference is below tol
    - NaN never passes

    Args:
        value: Computed value
        reference: Reference (catalog, identity or oracle) value
        tol: Relative tolerance for float comparisons

    Returns:
        Dictionary with rel_diff and status
    """
    exact = isinstance(value, (int, Fraction)) and isinstance(reference, (int, Fraction))
    if exact:
        value, reference = Fraction(value), Fraction(reference)
        rel = relative_difference(value, reference)
        return {"rel_diff": rel, "status": STATUS_PASS if value == reference else STATUS_FAIL}
    rel = relative_difference(value, reference)
    ok = rel == rel and rel < tol
    return {"rel_diff": rel, "status": STATUS_PASS if ok else STATUS_FAIL}


def make_record(
    op: str,
    kind: Optional[str],
    q,
    params: Dict[str, Any],
    value_numeric,
    value_catalog,
    tol: float,
    informational: bool = False,
) -> Dict[str, Any]:
    """
    One flat report row: {op, kind, q, params, value_numeric, value_catalog, rel_diff, status}.

    Informational rows carry their comparison but never count as failures.
    """
    outcome = compare_values(value_numeric, value_catalog, tol)
    status = STATUS_INFO if informational else outcome["status"]
    return {
        "op": op,
        "kind": kind,
        "q": q,
        "params": params,
        "value_numeric": value_numeric,
        "value_catalog": value_catalog,
        "rel_diff": outcome["rel_diff"],
        "status": status,
    }


def flag_record(op: str, kind: Optional[str], q, params: Dict[str, Any], observed: str, expected: str) -> Dict[str, Any]:
    """A row for a check whose outcome is a label (e.g. which error was raised)."""
    return {
        "op": op,
        "kind": kind,
        "q": q,
        "params": params,
        "value_numeric": observed,
        "value_catalog": expected,
        "rel_diff": None,
        "status": STATUS_PASS if observed == expected else STATUS_FAIL,
    }


def error_record(op: str, kind: Optional[str], q, params: Dict[str, Any], error: Exception) -> Dict[str, Any]:
    """A row for a check that raised instead of producing a value."""
    return {
        "op": op,
        "kind": kind,
        "q": q,
        "params": {**params, "error": f"{type(error).__name__}: {error}"},
        "value_numeric": None,
        "value_catalog": None,
        "rel_diff": None,
        "status": STATUS_ERROR,
    }


def summarize(rows: List[Dict[str, Any]]) -> Dict[str, Any]:
    """
    Overall pass rate of a suite.

    Business Logic:
    - informational rows are reported but excluded from the pass rate
    - a suite passes iff every counted row passes
    """
    counted = [r for r in rows if r["status"] != STATUS_INFO]
    passed = sum(1 for r in counted if r["status"] == STATUS_PASS)
    total = len(counted)
    rate = (passed / total * 100) if total > 0 else 100.0
    return {
        "pass_rate": round(rate, 2),
        "passed_rows": passed,
        "total_rows": total,
        "informational_rows": len(rows) - total,
        "all_passed": passed == total,
        "failed_rows": [r for r in counted if r["status"] != STATUS_PASS],
    }


def generate_report(summary: Dict[str, Any], title: str = "VERIFICATION REPORT") -> str:
    """
    Generate human-readable verification report.

    Args:
        summary: Output of summarize

    Returns:
        Formatted report string
    """
    report_lines = [
        "=" * 60,
        title,
        "=" * 60,
        f"\nPass Rate: {summary['pass_rate']}%",
        f"Passed Rows: {summary['passed_rows']}/{summary['total_rows']}",
        f"Informational Rows: {summary['informational_rows']}",
    ]

    if summary["failed_rows"]:
        report_lines.extend(["\n" + "-" * 60, "Failed Rows:", "-" * 60])
        for row in summary["failed_rows"]:
            kind = f" [{row['kind']}]" if row.get("kind") else ""
            report_lines.append(f"\n✗ {row['op']}{kind}")
            report_lines.append(f"  Params:    {row['params']}")
            report_lines.append(f"  Computed:  {row['value_numeric']}")
            report_lines.append(f"  Reference: {row['value_catalog']}")
            report_lines.append(f"  Rel diff:  {row['rel_diff']}")

    report_lines.append("\n" + "=" * 60)
    return "\n".join(report_lines)
