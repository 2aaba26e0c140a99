"""Observed-versus-predicted comparison, exact-claim checks, rendering, and
line-delimited persistence of results.

Exactness lives in the data (integer counts, Fraction predictions); decimal
formatting happens only here, with a configurable number of fractional
digits rounded half away from zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .census import CountMatrix, Equation
from .errors import InvalidInputError, MalformedRecordError
from .predictor import FormulaId, PredictionMatrix
from .residue_tables import CLASSES, ClassCounts, ConditionClass

SCHEMA_VERSION = 1

_CSV_HEADER = "p,equation,row_class,col_class,part,observed,predicted_num,predicted_den,ratio"


def format_fraction(value: Fraction, digits: int = 3) -> str:
    """Decimal rendering with the given fractional digits, half away from zero."""
    if digits < 0:
        raise InvalidInputError(f"digits must be >= 0, got {digits}")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * 10**digits
    units = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    if digits == 0:
        return f"{sign}{units}"
    whole, frac = divmod(units, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class CellRecord:
    """One compared matrix cell."""

    part: str
    row: ConditionClass
    col: ConditionClass
    observed: int
    formula: FormulaId | None
    predicted: Fraction | None
    ratio: float | None


@dataclass(frozen=True)
class ClaimCheck:
    """Outcome of one exact-equality claim; lhs/rhs hold the first compared
    (or first unequal) pair of values."""

    name: str
    passed: bool
    lhs: int
    rhs: int
    description: str = ""


@dataclass(frozen=True)
class ComparisonReport:
    p: int
    equation: Equation
    row_var: str
    cells: tuple[CellRecord, ...]
    claims: tuple[ClaimCheck, ...]

    @property
    def all_claims_pass(self) -> bool:
        return all(c.passed for c in self.claims)


def _claim(name: str, pairs: list[tuple[int, int]], description: str = "") -> ClaimCheck:
    for lhs, rhs in pairs:
        if lhs != rhs:
            return ClaimCheck(name, False, int(lhs), int(rhs), description)
    lhs, rhs = pairs[0]
    return ClaimCheck(name, True, int(lhs), int(rhs), description)


def _cell(part: str, row: ConditionClass, col: ConditionClass, observed: int,
          formula: FormulaId | None, predicted: Fraction | None) -> CellRecord:
    ratio = float(Fraction(observed) / predicted) if predicted else None
    return CellRecord(part, row, col, observed, formula, predicted, ratio)


def _symmetry_pairs(m: CountMatrix) -> list[tuple[int, int]]:
    pairs = []
    for part in ("trivial", "nontrivial", "total"):
        grid = m.part(part)
        for i in range(4):
            for j in range(i + 1, 4):
                pairs.append((int(grid[i, j]), int(grid[j, i])))
    return pairs


def compare(observed: CountMatrix, predicted: PredictionMatrix,
            counts: ClassCounts) -> ComparisonReport:
    """Pair every census cell with its prediction and evaluate exact claims.

    Totals for ha/tc are predicted as nontrivial prediction plus the exact
    trivial count (class intersections for ha, the fp census for tc).
    """
    if observed.p != predicted.p or counts.p != observed.p:
        raise InvalidInputError(
            f"prime mismatch: observed p={observed.p}, predicted p={predicted.p}, "
            f"counts p={counts.p}")
    if observed.equation is not predicted.equation:
        raise InvalidInputError(
            f"equation mismatch: {observed.equation.value} vs {predicted.equation.value}")

    eq = observed.equation
    cells: list[CellRecord] = []
    if eq is Equation.FP:
        for row in CLASSES:
            for col in CLASSES:
                fid, value = predicted.cell(row, col)
                cells.append(_cell("total", row, col,
                                   observed.entry("total", row, col), fid, value))
    else:
        for row in CLASSES:
            for col in CLASSES:
                triv = observed.entry("trivial", row, col)
                fid, value = predicted.cell(row, col)
                exact_trivial = (counts.intersection(row, col) if eq is Equation.HA
                                 else triv)
                cells.append(_cell("trivial", row, col, triv, None, None))
                cells.append(_cell("nontrivial", row, col,
                                   observed.entry("nontrivial", row, col), fid, value))
                cells.append(_cell("total", row, col, observed.entry("total", row, col),
                                   fid, None if value is None else value + exact_trivial))
    if eq is Equation.TC:
        for col in CLASSES:
            fid, value = predicted.ord_cell(col)
            triv = observed.ord_entry("trivial", col)
            cells.append(_cell("trivial", ConditionClass.ORD, col, triv, None, None))
            cells.append(_cell("nontrivial", ConditionClass.ORD, col,
                               observed.ord_entry("nontrivial", col), fid, value))
            cells.append(_cell("total", ConditionClass.ORD, col,
                               observed.ord_entry("total", col), fid,
                               None if value is None else value + triv))

    claims: list[ClaimCheck] = []
    ANY, PR, RP, RPPR = CLASSES
    ent = observed.entry
    if eq is Equation.FP:
        claims.append(_claim("fp_prop1_any_rp_is_phi",
                             [(ent("total", ANY, RP), predicted.phi)],
                             "total(ANY, RP) equals phi(p-1) exactly"))
        claims.append(_claim("fp_h_pr_forces_g_pr",
                             [(ent("total", ANY, PR), ent("total", PR, PR)),
                              (ent("total", RP, PR), ent("total", RPPR, PR)),
                              (ent("total", ANY, RPPR), ent("total", PR, RPPR)),
                              (ent("total", RP, RPPR), ent("total", RPPR, RPPR))],
                             "h PR forces g PR in every fp solution"))
    elif eq is Equation.HA:
        claims.append(_claim("ha_symmetry", _symmetry_pairs(observed),
                             "all three ha matrices are exactly symmetric"))
        claims.append(_claim(
            "ha_trivial_is_class_intersections",
            [(ent("trivial", r, c), counts.intersection(r, c))
             for r in CLASSES for c in CLASSES],
            "diagonal pairs h = a are counted by class intersections"))
        claims.append(_claim(
            "ha_rppr_forcing",
            [(ent("nontrivial", RPPR, col), ent("nontrivial", RPPR, ANY))
             for col in (PR, RP, RPPR)],
            "h RPPR forces a RPPR, so the RPPR row is constant"))
    else:
        claims.append(_claim("tc_h_pr_forces_g_pr",
                             [(ent("nontrivial", ANY, PR), ent("nontrivial", PR, PR)),
                              (ent("nontrivial", ANY, RPPR), ent("nontrivial", PR, RPPR))],
                             "h PR (or RPPR) forces g PR in every tc solution"))
    return ComparisonReport(p=observed.p, equation=eq, row_var=observed.row_var,
                            cells=tuple(cells), claims=tuple(claims))


def cross_equation_checks(ha: CountMatrix, tc: CountMatrix) -> tuple[ClaimCheck, ...]:
    """Exact correspondences between tc and ha nontrivial counts."""
    if ha.p != tc.p:
        raise InvalidInputError(f"prime mismatch: ha p={ha.p}, tc p={tc.p}")
    if ha.equation is not Equation.HA or tc.equation is not Equation.TC:
        raise InvalidInputError("cross checks need one ha census and one tc census")
    ANY, PR, RP, RPPR = CLASSES
    ha_n = lambda r, c: ha.entry("nontrivial", r, c)
    tc_n = lambda r, c: tc.entry("nontrivial", r, c)
    rppr_value = tc_n(PR, RPPR)
    return (
        _claim("t4_g_any_h_rp", [(tc_n(ANY, RP), ha_n(ANY, RP))],
               "tc with h RP matches ha with h RP, a ANY"),
        _claim("t4_g_pr_h_rp", [(tc_n(PR, RP), ha_n(PR, RP))],
               "tc with g PR, h RP matches ha with h RP, a PR"),
        _claim("t4_g_pr_h_pr", [(tc_n(PR, PR), ha_n(RP, PR))],
               "tc with g PR, h PR matches ha with h PR, a RP"),
        _claim("t4_rppr_family",
               [(rppr_value, ha_n(ANY, RPPR)), (rppr_value, ha_n(PR, RPPR)),
                (rppr_value, ha_n(RP, RPPR))]
               + [(rppr_value, ha_n(RPPR, col)) for col in CLASSES],
               "every cell touching an RPPR variable agrees across tc and ha"),
        _claim("t4_ord_any", [(tc.ord_entry("nontrivial", ANY), ha_n(RP, ANY))],
               "tc ord row (h ANY) matches ha with a RP"),
        _claim("t4_ord_rp", [(tc.ord_entry("nontrivial", RP), ha_n(RP, RP))],
               "tc ord row (h RP) matches ha with h RP, a RP"),
    )


# --- rendering -------------------------------------------------------------

def _text_table(title: str, row_var: str, rows: list[list[str]]) -> list[str]:
    header = [f"{row_var} \\ h"] + [c.value for c in CLASSES]
    labelled = [header] + [[lbl] + row for lbl, row in zip(
        [c.value for c in CLASSES] + ["ORD"], rows)]
    widths = [max(len(r[i]) for r in labelled) for i in range(len(header))]
    lines = [title]
    for r in labelled:
        lines.append("  ".join(s.rjust(w) for s, w in zip(r, widths)))
    lines.append("")
    return lines


def _cells_by_part(report: ComparisonReport) -> dict[str, dict]:
    parts: dict[str, dict] = {}
    for cell in report.cells:
        parts.setdefault(cell.part, {}).setdefault(cell.row, {})[cell.col] = cell
    return parts


def _render_report_text(report: ComparisonReport, digits: int) -> str:
    lines = [f"equation={report.equation.value} p={report.p} rows={report.row_var}"]
    for part, grid in _cells_by_part(report).items():
        matrix_rows = [r for r in (*CLASSES, ConditionClass.ORD) if r in grid]
        obs, pred, ratio = [], [], []
        for row in matrix_rows:
            obs.append([str(grid[row][c].observed) for c in CLASSES])
            pred.append([
                format_fraction(grid[row][c].predicted, digits)
                if grid[row][c].predicted is not None else "-" for c in CLASSES])
            ratio.append([
                f"{grid[row][c].ratio:.4f}" if grid[row][c].ratio is not None else "-"
                for c in CLASSES])
        lines += _text_table(f"[{part}] observed", report.row_var, obs)
        if any(cell != "-" for row in pred for cell in row):
            lines += _text_table(f"[{part}] predicted", report.row_var, pred)
            lines += _text_table(f"[{part}] observed/predicted", report.row_var, ratio)
    lines.append("claims:")
    for claim in report.claims:
        status = "PASS" if claim.passed else f"FAIL ({claim.lhs} != {claim.rhs})"
        lines.append(f"  {status}  {claim.name}")
    lines.append("")
    return "\n".join(lines)


def _cell_json(cell: CellRecord) -> dict:
    return {
        "observed": cell.observed,
        "formula": cell.formula.value if cell.formula is not None else None,
        "predicted_num": cell.predicted.numerator if cell.predicted is not None else None,
        "predicted_den": cell.predicted.denominator if cell.predicted is not None else None,
        "ratio": cell.ratio,
    }


def _render_report_json(report: ComparisonReport) -> str:
    parts: dict = {}
    ord_row: dict = {}
    for cell in report.cells:
        target = ord_row if cell.row is ConditionClass.ORD else parts
        sub = target.setdefault(cell.part, {})
        if cell.row is ConditionClass.ORD:
            sub[cell.col.value] = _cell_json(cell)
        else:
            sub.setdefault(cell.row.value, {})[cell.col.value] = _cell_json(cell)
    payload = {
        "p": report.p,
        "equation": report.equation.value,
        "row_var": report.row_var,
        "parts": parts,
        "ord_row": ord_row or None,
        "claims": [{"name": c.name, "passed": c.passed, "lhs": c.lhs, "rhs": c.rhs,
                    "description": c.description} for c in report.claims],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def _render_report_csv(report: ComparisonReport) -> str:
    lines = [_CSV_HEADER]
    for cell in report.cells:
        pred_num = cell.predicted.numerator if cell.predicted is not None else ""
        pred_den = cell.predicted.denominator if cell.predicted is not None else ""
        ratio = repr(cell.ratio) if cell.ratio is not None else ""
        lines.append(f"{report.p},{report.equation.value},{cell.row.value},"
                     f"{cell.col.value},{cell.part},{cell.observed},"
                     f"{pred_num},{pred_den},{ratio}")
    return "\n".join(lines) + "\n"


def render(report: ComparisonReport, fmt: str = "text", digits: int = 3) -> bytes:
    """Serialize a comparison report as text, csv, or json."""
    if fmt == "text":
        return _render_report_text(report, digits).encode()
    if fmt == "csv":
        return _render_report_csv(report).encode()
    if fmt == "json":
        return _render_report_json(report).encode()
    raise InvalidInputError(f"unknown format {fmt!r}")


def render_counts(m: CountMatrix, fmt: str = "text") -> bytes:
    """Serialize a bare census matrix (no predictions)."""
    if fmt == "json":
        return (json.dumps(m.to_payload(), sort_keys=True,
                           separators=(",", ": "), indent=1) + "\n").encode()
    if fmt == "csv":
        lines = [_CSV_HEADER]
        for part in ("trivial", "nontrivial", "total"):
            grid = m.part(part)
            for i, row in enumerate(CLASSES):
                for j, col in enumerate(CLASSES):
                    lines.append(f"{m.p},{m.equation.value},{row.value},{col.value},"
                                 f"{part},{int(grid[i, j])},,,")
            if m.ord_trivial is not None:
                for col in CLASSES:
                    lines.append(f"{m.p},{m.equation.value},ORD,{col.value},{part},"
                                 f"{m.ord_entry(part, col)},,,")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "text":
        lines = [f"equation={m.equation.value} p={m.p} rows={m.row_var}"]
        for part in ("trivial", "nontrivial", "total"):
            grid = m.part(part)
            rows = [[str(int(grid[i, j])) for j in range(4)] for i in range(4)]
            if m.ord_trivial is not None:
                rows.append([str(m.ord_entry(part, col)) for col in CLASSES])
            lines += _text_table(f"[{part}]", m.row_var, rows)
        return ("\n".join(lines) + "\n").encode()
    raise InvalidInputError(f"unknown format {fmt!r}")


def render_predictions(pm: PredictionMatrix, fmt: str = "text", digits: int = 3) -> bytes:
    """Serialize a prediction matrix; the grid predicts pm.predicted_part."""
    part = pm.predicted_part
    if fmt == "json":
        grid = {row.value: {col.value: {
                    "formula": pm.cell(row, col)[0].value,
                    "num": v.numerator if (v := pm.cell(row, col)[1]) is not None else None,
                    "den": v.denominator if v is not None else None}
                for col in CLASSES} for row in CLASSES}
        ord_row = None
        if pm.ord_formulas is not None:
            ord_row = {col.value: {
                "formula": pm.ord_cell(col)[0].value,
                "num": v.numerator if (v := pm.ord_cell(col)[1]) is not None else None,
                "den": v.denominator if v is not None else None} for col in CLASSES}
        payload = {"p": pm.p, "equation": pm.equation.value, "part": part,
                   "grid": grid, "ord_row": ord_row}
        return (json.dumps(payload, sort_keys=True,
                           separators=(",", ": "), indent=1) + "\n").encode()
    if fmt == "csv":
        lines = [_CSV_HEADER]
        for row in CLASSES:
            for col in CLASSES:
                _, v = pm.cell(row, col)
                num = v.numerator if v is not None else ""
                den = v.denominator if v is not None else ""
                lines.append(f"{pm.p},{pm.equation.value},{row.value},{col.value},"
                             f"{part},,{num},{den},")
        if pm.ord_formulas is not None:
            for col in CLASSES:
                _, v = pm.ord_cell(col)
                num = v.numerator if v is not None else ""
                den = v.denominator if v is not None else ""
                lines.append(f"{pm.p},{pm.equation.value},ORD,{col.value},{part},,"
                             f"{num},{den},")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "text":
        lines = [f"equation={pm.equation.value} p={pm.p} predicted part={part}"]
        rows = []
        for row in CLASSES:
            rows.append([format_fraction(v, digits) if (v := pm.cell(row, col)[1])
                         is not None else "-" for col in CLASSES])
        if pm.ord_formulas is not None:
            rows.append([format_fraction(v, digits) if (v := pm.ord_cell(col)[1])
                         is not None else "-" for col in CLASSES])
        lines += _text_table("[predicted]", "g" if pm.equation is not Equation.HA else "a",
                             rows)
        return ("\n".join(lines) + "\n").encode()
    raise InvalidInputError(f"unknown format {fmt!r}")


# --- persistence ------------------------------------------------------------

_RECORD_FIELDS = ("schema_version", "p", "equation", "part", "row_class",
                  "col_class", "observed", "predicted_num", "predicted_den",
                  "timestamp")


@dataclass(frozen=True)
class ResultRecord:
    """One persisted census/prediction cell; round-trips through JSONL."""

    p: int
    equation: str
    part: str
    row_class: str
    col_class: str
    observed: int
    predicted_num: int | None
    predicted_den: int | None
    timestamp: str
    schema_version: int = SCHEMA_VERSION

    def to_json_line(self) -> str:
        return json.dumps({f: getattr(self, f) for f in _RECORD_FIELDS},
                          sort_keys=True, separators=(",", ":"))


def records_from_report(report: ComparisonReport, timestamp: str) -> list[ResultRecord]:
    return [
        ResultRecord(p=report.p, equation=report.equation.value, part=cell.part,
                     row_class=cell.row.value, col_class=cell.col.value,
                     observed=cell.observed,
                     predicted_num=cell.predicted.numerator if cell.predicted is not None else None,
                     predicted_den=cell.predicted.denominator if cell.predicted is not None else None,
                     timestamp=timestamp)
        for cell in report.cells
    ]


def append_records(path, records: list[ResultRecord]) -> None:
    """Append records to a line-delimited file (created if missing)."""
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json_line() + "\n")


def read_records(path) -> list[ResultRecord]:
    """Read all records back, in order; malformed lines name their line number."""
    out: list[ResultRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(f"line {lineno}: not valid JSON ({exc.msg})")
            if not isinstance(raw, dict):
                raise MalformedRecordError(f"line {lineno}: record is not an object")
            if raw.get("schema_version") != SCHEMA_VERSION:
                raise MalformedRecordError(
                    f"line {lineno}: unsupported schema_version {raw.get('schema_version')!r}")
            if set(raw) != set(_RECORD_FIELDS):
                raise MalformedRecordError(f"line {lineno}: unexpected record fields")
            try:
                out.append(ResultRecord(**raw))
            except TypeError as exc:
                raise MalformedRecordError(f"line {lineno}: {exc}")
    return out
