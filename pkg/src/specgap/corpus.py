"""Input documents, example generators and report serialisation.

Two input formats are accepted:

* JSON: ``{"kind": "set" | "values" | "fourier", "p": P, "payload": [...]}``
  where a fourier payload is a list of ``[frequency, real, imag]`` triples
  (unlisted frequencies are zero).
* Plain text sets: a ``p = P`` line followed by one residue per line;
  ``#`` starts a comment.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .coverage import CoverageReport, ProbeRow
from .differences import FewRepsResult, UniqueDifference
from .errors import InputError, MalformedInput, OutOfRange, SpectrumError
from .field import (
    DensityFunction,
    GapCertificate,
    PrimeField,
    Spectrum,
    idft,
    spectrum_from_coeffs,
)
from .repeated import Theorem2Verdict

KINDS = ("set", "values", "fourier")
FAMILIES = (
    "indicator-random",
    "interval",
    "arithmetic-progression",
    "quadratic-residues",
    "spectral-remark",
    "spectral-custom",
)
INVERSION_TOL = 1e-9


@dataclass(frozen=True)
class InputSpec:
    kind: str
    p: int
    payload: tuple

    def to_document(self) -> dict:
        payload = [list(x) if isinstance(x, tuple) else x for x in self.payload]
        return {"kind": self.kind, "p": self.p, "payload": payload}


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or x != int(x):
        raise MalformedInput(f"{what} must be an integer, got {x!r}")
    return int(x)


def _real(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise MalformedInput(f"{what} must be a finite number, got {x!r}")
    return float(x)


def validate_spec(doc: Any) -> InputSpec:
    if not isinstance(doc, dict):
        raise MalformedInput("input document must be a JSON object")
    missing = {"kind", "p", "payload"} - doc.keys()
    if missing:
        raise MalformedInput(f"input document lacks keys: {', '.join(sorted(missing))}")
    extra = doc.keys() - {"kind", "p", "payload"}
    if extra:
        raise MalformedInput(f"unknown keys in input document: {', '.join(sorted(extra))}")
    kind = doc["kind"]
    if kind not in KINDS:
        raise MalformedInput(f"kind must be one of {KINDS}, got {kind!r}")
    p = _int(doc["p"], "p")
    PrimeField(p)
    payload = doc["payload"]
    if not isinstance(payload, list):
        raise MalformedInput("payload must be a list")

    if kind == "set":
        items = tuple(_int(x, "residue") for x in payload)
        for r in items:
            if not 0 <= r < p:
                raise OutOfRange(f"residue {r} out of range for p={p}")
        if len(set(items)) != len(items):
            raise MalformedInput("set residues must be distinct")
        return InputSpec(kind, p, items)
    if kind == "values":
        if len(payload) != p:
            raise MalformedInput(f"values payload needs {p} entries, got {len(payload)}")
        items = tuple(_real(x, "value") for x in payload)
        bad = [v for v in items if not 0.0 <= v <= 1.0]
        if bad:
            raise OutOfRange(f"value {bad[0]} outside [0, 1]")
        return InputSpec(kind, p, items)

    items = []
    for entry in payload:
        if not isinstance(entry, list) or len(entry) != 3:
            raise MalformedInput(f"fourier entries must be [frequency, real, imag], got {entry!r}")
        a = _int(entry[0], "frequency")
        if not 0 <= a < p:
            raise OutOfRange(f"frequency {a} out of range for p={p}")
        items.append((a, _real(entry[1], "real part"), _real(entry[2], "imaginary part")))
    freqs = [a for a, _, _ in items]
    if len(set(freqs)) != len(freqs):
        raise MalformedInput("fourier frequencies must be distinct")
    spec = InputSpec(kind, p, tuple(items))
    to_function(spec)  # rejects spectra that do not invert into [0, 1]
    return spec


def _parse_text(text: str) -> InputSpec:
    p = None
    residues = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("p"):
            rest = line[1:].strip().lstrip("=:").strip()
            try:
                p = int(rest)
            except ValueError:
                raise MalformedInput(f"line {lineno}: cannot read modulus from {raw!r}") from None
            continue
        try:
            residues.append(int(line))
        except ValueError:
            raise MalformedInput(f"line {lineno}: expected a residue, got {raw!r}") from None
    if p is None:
        raise MalformedInput("text input needs a 'p = <prime>' line")
    return validate_spec({"kind": "set", "p": p, "payload": residues})


def parse_input(source: Union[str, Path]) -> InputSpec:
    """Parse a document given as text or as a path to a file."""
    if isinstance(source, Path) or (
        isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("{")
        and Path(source).is_file()
    ):
        try:
            source = Path(source).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read input: {exc}") from None
    text = source.strip()
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from None
        return validate_spec(doc)
    return _parse_text(source)


def serialize_input(spec: InputSpec) -> str:
    return json.dumps(spec.to_document()) + "\n"


def to_function(spec: InputSpec) -> DensityFunction:
    field = PrimeField(spec.p)
    if spec.kind == "set":
        return DensityFunction.from_set(field, spec.payload)
    if spec.kind == "values":
        return DensityFunction.from_values(field, spec.payload)
    coeffs = np.zeros(spec.p, dtype=np.complex128)
    for a, re, im in spec.payload:
        coeffs[a] = complex(re, im)
    try:
        inv = idft(spectrum_from_coeffs(field, coeffs), tol=INVERSION_TOL)
    except SpectrumError as exc:
        raise OutOfRange(f"fourier input rejected: {exc}") from None
    vals = inv.values
    if vals.min() < -INVERSION_TOL or vals.max() > 1 + INVERSION_TOL:
        raise OutOfRange(
            f"fourier input inverts outside [0, 1] (range [{vals.min():.3g}, {vals.max():.3g}])"
        )
    return DensityFunction(field, np.clip(vals, 0.0, 1.0))


def generate(family: str, p: int, params: Optional[dict] = None, seed: Optional[int] = None) -> DensityFunction:
    """Deterministic example functions.

    ``params`` by family: indicator-random ``density`` (size is
    ``max(1, round(density * p))``, needs ``seed``); interval ``length`` and
    optional ``start``; arithmetic-progression ``start``, ``step``,
    ``length``; spectral-custom ``coeffs`` as ``[[a, re, im], ...]``.
    """
    params = dict(params or {})
    field = PrimeField(p)

    def need(name):
        if name not in params:
            raise InputError(f"{family} needs parameter {name!r}")
        return params[name]

    if family == "indicator-random":
        density = float(need("density"))
        if not 0 < density <= 1:
            raise InputError(f"density must lie in (0, 1], got {density}")
        if seed is None:
            raise InputError("indicator-random needs an explicit seed")
        size = max(1, round(density * p))
        rng = np.random.default_rng(seed)
        return DensityFunction.from_set(field, rng.choice(p, size=size, replace=False))
    if family == "interval":
        length, start = int(need("length")), int(params.get("start", 0))
        if not 1 <= length <= p:
            raise InputError(f"interval length must lie in [1, p], got {length}")
        return DensityFunction.from_set(field, {(start + i) % p for i in range(length)})
    if family == "arithmetic-progression":
        start, step, length = int(need("start")), int(need("step")), int(need("length"))
        if step % p == 0 or not 1 <= length <= p:
            raise InputError("progression needs a nonzero step and 1 <= length <= p")
        return DensityFunction.from_set(field, {(start + i * step) % p for i in range(length)})
    if family == "quadratic-residues":
        return DensityFunction.from_set(field, {(x * x) % p for x in range(1, p)})
    if family == "spectral-remark":
        n = np.arange(p)
        return DensityFunction(field, 0.5 + 0.5 * np.cos(2 * np.pi * n / p))
    if family == "spectral-custom":
        spec = validate_spec({"kind": "fourier", "p": p, "payload": need("coeffs")})
        return to_function(spec)
    raise InputError(f"unknown family {family!r}; choose from {FAMILIES}")


def function_spec(f: DensityFunction) -> InputSpec:
    """Input document describing ``f`` (a set when f is an indicator)."""
    if f.indicator:
        return InputSpec("set", f.p, tuple(int(x) for x in f.support))
    return InputSpec("values", f.p, tuple(float(v) for v in f.values))


# -- reports -----------------------------------------------------------------


def _num(x):
    """12 significant digits; complex numbers become [re, im]."""
    if isinstance(x, (bool, np.bool_)) or x is None:
        return None if x is None else bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_num(x.real), _num(x.imag)]
    x = float(x)
    if not math.isfinite(x):
        return None
    y = float(f"{x:.12g}")
    return 0.0 if y == 0 else y


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, str):
        return obj
    return _num(obj)


def spectrum_rows(s: Spectrum) -> list[dict]:
    rows = []
    for rank, a in enumerate(s.order, 1):
        c = s.coeffs[a]
        rows.append(
            {
                "rank": rank,
                "frequency": int(a),
                "magnitude": float(s.magnitudes[rank - 1]),
                "real": float(c.real),
                "imag": float(c.imag),
            }
        )
    return rows


def certificate_record(c: GapCertificate) -> dict:
    return {"k": c.k, "gamma": c.gamma, "lambda_k": c.lambda_k, "lambda_k1": c.lambda_k1}


def coverage_record(r: CoverageReport) -> dict:
    return {
        "p": r.p,
        "k": r.k,
        "gamma": r.gamma,
        "theta": r.theta,
        "lambda_k": r.lambda_k,
        "bound": r.bound,
        "exact_support": r.exact_support,
        "slack": r.slack,
        "d": r.d,
        "a_x": r.a_x,
        "a_y": r.a_y,
        "in_hypothesis": r.in_hypothesis,
        "difference_method": r.difference_method,
        "good_count": r.good_count,
        "l2_error": r.l2_error,
        "l2_budget": r.l2_budget,
        "eps_pos": r.eps_pos,
        "falsifications": list(r.falsifications),
    }


def verdict_record(v: Theorem2Verdict) -> dict:
    c = v.chain
    return {
        "p": v.p,
        "k": v.k,
        "t": v.t,
        "seed": v.seed,
        "theta": v.theta,
        "lambda_k": v.lambda_k,
        "gamma": v.gamma,
        "gamma_threshold": v.gamma_threshold,
        "gamma_ok": v.gamma_ok,
        "k_range_ok": v.k_range_ok,
        "in_hypothesis": v.in_hypothesis,
        "positive_everywhere": v.positive_everywhere,
        "min_value": v.min_value,
        "eps_pos": v.eps_pos,
        "chain": {
            "A": list(c.A),
            "ds": list(c.ds),
            "m": c.m,
            "set_sizes": [len(s) for s in c.sets],
            "methods": [st.method for st in c.steps],
            "step_bounds_ok": [st.bound_ok for st in c.steps],
            "base": c.base,
        },
        "identity_error": v.identity_error,
        "max_error": v.max_error,
        "error_bound": v.error_bound,
        "support_inclusion_ok": v.support_inclusion_ok,
        "notes": list(v.notes),
        "falsifications": list(v.falsifications),
    }


def unique_record(u: UniqueDifference) -> dict:
    rec = {"d": u.d, "b1": u.witness[0], "b2": u.witness[1], "method": u.method}
    if u.dilation is not None:
        rec["dilation"] = {
            "m": u.dilation.m,
            "bound": u.dilation.bound,
            "achieved": u.dilation.achieved,
        }
    return rec


def few_reps_record(r: FewRepsResult) -> dict:
    return {
        "d": r.d,
        "nu": r.nu,
        "bound": r.bound,
        "path": r.path,
        "attempts": r.attempts,
        "subset_size": r.subset_size,
        "bound_violation": r.bound_violation,
    }


def probe_record(row: ProbeRow) -> dict:
    return {
        "k": row.k,
        "trials": row.trials,
        "best_gamma_found": row.best_gamma_found,
        "best_family": row.best_family,
        "coverage_at_best": row.coverage_at_best,
        "bound_at_best": row.bound_at_best,
        "strong_count": row.strong_count,
        "coverage_observed": row.coverage_observed,
    }


def to_record(report) -> Any:
    if isinstance(report, CoverageReport):
        return coverage_record(report)
    if isinstance(report, Theorem2Verdict):
        return verdict_record(report)
    if isinstance(report, Spectrum):
        return {"p": report.p, "spectrum": spectrum_rows(report)}
    if isinstance(report, GapCertificate):
        return certificate_record(report)
    if isinstance(report, UniqueDifference):
        return unique_record(report)
    if isinstance(report, FewRepsResult):
        return few_reps_record(report)
    if isinstance(report, ProbeRow):
        return probe_record(report)
    if isinstance(report, list):
        return [to_record(r) for r in report]
    if isinstance(report, dict):
        return {k: to_record(v) for k, v in report.items()}
    return report


def _flatten(rec: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            out[name] = ";".join("" if v is None else str(v) for v in val)
        else:
            out[name] = "" if val is None else val
    return out


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def emit_report(report, fmt: str = "json", meta: Optional[dict] = None) -> str:
    """Serialise a report with stable key order and 12 significant digits.

    ``meta`` (seed, tolerance, ...) is placed under a leading ``"meta"`` key
    in JSON; CSV carries only the table.
    """
    rec = _clean(to_record(report))
    if fmt == "json":
        doc = {"meta": _clean(meta)} if meta else {}
        if isinstance(rec, dict):
            doc.update(rec)
        else:
            doc["rows"] = rec
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        if isinstance(rec, dict) and "spectrum" in rec and isinstance(rec["spectrum"], list):
            rows = rec["spectrum"]
        elif isinstance(rec, list):
            rows = [_flatten(r) for r in rec]
        else:
            rows = [_flatten(rec)]
        return _csv(rows)
    raise ValueError(f"unknown format {fmt!r}")
