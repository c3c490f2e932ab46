"""Command-line frontend: build models, run pipelines, emit stable reports.

Subcommands
-----------
model           build the endomorphism DG-algebra and serialize it
transfer        transferred + normalized minimal model on the cochain side
check-stasheff  identity sweeps on the transferred model
massey          Massey powers of t against the transferred family
classify        bigrading classification of admissible higher operations
loops           transferred + normalized loop-space model (cobar side)
verify          the full battery: both pipelines, oracles, cross-checks

Every command produces a JSON-compatible document rendered either as
key/value + table text or, under --json, as canonical JSON (sorted keys,
two-space indent).  Rerunning a command with identical inputs produces
byte-identical output; coefficients are always printed as canonical
residues in [0, p).  The heavy commands (model, transfer, loops, verify)
cache their documents under --cache-dir (default: $AINF_CACHE_DIR or
.cache/), keyed by a hash of (command, resolved parameters,
format_version); a cached document whose embedded content hash does not
match is discarded and rebuilt.  All file writes go through a temporary
file and an atomic rename.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
3 truncation-window error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Callable

from .ainf import (
    AInfinityAlgebra,
    ShapeMismatch,
    classify_admissible,
    enumerate_words,
    epsilon_sign,
    monomial_label,
    stasheff_defect,
    strict_unitality_defects,
)
from .dga import massey_power
from .glin import Bidegree, GradedVectorSpace, TruncationExceeded
from .grp import LOOP_GENERATORS, GroupParams, build_end_dga
from .koszul import (
    loop_minimal_model,
    loop_word_count,
    massey_versus_loop_transfer,
    poincare_roundtrip,
)
from .transfer import (
    PatternMismatch,
    compare_models,
    group_minimal_model,
    massey_versus_transfer,
)

FORMAT_VERSION = 1

CACHED_COMMANDS = {"model", "transfer", "loops", "verify"}

# verify skips its loop stage above this cobar word count (the dense
# block elimination behind the retraction is cubic in block size, and
# blocks grow with the word space); an explicit `ainfbg loops` run is
# never budgeted.
VERIFY_LOOP_WORD_BUDGET = 30_000


class ParameterError(ValueError):
    """Invalid or missing command-line parameters (exit code 2)."""


# ---------------------------------------------------------------------------
# canonical documents
# ---------------------------------------------------------------------------

def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _hash_payload(doc: dict) -> str:
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def finalize_document(doc: dict) -> dict:
    """Stamp the provenance content hash (over the document with the hash
    field blanked, so verification can recompute it)."""
    doc["provenance"]["content_hash"] = ""
    doc["provenance"]["content_hash"] = _hash_payload(doc)
    return doc


def document_hash_ok(doc: dict) -> bool:
    prov = doc.get("provenance")
    if not isinstance(prov, dict) or "content_hash" not in prov:
        return False
    stored = prov["content_hash"]
    clone = json.loads(json.dumps(doc))
    clone["provenance"]["content_hash"] = ""
    return _hash_payload(clone) == stored


def format_vector(vec: dict[str, int], p: int) -> str:
    terms = [f"{c % p}*{lab}" for lab, c in sorted(vec.items()) if c % p]
    return " + ".join(terms) if terms else "0"


def space_records(space: GradedVectorSpace) -> list[dict]:
    recs = []
    for bd in sorted(space.bidegrees()):
        labels = space.labels(bd)
        if labels:
            recs.append({"s": bd.s, "w": bd.w, "dim": len(labels),
                         "labels": list(labels)})
    return recs


def _vector_record(vec: dict[str, int], p: int) -> dict[str, int]:
    return {lab: c % p for lab, c in sorted(vec.items()) if c % p}


def operation_records(model: AInfinityAlgebra) -> dict[str, list[dict]]:
    p = model.space.prime
    out: dict[str, list[dict]] = {}
    for n in sorted(model.ops):
        entries = []
        for word in sorted(model.ops[n]):
            vec = _vector_record(model.ops[n][word], p)
            if vec:
                entries.append({"inputs": list(word), "output": vec})
        if entries:
            out[str(n)] = entries
    return out


def _base_document(kind: str, command: str, params: GroupParams,
                   parameters: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "command": command,
        "prime": params.p,
        "group": {"p": params.p, "n": params.n, "q": params.q,
                  "gamma": params.gamma, "pn": params.pn, "h": params.h},
        "provenance": {"command": command, "parameters": parameters},
    }


def model_document(command: str, params: GroupParams, parameters: dict,
                   model: AInfinityAlgebra, *, extra: dict | None = None) -> dict:
    doc = _base_document("ainfinity-model", command, params, parameters)
    doc.update({
        "window": list(model.space.window),
        "arity_bound": model.arity_bound,
        "unit": model.unit,
        "internal_scale": model.internal_scale,
        "spaces": space_records(model.space),
        "operations": operation_records(model),
    })
    if extra:
        doc.update(extra)
    return finalize_document(doc)


def model_from_document(doc: dict) -> AInfinityAlgebra:
    """Inverse of model_document's model part (round-trip stable)."""
    if doc.get("kind") != "ainfinity-model":
        raise ValueError(f"not a model document: kind={doc.get('kind')!r}")
    blocks = {Bidegree(r["s"], r["w"]): list(r["labels"])
              for r in doc["spaces"]}
    space = GradedVectorSpace(prime=doc["prime"],
                              window=tuple(doc["window"]), blocks=blocks)
    ops = {int(n): {tuple(e["inputs"]): {lab: int(c)
                                         for lab, c in e["output"].items()}
                    for e in entries}
           for n, entries in doc["operations"].items()}
    return AInfinityAlgebra(space=space, ops=ops,
                            arity_bound=doc["arity_bound"],
                            unit=doc["unit"],
                            internal_scale=doc["internal_scale"])


def dga_document(command: str, params: GroupParams, parameters: dict,
                 dga) -> dict:
    """Serialize a DG-algebra: differential and product entries whose
    output bidegree lies in the window (absences there mean zero; pairs
    whose output leaves the window are not representable and are left
    out, which the grading makes unambiguous)."""
    p = dga.prime
    lo, hi = dga.space.window
    labeled = [(bd, lab) for bd in sorted(dga.space.bidegrees())
               for lab in dga.space.labels(bd)]
    d_entries = []
    for bd, lab in labeled:
        if not lo <= bd.s - 1 <= hi:
            continue
        vec = _vector_record(dga.diff(lab), p)
        if vec:
            d_entries.append({"inputs": [lab], "output": vec})
    m_entries = []
    for ba, la in labeled:
        for bb, lb in labeled:
            if not lo <= ba.s + bb.s <= hi:
                continue
            vec = _vector_record(dga.products(la, lb), p)
            if vec:
                m_entries.append({"inputs": [la, lb], "output": vec})
    m_entries.sort(key=lambda e: e["inputs"])
    doc = _base_document("dg-algebra", command, params, parameters)
    doc.update({
        "window": [lo, hi],
        "name": dga.name,
        "unit": _vector_record(dga.unit, p),
        "spaces": space_records(dga.space),
        "operations": {"1": d_entries, "2": m_entries},
    })
    return finalize_document(doc)


def report_document(kind: str, command: str, params: GroupParams,
                    parameters: dict, records: list[dict],
                    extra: dict | None = None) -> dict:
    doc = _base_document(kind, command, params, parameters)
    doc["records"] = records
    doc["overall"] = ("pass" if all(r["verdict"] != "fail" for r in records)
                      else "fail")
    if extra:
        doc.update(extra)
    return finalize_document(doc)


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _render_table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header).rstrip(),
             fmt.format(*("-" * w for w in widths)).rstrip()]
    lines.extend(fmt.format(*row).rstrip() for row in rows)
    return lines


def render_text(doc: dict) -> str:
    lines = []
    for key in ("kind", "command", "format_version", "prime"):
        lines.append(f"{key:<16}{doc[key]}")
    for key, value in sorted(doc["group"].items()):
        lines.append(f"group.{key:<10}{value}")
    for key in ("window", "arity_bound", "unit", "internal_scale", "name",
                "overall"):
        if key in doc:
            value = doc[key]
            if isinstance(value, list):
                value = " ".join(str(v) for v in value)
            lines.append(f"{key:<16}{value}")
    if "normalization" in doc:
        for key, value in sorted(doc["normalization"].items()):
            lines.append(f"normalized.{key:<12}{value}")
    p = doc["prime"]
    if "records" in doc:
        lines.append("")
        rows = [[r["name"], r["verdict"], r["expected"], r["got"]]
                for r in doc["records"]]
        lines.extend(_render_table(rows, ["check", "verdict", "expected",
                                          "got"]))
    if "admissible" in doc:
        lines.append("")
        rows = [[str(r["arity"]),
                 " ".join(str(j) for j in r["powers"]),
                 " ".join(str(e) for e in r["exponents"]),
                 str(r["target_power"]), str(r["target_exponent"])]
                for r in doc["admissible"]]
        lines.extend(_render_table(
            rows, ["arity", "powers", "exponents", "target_j", "target_e"]))
    if "spaces" in doc:
        lines.append("")
        rows = [[str(r["s"]), str(r["w"]), str(r["dim"]),
                 " ".join(r["labels"])] for r in doc["spaces"]]
        lines.extend(_render_table(rows, ["s", "w", "dim", "labels"]))
    if "operations" in doc:
        lines.append("")
        rows = []
        for n in sorted(doc["operations"], key=int):
            for entry in doc["operations"][n]:
                rows.append([f"m{n}", ", ".join(entry["inputs"]),
                             format_vector(entry["output"], p)])
        lines.extend(_render_table(rows, ["op", "inputs", "output"]))
    lines.append("")
    lines.append(f"content_hash    {doc['provenance']['content_hash']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# cache and output plumbing
# ---------------------------------------------------------------------------

def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _cache_dir(args) -> str:
    if args.cache_dir:
        return args.cache_dir
    return os.environ.get("AINF_CACHE_DIR", ".cache")


def _cache_key(command: str, parameters: dict) -> str:
    return _hash_payload({"command": command, "parameters": parameters,
                          "format_version": FORMAT_VERSION})


def _cache_load(path: str) -> dict | None:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError):
        return None
    if not document_hash_ok(doc):
        return None
    return doc


def run_with_cache(command: str, args, parameters: dict,
                   build: Callable[[], dict]) -> dict:
    if command not in CACHED_COMMANDS or args.no_cache:
        return build()
    path = os.path.join(_cache_dir(args),
                        f"{command}-{_cache_key(command, parameters)[:32]}.json")
    doc = _cache_load(path)
    if doc is None:
        doc = build()
        _atomic_write(path, canonical_json(doc))
    return doc


# ---------------------------------------------------------------------------
# shared parameter resolution
# ---------------------------------------------------------------------------

def _resolve_group(args) -> GroupParams:
    pnq = list(args.pnq)
    if len(pnq) > 3:
        raise ParameterError(f"at most three positional integers (p n q), "
                             f"got {pnq}")
    pnq += [None] * (3 - len(pnq))
    p = args.p if args.p is not None else pnq[0]
    n = args.n if args.n is not None else pnq[1]
    q = args.q if args.q is not None else pnq[2]
    missing = [name for name, v in (("p", p), ("n", n), ("q", q)) if v is None]
    if missing:
        raise ParameterError(f"missing group parameters: {' '.join(missing)}")
    try:
        return GroupParams(p, n, q, args.gamma)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc


def _window(args) -> tuple[int, int] | None:
    if args.window is None:
        return None
    lo, hi = args.window
    if lo > hi:
        raise ParameterError(f"empty window ({lo}, {hi})")
    return (lo, hi)


def _record(name: str, expected: str, got: str,
            verdict: str | None = None) -> dict:
    if verdict is None:
        verdict = "pass" if expected == got else "fail"
    return {"name": name, "expected": expected, "got": got,
            "verdict": verdict}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_model(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    window = _window(args) or params.default_window()
    parameters = {"p": params.p, "n": params.n, "q": params.q,
                  "gamma": params.gamma, "window": list(window)}

    def build() -> dict:
        dga = build_end_dga(params, window=window)
        return dga_document("model", params, parameters, dga)

    return run_with_cache("model", args, parameters, build), 0


def _cochain_computation(params: GroupParams, args):
    return group_minimal_model(params, window=_window(args),
                               arity_bound=args.arity)


def _transfer_parameters(params: GroupParams, args) -> dict:
    arity = args.arity or params.default_arity_bound()
    window = _window(args)
    if window is None:
        pub_lo, pub_hi = params.model_window()
        window = (pub_lo - (arity - 1), pub_hi + 1)
    return {"p": params.p, "n": params.n, "q": params.q,
            "gamma": params.gamma, "window": list(window), "arity": arity}


def cmd_transfer(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    parameters = _transfer_parameters(params, args)

    def build() -> dict:
        comp = _cochain_computation(params, args)
        norm = comp.normalized()
        p = params.p
        extra = {"normalization": {
            "raw_coefficient": norm.raw_coefficient % p,
            "x_scale": norm.x_scale % p,
            "t_scale": norm.t_scale % p,
            "formal": norm.formal,
        }}
        return model_document("transfer", params, parameters, norm.model,
                              extra=extra)

    return run_with_cache("transfer", args, parameters, build), 0


def _sweep_records(model: AInfinityAlgebra, tag: str) -> list[dict]:
    records = []
    unital = strict_unitality_defects(model)
    records.append(_record(f"{tag} strict unitality", "0 defects",
                           "0 defects" if not unital
                           else f"{len(unital)} defects",
                           "pass" if not unital else "fail"))
    # with strict unitality certified, identities on unit-containing
    # words are formal consequences; excluding the degree-0 unit keeps
    # the sweep polynomial in the window depth
    exclude = (model.unit,) if not unital and model.unit else ()
    for n in range(3, model.arity_bound + 1):
        words = enumerate_words(model, n, exclude=exclude)
        rep = stasheff_defect(model, n, words=words)
        got = ("0" if rep.ok()
               else f"{len(rep.nonzero)} defective words")
        records.append(_record(f"{tag} identity defect, arity {n}",
                               "0", f"{got} ({rep.checked} words)",
                               "pass" if rep.ok() else "fail"))
    return records


def cmd_check_stasheff(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    parameters = _transfer_parameters(params, args)
    comp = _cochain_computation(params, args)
    records = _sweep_records(comp.model, "cochain")
    doc = report_document("check-report", "check-stasheff", params,
                          parameters, records)
    return doc, 0 if doc["overall"] == "pass" else 1


def _massey_records(comp, ell: int, con, cls: str, target: str,
                    compare, tag: str) -> list[dict]:
    """Below-order vanishing plus the ell-fold ratio cross-check."""
    p = comp.params.p
    records = []
    for i in range(3, ell):
        rep = massey_power(con, cls, i)
        got = (format_vector(rep.value, p) if rep.defined
               else f"obstructed at stage {rep.obstruction_stage}")
        records.append(_record(
            f"{tag} {i}-fold Massey power of {cls}", "0", got))
    result = compare(comp, nfold=ell)
    ratio = (-epsilon_sign(ell)) % p
    name = f"{tag} {ell}-fold Massey power vs transferred coefficient"
    expected = f"massey = {ratio} * transfer"
    got = (f"massey {result.c_massey}, transfer {result.c_transfer}"
           if result.report.defined else "undefined")
    records.append(_record(name, expected, got,
                           "pass" if result.holds else "fail"))
    if result.report.defined and result.c_transfer % p:
        # Massey and transferred coefficients rescale identically under a
        # change of generators, so in the basis where the family
        # coefficient is epsilon(ell) the Massey power is measured by
        # (massey / transfer) * epsilon(ell) on the target monomial.
        value = (result.c_massey * pow(result.c_transfer, -1, p)
                 * epsilon_sign(ell)) % p
        records.append(_record(
            f"{tag} {ell}-fold Massey power, normalized basis",
            f"{(-1) % p}*{target}", f"{value}*{target}"))
    return records


def cmd_massey(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    parameters = _transfer_parameters(params, args)
    comp = _cochain_computation(params, args)
    records = _massey_records(comp, params.pn, comp.con,
                              monomial_label(0, 1), monomial_label(params.h, 0),
                              massey_versus_transfer, "cochain")
    doc = report_document("massey-report", "massey", params, parameters,
                          records)
    return doc, 0 if doc["overall"] == "pass" else 1


def _classification(params: GroupParams, max_arity: int, max_power: int):
    rows = classify_admissible(params.hp, max_arity, max_power)
    records = []
    arities = sorted({r.arity for r in rows})
    records.append(_record("admissible arities", f"[{params.pn}]",
                           str(arities)))
    all_t = all(all(e == 1 for e in r.exponents) for r in rows)
    records.append(_record("all admissible tuples are all-t inputs", "yes",
                           "yes" if all_t else "no"))
    targets = sorted({r.target_exponent for r in rows})
    records.append(_record("admissible target t-exponent", "[0]",
                           str(targets)))
    return rows, records


def cmd_classify(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    max_arity = args.arity or params.pn + 1
    max_power = 2
    parameters = {"p": params.p, "n": params.n, "q": params.q,
                  "gamma": params.gamma, "max_arity": max_arity,
                  "max_power": max_power}
    rows, records = _classification(params, max_arity, max_power)
    admissible = [{"arity": r.arity, "powers": list(r.powers),
                   "exponents": list(r.exponents),
                   "target_power": r.target_power,
                   "target_exponent": r.target_exponent} for r in rows]
    doc = report_document("classify-report", "classify", params, parameters,
                          records, extra={"admissible": admissible})
    return doc, 0 if doc["overall"] == "pass" else 1


def _loop_parameters(params: GroupParams, args) -> dict:
    arity = args.arity or params.loop_arity_bound()
    window = _window(args) or (0, params.loop_window_hi())
    return {"p": params.p, "n": params.n, "q": params.q,
            "gamma": params.gamma, "window": list(window), "arity": arity}


def cmd_loops(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    if params.q == 1:
        raise ParameterError("the loop pipeline needs q >= 2")
    parameters = _loop_parameters(params, args)

    def build() -> dict:
        comp = loop_minimal_model(params, window=_window(args),
                                  arity_bound=args.arity)
        norm = comp.normalized()
        p = params.p
        extra = {"normalization": {
            "raw_coefficient": norm.raw_coefficient % p,
            "tau_scale": norm.x_scale % p,
            "xi_scale": norm.t_scale % p,
            "formal": norm.formal,
        }}
        return model_document("loops", params, parameters, norm.model,
                              extra=extra)

    return run_with_cache("loops", args, parameters, build), 0


# ---------------------------------------------------------------------------
# verify: the full battery
# ---------------------------------------------------------------------------

def _verify_cochain(params: GroupParams, args) -> list[dict]:
    p, ell, h = params.p, params.pn, params.h
    records = []
    try:
        comp = _cochain_computation(params, args)
    except PatternMismatch as exc:
        records.append(_record("cochain homology pattern",
                               "closed-form dimensions", str(exc), "fail"))
        return records
    records.append(_record("cochain homology pattern",
                           "closed-form dimensions", "match", "pass"))
    norm = comp.normalized()
    diffs = compare_models(norm.model, comp.expected())
    records.append(_record(
        "cochain operation tables vs closed form", "exact match",
        "exact match" if not diffs else f"{len(diffs)} mismatches"))
    for i in range(3, ell):
        word = (monomial_label(0, 1),) * i
        got = format_vector(norm.model.op_value(i, word), p)
        records.append(_record(f"m_{i}(t,...,t)", "0", got))
    family_word = (monomial_label(0, 1),) * ell
    x_h = monomial_label(h, 0)
    expected_family = f"{epsilon_sign(ell) % p}*{x_h}"
    got_family = format_vector(norm.model.op_value(ell, family_word), p)
    records.append(_record(f"m_{ell}(t,...,t) normalized",
                           expected_family, got_family))
    records.extend(_sweep_records(comp.model, "cochain"))
    records.extend(_massey_records(comp, ell, comp.con, monomial_label(0, 1),
                                   x_h, massey_versus_transfer, "cochain"))
    _, class_records = _classification(params, params.pn + 1, 2)
    records.extend(class_records)
    return records


def _verify_loops(params: GroupParams, args) -> list[dict]:
    p = params.p
    records = []
    if params.q == 1:
        records.append(_record("loop pipeline", "q >= 2", "skipped (q = 1)",
                               "skip"))
        return records
    words = loop_word_count(params)
    if words > VERIFY_LOOP_WORD_BUDGET:
        records.append(_record(
            "loop pipeline",
            f"cobar word space within budget ({VERIFY_LOOP_WORD_BUDGET})",
            f"skipped ({words} words; run `ainfbg loops` explicitly)",
            "skip"))
        return records
    try:
        comp = loop_minimal_model(params)
    except PatternMismatch as exc:
        records.append(_record("loop homology pattern",
                               "closed-form dimensions", str(exc), "fail"))
        return records
    records.append(_record("loop homology pattern", "closed-form dimensions",
                           "match", "pass"))
    norm = comp.normalized()
    diffs = compare_models(norm.model, comp.expected())
    records.append(_record(
        "loop operation tables vs closed form", "exact match",
        "exact match" if not diffs else f"{len(diffs)} mismatches"))
    dual = params.hp.loop_dual()
    xi = monomial_label(0, 1, LOOP_GENERATORS)
    tau_pn = monomial_label(dual.h, 0, LOOP_GENERATORS)
    if dual.ell == 2:
        got = format_vector(norm.model.op_value(2, (xi, xi)), p)
        records.append(_record("xi * xi (exceptional ring)",
                               f"{(-1) % p}*{tau_pn}", got))
        higher = sum(1 for n, table in norm.model.ops.items() if n > 2
                     for vec in table.values() if any(c % p for c in vec.values()))
        records.append(_record("higher loop operations", "none",
                               "none" if not higher else f"{higher} entries"))
    else:
        word = (xi,) * dual.ell
        got = format_vector(norm.model.op_value(dual.ell, word), p)
        records.append(_record(
            f"m_{dual.ell}(xi,...,xi) normalized",
            f"{epsilon_sign(dual.ell) % p}*{tau_pn}", got))
    records.extend(_sweep_records(comp.model, "loop"))
    records.extend(_massey_records(comp, dual.ell, comp.con, xi, tau_pn,
                                   massey_versus_loop_transfer, "loop"))
    trip = poincare_roundtrip(comp)
    records.append(_record(
        "cobar of the loop model recovers the cochain pattern",
        "match", "match" if trip.blocks_checked > 0 else "no blocks checked",
        "pass" if trip.blocks_checked > 0 else "fail"))
    return records


def cmd_verify(args) -> tuple[dict, int]:
    params = _resolve_group(args)
    parameters = _transfer_parameters(params, args)
    if params.q > 1:
        parameters["loop_window"] = [0, params.loop_window_hi()]
        parameters["loop_arity"] = params.loop_arity_bound()

    def build() -> dict:
        records = _verify_cochain(params, args)
        records.extend(_verify_loops(params, args))
        return report_document("verify-report", "verify", params, parameters,
                               records)

    doc = run_with_cache("verify", args, parameters, build)
    return doc, 0 if doc["overall"] == "pass" else 1


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

COMMANDS = {
    "model": cmd_model,
    "transfer": cmd_transfer,
    "check-stasheff": cmd_check_stasheff,
    "massey": cmd_massey,
    "classify": cmd_classify,
    "loops": cmd_loops,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ainfbg",
        description="minimal A-infinity models for the cohomology of "
                    "Z/p^n x| Z/q and their loop-space duals")
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "model": "build and serialize the endomorphism DG-algebra",
        "transfer": "transferred + normalized cochain minimal model",
        "check-stasheff": "identity sweeps on the transferred model",
        "massey": "Massey powers of t against the transferred family",
        "classify": "classify admissible higher operations by bigrading",
        "loops": "transferred + normalized loop-space model",
        "verify": "run both pipelines with every oracle and cross-check",
    }
    for name, fn in COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text[name])
        cmd.add_argument("pnq", nargs="*", type=int, metavar="P N Q",
                         help="group parameters (alternative to --p/--n/--q)")
        cmd.add_argument("--p", type=int, help="odd prime p")
        cmd.add_argument("--n", type=int, help="exponent n of the p-group")
        cmd.add_argument("--q", type=int, help="order q of the acting group")
        cmd.add_argument("--gamma", type=int,
                         help="unit of order q mod p^n (default: smallest)")
        cmd.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"),
                         help="homological-degree window override")
        cmd.add_argument("--arity", type=int,
                         help="arity bound (classify: maximal arity)")
        cmd.add_argument("--out", help="write the report to this path")
        cmd.add_argument("--json", action="store_true",
                         help="emit canonical JSON instead of text")
        cmd.add_argument("--cache-dir",
                         help="cache directory (default: $AINF_CACHE_DIR "
                              "or .cache)")
        cmd.add_argument("--no-cache", action="store_true",
                         help="bypass the document cache")
        cmd.set_defaults(fn=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.fn(args)
    except ParameterError as exc:
        print(f"ainfbg: parameter error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ainfbg: parameter error: {exc}", file=sys.stderr)
        return 2
    except TruncationExceeded as exc:
        print(f"ainfbg: truncation-window error: {exc}", file=sys.stderr)
        return 3
    except (PatternMismatch, ShapeMismatch) as exc:
        print(f"ainfbg: verification failure: {exc}", file=sys.stderr)
        return 1
    rendering = canonical_json(doc) if args.json else render_text(doc)
    if args.out:
        _atomic_write(args.out, rendering)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(rendering)
    return code


if __name__ == "__main__":
    sys.exit(main())
