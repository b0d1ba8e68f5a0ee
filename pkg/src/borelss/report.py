"""Report assembly: one stable document per run, text or JSON rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import FiberPresentation
from .driver import Scenario, SearchResult, merged_case_id
from .families import families_for_case
from .indices import IndexReport, index_report
from .verify import VerifyRecord

SCHEMA_VERSION = "1"


def _params_str(params: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(params.items())) or "-"


@dataclass
class ScenarioBlock:
    scenario: Scenario
    indices: IndexReport
    family_ids: list[str]
    verify_records: list[VerifyRecord]


def build_blocks(fiber: FiberPresentation, result: SearchResult,
                 verify_records: list[VerifyRecord] | None = None) -> list[ScenarioBlock]:
    by_family: dict[str, list[VerifyRecord]] = {}
    for rec in verify_records or []:
        by_family.setdefault(rec.family_id, []).append(rec)
    blocks = []
    for s in result.scenarios:
        fams = []
        if fiber.n == 4:
            fams = [f.full_id for f in
                    families_for_case(fiber.field_tag, merged_case_id(s.case_id))]
        recs = [r for fid in fams for r in by_family.get(fid, [])
                if r.case_id == s.case_id]
        blocks.append(ScenarioBlock(s, index_report(s), fams, recs))
    return blocks


def to_document(config: dict, blocks: list[ScenarioBlock],
                pruned=None, extra: dict | None = None) -> dict:
    doc = {
        "version": SCHEMA_VERSION,
        "config": {k: config[k] for k in sorted(config)},
        "scenarios": [],
    }
    for b in blocks:
        s = b.scenario
        ideals = []
        for fid in b.family_ids:
            entry = {"family_id": fid, "params_pass": None, "params_fail": None}
            recs = [r for r in b.verify_records if r.family_id == fid]
            if recs:
                entry["params_pass"] = sum(r.params_pass() for r in recs)
                entry["params_fail"] = sorted(
                    _params_str(f.params) for r in recs for f in r.failures)
            ideals.append(entry)
        doc["scenarios"].append({
            "case_id": s.case_id,
            "merged_case_id": merged_case_id(s.case_id),
            "decisions": [[d.r, d.gen_label, d.value_label] for d in s.decisions],
            "betti": list(s.betti.coeffs),
            "ideals": ideals,
            "indices": {
                "co_ind2": b.indices.co_ind2,
                "volovikov_i": b.indices.volovikov_i,
                "ind_upper": b.indices.ind_upper,
            },
            "statements": [[st.kind, st.text] for st in b.indices.statements],
        })
    if pruned is not None:
        doc["pruned"] = [{"decisions": [str(d) for d in p.decisions],
                          "reason": p.reason} for p in pruned]
    if extra:
        doc.update(extra)
    return doc


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_text(doc: dict) -> str:
    lines = []
    cfg = doc["config"]
    lines.append(f"# run: {cfg.get('command')} field={cfg.get('field')} "
                 f"m={cfg.get('m')} n={cfg.get('n')}")
    for sc in doc["scenarios"]:
        lines.append("")
        lines.append(f"scenario {sc['case_id']}")
        decs = "; ".join(f"d{r}[{g}] = {v}" for r, g, v in sc["decisions"])
        lines.append(f"  decisions: {decs}")
        betti = " ".join(str(c) for c in sc["betti"])
        lines.append(f"  betti: {betti}   (total {sum(sc['betti'])})")
        for ideal in sc["ideals"]:
            extra = ""
            if ideal["params_pass"] is not None:
                extra = (f"   params pass: {ideal['params_pass']}"
                         f"   fail: {len(ideal['params_fail'])}")
            lines.append(f"  ideal family: {ideal['family_id']}{extra}")
        idx = sc["indices"]
        lines.append(f"  co-index: {idx['co_ind2']}   spectral index: "
                     f"{idx['volovikov_i']}   index upper bound: {idx['ind_upper']}")
        for kind, text in sc["statements"]:
            lines.append(f"  - [{kind}] {text}")
    if "pruned" in doc:
        lines.append("")
        lines.append(f"# pruned branches: {len(doc['pruned'])}")
        for p in doc["pruned"]:
            lines.append(f"  - {p['reason']}: " + "; ".join(p["decisions"]))
    if "local_action" in doc:
        la = doc["local_action"]
        lines.append("")
        lines.append(f"# induced-action candidates: {len(la['candidates'])}")
        for cand in la["candidates"]:
            lines.append(f"  action {cand['name']}:")
            for row in cand["columns"]:
                lines.append(f"    row {row['l']}: dim {row['k0']} at k=0, "
                             f"{row['kpos']} at k>0")
            lines.append(f"    verdict: {cand['verdict']}")
    if "verify_summary" in doc:
        vs = doc["verify_summary"]
        lines.append("")
        lines.append(f"# verification: {vs['records']} family records, "
                     f"{vs['params_checked']} instantiations, "
                     f"{vs['failures']} failures")
        for f in vs["failing"]:
            lines.append(f"  - {f}")
    return "\n".join(lines) + "\n"
