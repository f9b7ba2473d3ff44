"""Run the 36-case suite against the reference classifier and each mutant,
persist the reports, and diff every mutant run against the reference.

    python demos/mutation_campaign.py [report_dir]
"""

import sys
import tempfile

from vdm_oracle import bundled_spec_text, parse_class
from vdm_oracle.harness import MUTANTS, diff_runs, load_suite, resolve_iut, run_suite

spec = parse_class(bundled_spec_text())
suite = load_suite("table8")
report_dir = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="runs-")

base = run_suite(spec, suite, resolve_iut("builtin:reference"), report_dir=report_dir)
print(f"reference: {base.summary['pass']}/{len(suite)} pass  (run {base.run_id})")
for r in base.records:
    if r.discrepancy:
        print(f"  row {r.case_id}: oracle {r.oracle_outcome}; note: {r.discrepancy}")

for mid, fault in MUTANTS.items():
    run = run_suite(spec, suite, resolve_iut(f"builtin:mutant:{mid}"), report_dir=report_dir)
    diff = diff_runs(base, run)
    print(f"{mid} ({fault}): {len(diff.regressions)} regressions -> rows {list(diff.regressions)}")

print(f"reports in {report_dir}")
