"""Prove protocol properties by exhausting every admissible trial.

An empty counterexample list is a proof over the checked ladder sizes,
not a sampled impression: enumeration covers every path. The weakened
rule set at the end shows the checkers actually bite.
"""

from dosepath import (
    ProtocolConfig,
    RegretRuleSet,
    check_dlt_cap,
    check_liveness,
    check_mtd_support,
    check_safety,
)
from dosepath.jsonform import report_text

for check in (check_safety, check_liveness, check_dlt_cap, check_mtd_support):
    print(report_text(check(range(1, 5))))

print("\nsame checks, but with the 5-DLT regret clause removed:")
weakened = ProtocolConfig(regret_rules=RegretRuleSet.default().without_dlt_cap())
report = check_dlt_cap(range(1, 3), weakened)
print(report_text(report))
print(f"\n-> {len(report.counterexamples)} concrete violating trials, each replayable")
