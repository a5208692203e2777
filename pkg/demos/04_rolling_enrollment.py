"""Rolling enrollment: cohorts close at 3, 2 or a single patient.

Letting cohorts close early means de-escalation can happen sooner: a
pair showing 2 DLTs at the top dose triggers retreat without waiting
for a third participant. The same engine accepts the mixed-cohort
trial below that a fixed-cohort protocol rejects.
"""

from dosepath import (
    DEFAULT_CONFIG,
    ROLLING_CONFIG,
    contains_path,
    count_paths,
    parse_path,
    parse_state,
)

start = parse_state("[0/3,0/3,0/3]-[]")
line = "[sta,[2/5,0/3,0/3]-[],des,[0/6,0/3]-[2/5],stop,recommend_dose(2)]."
trial = parse_path(line, ROLLING_CONFIG)

print("candidate trial from a fully started 3-dose ladder:")
print(f"  {line}")
print(f"admissible with rolling cohorts [3,2,1]: "
      f"{contains_path(start, trial, ROLLING_CONFIG)}")
print(f"admissible with fixed cohorts [3]:      "
      f"{contains_path(start, trial, DEFAULT_CONFIG)}")

print("\nrolling enrollment multiplies the trial space:")
for doses in (1, 2):
    fixed = count_paths(doses, DEFAULT_CONFIG)
    rolling = count_paths(doses, ROLLING_CONFIG)
    print(f"  {doses} dose(s): {fixed} fixed vs {rolling} rolling")
