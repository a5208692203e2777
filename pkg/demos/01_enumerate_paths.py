"""Enumerate every admissible 3+3 trial.

A two-dose ladder with cohorts of 3 admits exactly 46 trials. Each line
is one complete trial: alternating mandated decisions and observed
states, ending in a stop and a dose recommendation (0 = no dose).
"""

from dosepath import all_zero_state, count_paths, enumerate_paths, format_path

paths = enumerate_paths(all_zero_state(2))
for path in paths:
    print(format_path(path))
print(f"\n{len(paths)} admissible trials for a 2-dose ladder")

# growth stays tame because each dose saturates at 6 patients
print("\nladder size -> admissible trials")
for doses in range(1, 9):
    print(f"  {doses} -> {count_paths(doses)}")
