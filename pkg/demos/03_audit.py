"""
Running the audit
=================

Every check the package makes about itself, as records. The Pekeris
check is expected to fail at the default tolerance.
"""

from nuspectra import oracle, validation

cfg = validation.Settings()

for rec in validation.run_suite("pekeris", cfg):
    if rec["check"] != "pekeris:curve":
        print(rec["status"], rec["check"], rec["measured"])

# Where does the approximation cross 1%, 5%, 10%?
scan = oracle.pekeris_error_scan(2.0, 2001)
for level, x in scan.crossings.items():
    print(f"{level:.0%} at lambda*r = {x:.3f}")

# The rest of the suites; summarise by status.
records = validation.run_suite("all", cfg)
counts = {}
for rec in records:
    counts[rec["status"]] = counts.get(rec["status"], 0) + 1
print(counts)
print([r["check"] for r in records if r["status"] == "fail"])
