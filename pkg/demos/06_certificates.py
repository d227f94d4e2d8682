"""End-to-end certificates for every family, plus a corrupted control.

Run: python demos/06_certificates.py
"""
from cancelab.cli import ALL_RUNS
from cancelab.lab import run_full_certificate

for family, params in ALL_RUNS:
    cert = run_full_certificate(family, params)
    passed = sum(s.status == "pass" for s in cert.steps)
    print(f"{cert.example:12} {str(params):10} steps {passed}/{len(cert.steps)} "
          f"stable={cert.stably_isomorphic} obstruction={cert.obstruction_unsolvable}")

# breaking ideal equality makes the certificate fail closed at the first step
bad = run_full_certificate("four_variable", {"v2": "x; y^2; z*t-1"})
print("corrupted v2:", [(s.id, s.status) for s in bad.steps if s.status != "pass"][:3], bad.conclusion)

print(run_full_certificate("four_variable").to_text())
