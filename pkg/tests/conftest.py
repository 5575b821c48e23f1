import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> list of (check, ok); filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[k]
        ok = all(c for _, c in checks)
        if ok:
            tail = "  (" + "; ".join(name for name, _ in checks) + ")"
        else:
            tail = "  (failed: " + "; ".join(name for name, c in checks if not c) + ")"
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}{tail}")
