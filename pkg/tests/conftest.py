import json
import os

RESULTS: dict[str, dict] = {}
RESULTS_PATH = os.path.join(os.path.dirname(__file__), "..", "results", "acceptance.json")


def record(key: str, passed: bool, detail: str, **data):
    RESULTS[key] = {"passed": bool(passed), "detail": detail, **data}
    line = f"[{key}] {'PASS' if passed else 'FAIL'}: {detail}"
    print(line, flush=True)
    os.makedirs(os.path.dirname(RESULTS_PATH), exist_ok=True)
    existing = {}
    if os.path.exists(RESULTS_PATH):
        try:
            with open(RESULTS_PATH) as fh:
                existing = json.load(fh)
        except json.JSONDecodeError:
            existing = {}
    existing[key] = RESULTS[key]
    with open(RESULTS_PATH, "w") as fh:
        json.dump(existing, fh, indent=2, sort_keys=True, default=float)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k.split()[-1])):
        r = RESULTS[key]
        terminalreporter.write_line(f"{key}: {'PASS' if r['passed'] else 'FAIL'} - {r['detail']}")
