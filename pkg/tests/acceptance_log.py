"""Shared list of acceptance verdicts, printed at the end of a pytest run."""
RESULTS: list[str] = []


def record(number, title, ok, detail, seconds):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail}; {seconds:.2f}s)"
    RESULTS.append(line)
    print(line)
    return line
