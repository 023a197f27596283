"""Shared record of acceptance outcomes, printed at the end of the session."""

# "N title" -> (passed, detail)
ACCEPTANCE = {}


def record(name, passed, detail):
    ACCEPTANCE[name] = (bool(passed), detail)
    print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
