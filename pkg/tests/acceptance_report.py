"""Verdicts of the acceptance tests, printed by conftest's terminal summary."""

RESULTS: dict[str, tuple[bool, str]] = {}
