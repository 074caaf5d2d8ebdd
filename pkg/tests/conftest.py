from __future__ import annotations

from hypothesis import settings

# Deterministic property tests: the suite doubles as an acceptance gate,
# so reruns must see the same examples.
settings.register_profile("gate", derandomize=True, max_examples=200)
settings.load_profile("gate")
