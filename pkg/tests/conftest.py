import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("LEVELONE_HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ALL_SIMPLE = [
    "A1", "A2", "A3", "A4", "A5", "A8",
    "B2", "B3", "B4",
    "C3", "C4",
    "D4", "D5", "D8",
    "E6", "E7", "E8",
    "F4", "G2",
]
