import os

from hypothesis import HealthCheck, settings

# HYPOTHESIS_PROFILE=acceptance runs the full example counts.
settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile(
    "acceptance",
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))
