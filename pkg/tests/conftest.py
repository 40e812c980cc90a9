from hypothesis import HealthCheck, settings

# Property tests run derandomized so the suite is reproducible end to end,
# matching the package's determinism contract.
settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")
