from hypothesis import settings

settings.register_profile("suite", derandomize=True, max_examples=150, deadline=None)
settings.load_profile("suite")
