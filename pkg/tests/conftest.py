def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: Monte Carlo checks with up to a million draws')
