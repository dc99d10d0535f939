# Verification suites, one <name>_suite.py module per suite
