"""
Utility subpackages: io, timer, math and parallel.
"""
