"""
quadpair - square groups, quadratic pair modules, sign groups and pin-group replays
"""

__version__ = "1.0.0"
