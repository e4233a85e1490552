"""
ELICITCHECK - Package initialization
"""

__version__ = "0.3.0"
__author__ = "ELICITCHECK Team"
__description__ = (
    "Indirect elicitation, strong IE and calibration checks for surrogate losses"
)
