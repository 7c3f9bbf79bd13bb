# HeckMort - Source Code Package
# This file makes src directory a Python package
