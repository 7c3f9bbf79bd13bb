# HeckMort - Tests Package
# This file makes tests directory a Python package
