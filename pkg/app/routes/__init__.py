# This file makes routes a Python package