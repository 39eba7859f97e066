"""
CN Groups - finite permutation-group engine and CN-group classifier
"""

__version__ = "1.0.0"
__author__ = "CN Groups"
