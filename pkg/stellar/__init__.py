"""Majorana stellar geometry of spin-J and N-qubit pure states"""

__version__ = "0.1.0"
