"""Numerical services: roots, sphere maps, Majorana constellations, Schur-Weyl blocks, DFS"""
