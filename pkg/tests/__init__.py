"""
Test package for curvature-uncertainty-lab.
"""
