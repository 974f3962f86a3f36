"""
Domain models for the sense change system.
"""
