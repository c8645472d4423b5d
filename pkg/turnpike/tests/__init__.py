"""Tests of the turnpike package."""
