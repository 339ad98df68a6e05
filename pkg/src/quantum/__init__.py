"""Numerics, bases, states, correlation tensors, criteria, sampling oracle and scans."""
