"""Metric here-and-there logic, metric equilibrium logic and their translations."""
