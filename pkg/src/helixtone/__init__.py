"""Pitch shifting and time scaling of monophonic tones on a cylinder of (shape time, phase)."""
