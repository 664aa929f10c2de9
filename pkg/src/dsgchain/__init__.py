"""Driven, damped nonlinear oscillator chains with an energy-consistent implicit scheme."""
