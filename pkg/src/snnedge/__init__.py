"""Spiking-network digit classifier with an inference service, a load
benchmark, and a discrete-event model of replicated deployments."""

__version__ = "0.1.0"
