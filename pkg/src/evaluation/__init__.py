"""Accuracy metrics, training scenarios, ablations and technology transfer."""
