"""Parameter decision: technology factors, gradient descent and baselines."""
