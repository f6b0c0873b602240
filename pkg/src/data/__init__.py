"""Design configs, event traces, labels and the bundled configuration table."""
