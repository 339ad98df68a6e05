"""COB correlation-tensor entanglement detector package."""
