"""Command groups of the thetakernel CLI."""
