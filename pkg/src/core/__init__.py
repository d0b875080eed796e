"""Core settings, logging, exceptions and invariant checks for the FlexTransit simulator."""
