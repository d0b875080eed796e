"""FlexTransit: agent-based FIX/FLEX transit simulation with day-to-day learning."""

__version__ = "0.1.0"
