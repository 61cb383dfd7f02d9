"""Point-null and interval-null Bayes factors, minimum sample sizes and
equivalence tests behind the Jeffreys-Lindley paradox and Bartlett's Anomaly."""

__version__ = "0.1.0"
