"""Home-location inference for social-media users from their posting histories.

The pipeline runs gazetteer-driven place extraction, geocoding, density-based
clustering of candidate coordinates, representative selection and learned
confidence scoring, followed by geographically split topic time series and an
interaction OLS.
"""

__version__ = "0.1.0"
