"""mmassoc - client association and airtime allocation for mmWave WLANs."""

__version__ = "0.1.0"
