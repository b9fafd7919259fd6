"""mmassoc - client association and airtime allocation for mmWave WLANs."""

from mmassoc.cli.app import main

if __name__ == "__main__":
    main()
