"""spingreen: Green functions, spectra and renormalized Green functions of spin-orbit Hamiltonians."""
