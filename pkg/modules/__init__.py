# Sextic SUSY Spectral Engine Modules
