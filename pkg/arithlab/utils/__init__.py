# utility functions
# rational helpers (valuations, residues, square classes), exact matrices, JSON codecs
