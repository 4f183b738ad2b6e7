# tests module - exact identities checked with pytest
# one file per service plus the command line
