# arithlab - exact arithmetic checks for arithmetic Hitchin representations
# number field towers, cocycles, forms, G2 and mod-p trace experiments

__version__ = "1.0.0"
