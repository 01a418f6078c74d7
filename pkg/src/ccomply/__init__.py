"""ccomply: MISRA C:2012 compliance checker for a C99 subset."""

__version__ = "0.1.0"
