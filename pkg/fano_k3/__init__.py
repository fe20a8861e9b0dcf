"""
fano_k3 - verificación exacta de datos espejo para superficies K3 tóricas
asociadas a los 18 politopos de Fano tridimensionales.
"""

__version__ = "1.0.0"
