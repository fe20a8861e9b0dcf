"""
Excepciones del paquete.

Los errores de validación heredan de ValueError (igual que el resto del
proyecto trata los parámetros inválidos); los que dependen de la
especialización de parámetros o de la geometría heredan de ArithmeticError.
"""


class FanoK3Error(Exception):
    """Base común de todos los errores del paquete"""


class PolinomioInvalidoError(FanoK3Error, ValueError):
    """Polinomio cero, cúbica degenerada o grado fuera de rango"""


class PolitopoInvalidoError(FanoK3Error, ValueError):
    """Politopo de dimensión menor, origen no interior u orden de vértices incorrecto"""


class RedDegeneradaError(FanoK3Error, ValueError):
    """Retículo degenerado, o impar donde se exige par"""


class CotaOrdenExcedidaError(FanoK3Error, ValueError):
    """Grupo finito mayor que la cota configurada para la búsqueda exhaustiva"""


class ParametroInvalidoError(FanoK3Error, ValueError):
    """k fuera de rango, aridad de λ incorrecta o λ nulo"""


class SeccionInvalidaError(FanoK3Error, ValueError):
    """La sección no satisface la ecuación, o dos secciones coinciden"""


class ParametroDegeneradoError(FanoK3Error, ArithmeticError):
    """Especialización no genérica: fibras que colapsan o Δ idénticamente nulo"""


class IncidenciaAmbiguaError(FanoK3Error, ArithmeticError):
    """No se puede decidir qué componente corta una sección"""


class RedEvidenteError(FanoK3Error, ArithmeticError):
    """Ningún etiquetado de componentes reproduce las huellas esperadas"""


class EtapaFallidaError(FanoK3Error):
    """
    Fallo de una etapa del pipeline de verificación.

    Args:
        etapa: Nombre de la etapa (p.ej. 'fibras', 'red_evidente')
        causa: Excepción original
    """

    def __init__(self, etapa: str, causa: Exception):
        self.etapa = etapa
        self.causa = causa
        super().__init__(f"Etapa '{etapa}' fallida: {type(causa).__name__}: {causa}")
