"""
Clase base de los procesos de verificación por k.

Las fases son las etapas del pipeline espejo; cada k termina con un
RegistroK y el log en archivo cierra con un resumen indexado por k.
"""

import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from threading import Event
from typing import Callable, Iterable, Optional

from fano_k3 import catalogo


# ========================================
# FASES, NIVELES Y ESTADOS
# ========================================

class FaseProceso(Enum):
    """Etapas del pipeline espejo, con el nombre que usan los errores de etapa"""
    INICIAL = "inicial"
    SOLO_RED = "solo_red"
    ESPECIALIZACIONES = "especializaciones"
    FIBRAS = "fibras"
    SECCIONES = "secciones"
    RED_EVIDENTE = "red_evidente"
    FORMAS = "formas"
    MORDELL_WEIL = "mordell_weil"
    FINALIZACION = "finalizacion"

    @classmethod
    def de_chequeo(cls, chequeo: str) -> "FaseProceso":
        """Fase en la que se decide un chequeo del veredicto ('mw_rank' → MORDELL_WEIL)."""
        return cls.MORDELL_WEIL if chequeo == "mw_rank" else cls.FORMAS


class NivelMensaje(Enum):
    DEBUG = "debug"
    INFO = "info"
    SUCCESS = "success"
    WARNING = "warning"
    ERROR = "error"


class EstadoProceso(Enum):
    DETENIDO = "detenido"
    INICIANDO = "iniciando"
    VERIFICANDO = "verificando"
    COMPLETADO = "completado"
    CANCELADO = "cancelado"
    ERROR = "error"


class ResultadoK(Enum):
    """Cómo terminó un k"""
    VERIFICADO = "verificado"
    FALLIDO = "fallido"
    ERROR = "error"
    SOLO_RED = "solo_red"


@dataclass
class RegistroK:
    """Última fase alcanzada por un k y su resultado"""
    k: int
    fase: FaseProceso
    resultado: ResultadoK
    detalle: str = ""

    def linea(self) -> str:
        return f"k={self.k:>2} | {self.resultado.value:<10} | {self.fase.value:<17} | {self.detalle}"


@dataclass
class EstadisticasBase:
    """Tiempos de la corrida y registro por k"""
    tiempo_inicio: Optional[datetime] = None
    tiempo_fin: Optional[datetime] = None
    registros: dict[int, RegistroK] = field(default_factory=dict)

    @property
    def tiempo_total(self) -> float:
        if self.tiempo_inicio and self.tiempo_fin:
            return (self.tiempo_fin - self.tiempo_inicio).total_seconds()
        return 0.0

    def contar(self, resultado: ResultadoK) -> int:
        return sum(1 for r in self.registros.values() if r.resultado == resultado)


# ========================================
# CLASE BASE
# ========================================

class BackendBase(ABC):
    """
    Base de los verificadores.

    Las subclases implementan validar_parametros, _procesar_principal y
    _generar_reporte; `ejecutar` encadena validación, estados y cancelación.
    Los callbacks reciben (fase, nivel, texto), (actual, total, porcentaje)
    y EstadoProceso respectivamente.
    """

    def __init__(self,
                 callback_mensaje: Optional[Callable] = None,
                 callback_progreso: Optional[Callable] = None,
                 callback_estado: Optional[Callable] = None):
        self.callback_mensaje = callback_mensaje or self._callback_default
        self.callback_progreso = callback_progreso or self._callback_default
        self.callback_estado = callback_estado or self._callback_default

        self.estado_actual = EstadoProceso.DETENIDO
        self.fase_actual = FaseProceso.INICIAL
        self.estadisticas = EstadisticasBase()
        self.log_file: Optional[Path] = None
        self._event_cancelar = Event()
        self.logger = logging.getLogger(self.__class__.__name__)

    def _callback_default(self, *args, **kwargs):
        pass

    # ========================================
    # MÉTODOS ABSTRACTOS
    # ========================================

    @abstractmethod
    def validar_parametros(self, *args, **kwargs) -> tuple[bool, str]:
        """
        Returns:
            (bool, str): (es_valido, mensaje_error)
        """

    @abstractmethod
    def _procesar_principal(self, *args, **kwargs) -> dict:
        pass

    @abstractmethod
    def _generar_reporte(self) -> dict:
        """Reporte con los k terminados hasta el momento."""

    # ========================================
    # COMUNICACIÓN
    # ========================================

    def _enviar_mensaje(self, fase: FaseProceso, nivel: NivelMensaje, texto: str):
        self.callback_mensaje(fase, nivel, texto)
        self._escribir_log(f"[{datetime.now():%H:%M:%S}] [{nivel.value.upper():<7}] [{fase.value}] {texto}")

    def _actualizar_progreso(self, actual: int, total: int):
        porcentaje = (actual / total * 100) if total > 0 else 0.0
        self.callback_progreso(actual, total, porcentaje)

    def _cambiar_estado(self, nuevo_estado: EstadoProceso):
        self.estado_actual = nuevo_estado
        self.callback_estado(nuevo_estado)
        self._escribir_log(f"Estado: {nuevo_estado.value}")

    def _cambiar_fase(self, nueva_fase: FaseProceso):
        self.fase_actual = nueva_fase
        self._enviar_mensaje(nueva_fase, NivelMensaje.DEBUG, f"Fase: {nueva_fase.value}")

    def _registrar_k(self, k: int, fase: FaseProceso, resultado: ResultadoK, detalle: str = ""):
        """Anota cómo terminó k; un segundo registro del mismo k lo reemplaza."""
        self.estadisticas.registros[k] = RegistroK(k, fase, resultado, detalle)

    # ========================================
    # CANCELACIÓN
    # ========================================

    def cancelar(self):
        """Cancela el proceso al terminar el k en curso"""
        self._event_cancelar.set()
        self._cambiar_estado(EstadoProceso.CANCELADO)
        self._enviar_mensaje(self.fase_actual, NivelMensaje.WARNING, "Proceso cancelado por el usuario")

    def _verificar_cancelacion(self):
        if self._event_cancelar.is_set():
            raise InterruptedError("Proceso cancelado por el usuario")

    # ========================================
    # LOG EN ARCHIVO
    # ========================================

    def _crear_log_archivo(self, carpeta_destino: str, prefijo: str, parametros: dict):
        """Abre `<prefijo>_<AAAAMMDD-HHMMSS>.log` con los parámetros de la corrida."""
        ahora = datetime.now()
        self.log_file = Path(carpeta_destino) / f"{prefijo}_{ahora:%Y%m%d-%H%M%S}.log"
        self._escribir_log("=" * 80)
        self._escribir_log(f"{self.__class__.__name__} - {ahora:%Y-%m-%d %H:%M:%S}")
        for clave, valor in parametros.items():
            self._escribir_log(f"{clave}: {valor}")
        self._escribir_log("=" * 80)

    def _escribir_log(self, mensaje: str):
        if not self.log_file:
            return
        try:
            with open(self.log_file, 'a', encoding='utf-8') as f:
                f.write(f"{mensaje}\n")
        except OSError as e:
            self.logger.error(f"Error al escribir log: {e}")

    def _finalizar_log_archivo(self, totales: dict, estado: EstadoProceso):
        """Resumen final: una línea por k en orden y luego los totales."""
        if not self.log_file:
            return
        self._escribir_log("")
        self._escribir_log("=" * 80)
        self._escribir_log("RESUMEN POR K")
        self._escribir_log("=" * 80)
        for k in sorted(self.estadisticas.registros):
            self._escribir_log(self.estadisticas.registros[k].linea())
        self._escribir_log("-" * 80)
        for clave, valor in totales.items():
            if clave != "tiempo_total":
                self._escribir_log(f"{clave}: {valor}")
        minutos, segundos = divmod(self.estadisticas.tiempo_total, 60)
        self._escribir_log(f"Tiempo total: {int(minutos)}min {segundos:.1f}s" if minutos else
                           f"Tiempo total: {segundos:.1f}s")
        self._escribir_log(f"Estado final: {estado.value}")
        self._escribir_log("=" * 80)

    # ========================================
    # VALIDACIÓN
    # ========================================

    @staticmethod
    def _validar_indices(ks: Iterable[int], rango: range = catalogo.RANGO_K) -> tuple[bool, str]:
        ks = list(ks)
        if not ks:
            return False, "Debe indicar al menos un k"
        fuera = [k for k in ks if k not in rango]
        if fuera:
            return False, f"k fuera de rango {rango.start}..{rango.stop - 1}: {fuera}"
        return True, ""

    @staticmethod
    def _validar_carpeta_log(carpeta: Optional[str]) -> tuple[bool, str]:
        """Si se indica carpeta de log, se crea y debe admitir escritura."""
        if carpeta is None:
            return True, ""
        ruta = Path(carpeta)
        try:
            ruta.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            return False, f"No se pudo crear la carpeta de log {ruta}: {e}"
        if not os.access(ruta, os.W_OK):
            return False, f"Sin permisos de escritura en {ruta}"
        return True, ""

    # ========================================
    # FLUJO DE EJECUCIÓN
    # ========================================

    def ejecutar(self, *args, **kwargs) -> dict:
        """
        Valida, procesa y deja el estado final.

        Raises:
            ValueError: Parámetros inválidos
        """
        es_valido, mensaje_error = self.validar_parametros(*args, **kwargs)
        if not es_valido:
            self._enviar_mensaje(FaseProceso.INICIAL, NivelMensaje.ERROR, f"Validación fallida: {mensaje_error}")
            raise ValueError(mensaje_error)

        self._event_cancelar.clear()
        self._cambiar_estado(EstadoProceso.INICIANDO)
        try:
            resultado = self._procesar_principal(*args, **kwargs)
        except InterruptedError:
            self._cambiar_estado(EstadoProceso.CANCELADO)
            return self._generar_reporte()
        except Exception as e:
            self._cambiar_estado(EstadoProceso.ERROR)
            self._enviar_mensaje(self.fase_actual, NivelMensaje.ERROR, f"Error durante el proceso: {e}")
            raise

        if not self._event_cancelar.is_set():
            self._cambiar_estado(EstadoProceso.COMPLETADO)
        return resultado

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(estado={self.estado_actual.value}, fase={self.fase_actual.value})"
