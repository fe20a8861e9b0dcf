"""
Adaptador de consola para los backends.

Traduce los callbacks unificados (mensaje, progreso, estado) a líneas
`[HH:MM:SS] icono texto` en stderr; stdout queda libre para el informe.
"""

import sys
from datetime import datetime
from typing import Optional, TextIO

from fano_k3.backend_base import EstadoProceso, FaseProceso, NivelMensaje


ICONOS = {
    NivelMensaje.DEBUG: "🔍",
    NivelMensaje.INFO: "ℹ️",
    NivelMensaje.SUCCESS: "✅",
    NivelMensaje.WARNING: "⚠️",
    NivelMensaje.ERROR: "❌"
}

MENSAJES_ESTADO = {
    EstadoProceso.DETENIDO: "⏹️ Proceso detenido",
    EstadoProceso.INICIANDO: "🚀 Iniciando verificación...",
    EstadoProceso.VERIFICANDO: "🔍 Verificando redes...",
    EstadoProceso.COMPLETADO: "✅ Verificación completada",
    EstadoProceso.CANCELADO: "🛑 Verificación cancelada",
    EstadoProceso.ERROR: "❌ Error en la verificación"
}


class AdaptadorConsola:
    """
    Callbacks listos para pasar a un BackendBase.

    Args:
        salida: Flujo de escritura (stderr por defecto)
        detallado: Si es False se omiten los mensajes DEBUG
        silencioso: Si es True no se escribe nada
    """

    def __init__(self, salida: Optional[TextIO] = None, detallado: bool = False, silencioso: bool = False):
        self.salida = salida if salida is not None else sys.stderr
        self.detallado = detallado
        self.silencioso = silencioso
        self.ultimo_porcentaje: Optional[float] = None

    def callbacks(self) -> dict:
        return {
            "callback_mensaje": self.callback_mensaje,
            "callback_progreso": self.callback_progreso,
            "callback_estado": self.callback_estado,
        }

    def _escribir(self, texto: str):
        if self.silencioso:
            return
        timestamp = datetime.now().strftime("%H:%M:%S")
        print(f"[{timestamp}] {texto}", file=self.salida, flush=True)

    def callback_mensaje(self, fase: FaseProceso, nivel: NivelMensaje, texto: str):
        if nivel == NivelMensaje.DEBUG and not self.detallado:
            return
        self._escribir(f"{ICONOS.get(nivel, 'ℹ️')} {texto}")

    def callback_progreso(self, actual: int, total: int, porcentaje: float):
        if total <= 0:
            return
        self.ultimo_porcentaje = porcentaje
        self._escribir(f"📊 {actual}/{total} ({porcentaje:.0f}%)")

    def callback_estado(self, estado: EstadoProceso):
        self._escribir(MENSAJES_ESTADO.get(estado, estado.value))
