"""
Verificación de la simetría espejo para los politopos de Fano.

Para cada k se comparan los invariantes del retículo evidente E_k con los
de L_k: signaturas, forma discriminante (contra −q_{L_k}), criterio de
unicidad para U ⊕ L_k, determinantes, grupos y rango de Mordell-Weil.
`VerificadorEspejo` reparte los k en hilos y reporta por callbacks.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from fano_k3 import catalogo
from fano_k3.backend_base import (
    BackendBase,
    EstadisticasBase,
    EstadoProceso,
    FaseProceso,
    NivelMensaje,
    ResultadoK,
)
from fano_k3.elliptic import (
    EULER_K3,
    FiberConfiguration,
    KodairaFiber,
    configuracion_fibras,
    generic_specializations,
    multiconjunto_fibras,
    multiconjunto_publicado,
    orden_torsion,
    secciones_publicadas,
    verify_section,
)
from fano_k3.errores import EtapaFallidaError, FanoK3Error, ParametroDegeneradoError, ParametroInvalidoError
from fano_k3.lattice import (
    COTA_ORDEN_POR_DEFECTO,
    FiniteQuadraticForm,
    GramLattice,
    ResumenRed,
    determinant,
    direct_sum,
    discriminant_form,
    forms_isomorphic,
    hiperbolico,
    negate_form,
    red_L,
    resumen_red,
    signature,
    unique_by_invariant,
)
from fano_k3.nslattice import (
    EvidentLattice,
    MordellWeilReport,
    beta_compatible,
    build_evident_desde,
    mordell_weil_report,
)


logger = logging.getLogger(__name__)

__all__ = [
    'MirrorVerdict',
    'InformeEspejo',
    'AnalisisFibracion',
    'AnalisisEvidente',
    'VerificadorEspejo',
    'CHEQUEOS',
    'analizar_fibracion',
    'analizar_evidente',
    'verify_mirror',
    'report_all',
    'mutaciones_gram',
    'control_negativo',
]

CHEQUEOS = ("signature", "form_isomorphism", "uniqueness", "determinant", "group", "mw_rank")
"""Nombres estables de los chequeos de un veredicto (claves del JSON)."""

RANGO_SOLO_RED = range(1, 6)


# ========================================
# TIPOS
# ========================================

@dataclass
class MirrorVerdict:
    """
    Resultado de la verificación para un k.

    `checks` tiene las claves de CHEQUEOS; si una etapa falla, `error`
    guarda (etapa, tipo, mensaje) y el veredicto es negativo.
    """
    k: int
    checks: dict[str, bool] = field(default_factory=dict)
    lambdas: tuple[Fraction, ...] = ()
    fibras: list[KodairaFiber] = field(default_factory=list)
    evidente: Optional[EvidentLattice] = None
    forma_e: Optional[FiniteQuadraticForm] = None
    forma_l: Optional[FiniteQuadraticForm] = None
    q_beta: list[Fraction] = field(default_factory=list)
    secciones: dict[str, bool] = field(default_factory=dict)
    mordell_weil: Optional[MordellWeilReport] = None
    rango_mw_esperado: Optional[int] = None
    error: Optional[dict[str, str]] = None

    @property
    def overall(self) -> bool:
        return self.error is None and bool(self.checks) and all(self.checks.values())

    @property
    def etapa_fallida(self) -> Optional[str]:
        if self.error is not None:
            return self.error["stage"]
        return next((nombre for nombre in CHEQUEOS if not self.checks.get(nombre, True)), None)


@dataclass
class InformeEspejo:
    """Veredictos completos (k = 6..18) y resúmenes solo-retículo (k = 1..5)."""
    semilla: int
    especializaciones: int
    veredictos: list[MirrorVerdict] = field(default_factory=list)
    resumenes: list[ResumenRed] = field(default_factory=list)
    cancelado: bool = False

    @property
    def overall(self) -> bool:
        return not self.cancelado and all(v.overall for v in self.veredictos)


@dataclass
class AnalisisFibracion:
    """Especializaciones genéricas de un k y la configuración de la primera."""
    k: int
    lambdas: list[tuple[Fraction, ...]]
    fibras: list[list[KodairaFiber]]
    configuracion: FiberConfiguration
    secciones: dict[str, bool]
    torsion_o_prima: Optional[int] = None

    @property
    def coincide_con_tabla(self) -> bool:
        publicado = multiconjunto_publicado(self.k)
        return all(multiconjunto_fibras(f) == publicado for f in self.fibras)


@dataclass
class AnalisisEvidente:
    """Retículo evidente, formas discriminantes y β compatibles de un k."""
    fibracion: AnalisisFibracion
    evidente: EvidentLattice
    forma_e: FiniteQuadraticForm
    forma_l: FiniteQuadraticForm
    betas: list[Optional[tuple[int, ...]]]

    @property
    def q_beta(self) -> list[Fraction]:
        return [self.forma_e.valor_q(b) for b in self.betas if b is not None]


# ========================================
# ETAPAS
# ========================================

@contextmanager
def _etapa(nombre: str) -> Iterator[None]:
    try:
        yield
    except EtapaFallidaError:
        raise
    except (FanoK3Error, ArithmeticError, ValueError) as e:
        raise EtapaFallidaError(nombre, e) from e


def analizar_fibracion(k: int, semilla: int = 0, especializaciones: int = 3,
                       intentos_maximos: int = 20) -> AnalisisFibracion:
    """
    Sortea las especializaciones, comprueba el multiconjunto de fibras y la
    suma de Euler en cada una y arma la configuración de secciones de la
    primera.

    Raises:
        EtapaFallidaError: 'especializaciones', 'fibras' o 'secciones'
    """
    with _etapa("especializaciones"):
        sorteadas = generic_specializations(k, especializaciones, semilla, intentos_maximos)

    with _etapa("fibras"):
        publicado = multiconjunto_publicado(k)
        for esp in sorteadas:
            euler = sum(f.euler * f.orbita for f in esp.fibras)
            if euler != EULER_K3:
                raise ParametroDegeneradoError(f"k={k} λ={esp.lambdas}: Σ e_v = {euler}")
            obtenido = multiconjunto_fibras(esp.fibras)
            if obtenido != publicado:
                raise ParametroDegeneradoError(f"k={k} λ={esp.lambdas}: fibras {obtenido}, se esperaba {publicado}")

    with _etapa("secciones"):
        primera = sorteadas[0]
        secciones = {s.nombre: verify_section(primera.fibracion, s)
                     for s in secciones_publicadas(primera.fibracion) if not s.es_cero}
        configuracion = configuracion_fibras(primera)
        torsion = None
        o_prima = next((s for s in configuracion.secciones if s.nombre == "O'"), None)
        if o_prima is not None:
            torsion = orden_torsion(primera.fibracion, o_prima.punto())

    return AnalisisFibracion(
        k=k,
        lambdas=[esp.lambdas for esp in sorteadas],
        fibras=[esp.fibras for esp in sorteadas],
        configuracion=configuracion,
        secciones=secciones,
        torsion_o_prima=torsion,
    )


def analizar_evidente(k: int, semilla: int = 0, especializaciones: int = 3, intentos_maximos: int = 20,
                      cota_orden: int = COTA_ORDEN_POR_DEFECTO,
                      fibracion: Optional[AnalisisFibracion] = None) -> AnalisisEvidente:
    """
    Raises:
        EtapaFallidaError: además de las de analizar_fibracion, 'red_evidente'
    """
    if fibracion is None:
        fibracion = analizar_fibracion(k, semilla, especializaciones, intentos_maximos)
    with _etapa("red_evidente"):
        evidente = build_evident_desde(k, fibracion.configuracion, cota_orden)
        forma_e = discriminant_form(evidente.red)
        forma_l = discriminant_form(red_L(k))
        betas = beta_compatible(forma_e, k)
    return AnalisisEvidente(fibracion, evidente, forma_e, forma_l, betas)


def _validar_k_espejo(k: int):
    if k not in catalogo.RANGO_FIBRADO:
        raise ParametroInvalidoError(
            f"k={k}: la verificación completa requiere k en "
            f"{catalogo.RANGO_FIBRADO.start}..{catalogo.RANGO_FIBRADO.stop - 1}"
        )


def verify_mirror(k: int, semilla: int = 0, especializaciones: int = 3, intentos_maximos: int = 20,
                  cota_orden: int = COTA_ORDEN_POR_DEFECTO,
                  gram_l: Optional[Sequence[Sequence[int]]] = None,
                  rango_mw: Optional[int] = None) -> MirrorVerdict:
    """
    Pipeline completo para un k en 6..18.

    Args:
        gram_l: Gram alternativo para L_k (control negativo); por defecto
            el de la tabla
        rango_mw: Rango de Mordell-Weil exigido; por defecto catalogo.RANGO_MW

    Raises:
        ParametroInvalidoError: k fuera de 6..18
        EtapaFallidaError: Fallo de alguna etapa, con su nombre
    """
    _validar_k_espejo(k)
    analisis = analizar_evidente(k, semilla, especializaciones, intentos_maximos, cota_orden)
    evidente = analisis.evidente
    fibracion = analisis.fibracion
    ell = catalogo.numero_vertices(k)

    with _etapa("formas"):
        red_l = red_L(k) if gram_l is None else GramLattice.desde_matriz(gram_l)
        forma_l = analisis.forma_l if gram_l is None else discriminant_form(red_l)
        forma_e = analisis.forma_e
        if forma_e.orden > cota_orden or forma_l.orden > cota_orden:
            isomorfas = False
        else:
            isomorfas = bool(forms_isomorphic(forma_e, negate_form(forma_l), cota_orden))
        unicidad = unique_by_invariant(direct_sum(hiperbolico(), red_l))

    with _etapa("mordell_weil"):
        mw = mordell_weil_report(evidente, fibracion.configuracion)
        rango_esperado = catalogo.RANGO_MW[k] if rango_mw is None else rango_mw

    checks = {
        "signature": signature(evidente.red) == (1, 22 - ell) and signature(red_l) == (1, ell - 4),
        "form_isomorphism": isomorfas,
        "uniqueness": unicidad,
        "determinant": abs(determinant(evidente.red)) == abs(determinant(red_l)),
        "group": forma_e.factores == forma_l.factores == catalogo.GRUPOS[k],
        "mw_rank": mw.rango == rango_esperado == mw.rango_secciones,
    }
    logger.debug("k=%s checks=%s", k, checks)

    return MirrorVerdict(
        k=k,
        checks=checks,
        lambdas=fibracion.lambdas[0],
        fibras=list(fibracion.configuracion.fibras),
        evidente=evidente,
        forma_e=forma_e,
        forma_l=forma_l,
        q_beta=analisis.q_beta,
        secciones=dict(fibracion.secciones),
        mordell_weil=mw,
        rango_mw_esperado=rango_esperado,
    )


def _veredicto_fallido(k: int, error: EtapaFallidaError) -> MirrorVerdict:
    return MirrorVerdict(k=k, error={
        "stage": error.etapa,
        "type": type(error.causa).__name__,
        "message": str(error.causa),
    })


# ========================================
# CONTROL NEGATIVO
# ========================================

def mutaciones_gram(gram: Sequence[Sequence[int]]) -> Iterator[tuple[tuple[int, int, int], list[list[int]]]]:
    """
    Perturbaciones ±1 de una entrada fuera de la diagonal (y su simétrica).
    La diagonal no cambia, así que la paridad se conserva.
    """
    n = len(gram)
    for i in range(n):
        for j in range(i + 1, n):
            for delta in (-1, 1):
                mutada = [list(fila) for fila in gram]
                mutada[i][j] += delta
                mutada[j][i] += delta
                yield (i, j, delta), mutada


def control_negativo(forma_e: FiniteQuadraticForm, gram_mutado: Sequence[Sequence[int]],
                     cota_orden: int = COTA_ORDEN_POR_DEFECTO) -> bool:
    """
    True si q_E sigue siendo isomorfa a −q del Gram mutado. Un Gram
    degenerado nunca lo es.
    """
    red = GramLattice.desde_matriz(gram_mutado)
    if determinant(red) == 0:
        return False
    forma = discriminant_form(red)
    if forma.orden > cota_orden:
        return False
    return bool(forms_isomorphic(forma_e, negate_form(forma), cota_orden))


# ========================================
# BACKEND
# ========================================

@dataclass
class EstadisticasEspejo(EstadisticasBase):
    """Estadísticas de una corrida de verificación"""
    ks_total: int = 0

    def totales(self) -> dict:
        return {
            'ks_total': self.ks_total,
            'ks_verificados': self.contar(ResultadoK.VERIFICADO),
            'ks_fallidos': self.contar(ResultadoK.FALLIDO),
            'ks_con_error': self.contar(ResultadoK.ERROR),
            'resumenes_solo_red': self.contar(ResultadoK.SOLO_RED),
            'tiempo_total': self.tiempo_total,
        }


class VerificadorEspejo(BackendBase):
    """
    Ejecuta verify_mirror para varios k en paralelo y arma el informe.

    Los callbacks se invocan siempre desde el hilo que llama a `ejecutar`.
    """

    def __init__(self,
                 callback_mensaje=None,
                 callback_progreso=None,
                 callback_estado=None,
                 hilos: int = 4):
        super().__init__(callback_mensaje, callback_progreso, callback_estado)
        self.hilos = max(1, hilos)
        self.estadisticas = EstadisticasEspejo()
        self._informe: Optional[InformeEspejo] = None

    # ========================================
    # IMPLEMENTACIÓN DE MÉTODOS ABSTRACTOS
    # ========================================

    def validar_parametros(self, ks: Iterable[int], semilla: int = 0, especializaciones: int = 3,
                           intentos_maximos: int = 20, cota_orden: int = COTA_ORDEN_POR_DEFECTO,
                           carpeta_log: Optional[str] = None) -> tuple[bool, str]:
        """Valida los parámetros de verificación"""
        es_valido, mensaje = self._validar_indices(ks)
        if not es_valido:
            return False, mensaje
        if especializaciones < 1:
            return False, "Se necesita al menos una especialización"
        if intentos_maximos <= especializaciones:
            return False, "Los intentos máximos deben superar a las especializaciones"
        if cota_orden < 1:
            return False, "La cota de orden debe ser positiva"
        if semilla < 0 or semilla >= 2 ** 64:
            return False, "La semilla debe ser un entero de 64 bits sin signo"
        return self._validar_carpeta_log(carpeta_log)

    def _procesar_principal(self, ks: Iterable[int], semilla: int = 0, especializaciones: int = 3,
                            intentos_maximos: int = 20, cota_orden: int = COTA_ORDEN_POR_DEFECTO,
                            carpeta_log: Optional[str] = None) -> dict:
        ks = sorted(set(ks))
        self.estadisticas = EstadisticasEspejo(tiempo_inicio=datetime.now(), ks_total=len(ks))
        self._informe = InformeEspejo(semilla, especializaciones)

        if carpeta_log:
            self._crear_log_archivo(carpeta_log, "verificacion_espejo", {
                "ks": ks, "semilla": semilla, "especializaciones": especializaciones,
                "intentos_maximos": intentos_maximos, "cota_orden": cota_orden, "hilos": self.hilos,
            })

        self._cambiar_fase(FaseProceso.SOLO_RED)
        for k in (k for k in ks if k in RANGO_SOLO_RED):
            resumen = resumen_red(k)
            self._informe.resumenes.append(resumen)
            detalle = f"L_{k}: rango {resumen.rango}, det {resumen.det}, grupo {resumen.grupo or '-'}"
            self._registrar_k(k, FaseProceso.SOLO_RED, ResultadoK.SOLO_RED, detalle)
            self._enviar_mensaje(
                FaseProceso.SOLO_RED,
                NivelMensaje.WARNING if resumen.degenerada else NivelMensaje.INFO,
                detalle
            )

        completos = [k for k in ks if k in catalogo.RANGO_FIBRADO]
        self._cambiar_estado(EstadoProceso.VERIFICANDO)
        self._cambiar_fase(FaseProceso.ESPECIALIZACIONES)
        self._verificar_en_paralelo(completos, semilla, especializaciones, intentos_maximos, cota_orden)

        self._cambiar_fase(FaseProceso.FINALIZACION)
        self._informe.veredictos.sort(key=lambda v: v.k)
        return self._cerrar(cancelado=False)

    def reporte_parcial(self) -> dict:
        """Informe con los k terminados hasta ahora (tras una interrupción externa)."""
        return self._generar_reporte()

    def _generar_reporte(self) -> dict:
        """Informe parcial tras una cancelación"""
        if self._informe is None:
            self._informe = InformeEspejo(0, 0)
        self._informe.veredictos.sort(key=lambda v: v.k)
        return self._cerrar(cancelado=True)

    # ========================================
    # LÓGICA ESPECÍFICA
    # ========================================

    def _verificar_en_paralelo(self, ks: list[int], semilla: int, especializaciones: int,
                               intentos_maximos: int, cota_orden: int):
        total = len(ks)
        if not total:
            return
        self._actualizar_progreso(0, total)
        executor = ThreadPoolExecutor(max_workers=self.hilos, thread_name_prefix="espejo")
        try:
            futuros = {
                executor.submit(verify_mirror, k, semilla, especializaciones, intentos_maximos, cota_orden): k
                for k in ks
            }
            for hechos, futuro in enumerate(as_completed(futuros), start=1):
                k = futuros[futuro]
                try:
                    veredicto = futuro.result()
                except EtapaFallidaError as e:
                    veredicto = _veredicto_fallido(k, e)
                self._registrar(veredicto)
                self._actualizar_progreso(hechos, total)
                self._verificar_cancelacion()
        finally:
            executor.shutdown(wait=True, cancel_futures=True)

    def _registrar(self, veredicto: MirrorVerdict):
        self._informe.veredictos.append(veredicto)
        k = veredicto.k
        if veredicto.error is not None:
            fase = FaseProceso(veredicto.error['stage'])
            detalle = f"{veredicto.error['type']}: {veredicto.error['message']}"
            self._registrar_k(k, fase, ResultadoK.ERROR, detalle)
            self._enviar_mensaje(fase, NivelMensaje.ERROR, f"✗ k={k}: etapa '{fase.value}' fallida: {detalle}")
        elif veredicto.overall:
            detalle = f"grupo {veredicto.forma_e.descripcion()}, rango MW {veredicto.mordell_weil.rango}"
            self._registrar_k(k, FaseProceso.MORDELL_WEIL, ResultadoK.VERIFICADO, detalle)
            self._enviar_mensaje(
                FaseProceso.MORDELL_WEIL,
                NivelMensaje.SUCCESS,
                f"✓ k={k}: E_k ≅ U ⊕ L_k verificado ({detalle})"
            )
        else:
            fase = FaseProceso.de_chequeo(veredicto.etapa_fallida)
            self._registrar_k(k, fase, ResultadoK.FALLIDO, f"chequeo '{veredicto.etapa_fallida}'")
            self._enviar_mensaje(fase, NivelMensaje.WARNING, f"✗ k={k}: falla el chequeo '{veredicto.etapa_fallida}'")

    def _cerrar(self, cancelado: bool) -> dict:
        self._informe.cancelado = cancelado
        self.estadisticas.tiempo_fin = datetime.now()
        totales = self.estadisticas.totales()
        self._finalizar_log_archivo(totales, EstadoProceso.CANCELADO if cancelado else EstadoProceso.COMPLETADO)
        return {**totales, 'informe': self._informe, 'cancelado': cancelado}


def report_all(ks: Optional[Iterable[int]] = None, semilla: int = 0, especializaciones: int = 3,
               intentos_maximos: int = 20, cota_orden: int = COTA_ORDEN_POR_DEFECTO, hilos: int = 4,
               carpeta_log: Optional[str] = None, **callbacks) -> InformeEspejo:
    """
    Veredictos para k = 6..18 y resúmenes solo-retículo para k = 1..5.
    Los fallos de etapa quedan registrados en cada veredicto.
    """
    if ks is None:
        ks = catalogo.RANGO_K
    verificador = VerificadorEspejo(hilos=hilos, **callbacks)
    resultado = verificador.ejecutar(list(ks), semilla, especializaciones, intentos_maximos, cota_orden, carpeta_log)
    return resultado['informe']
