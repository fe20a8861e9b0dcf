"""
Retículo evidente E_k, retículo trivial y estructura de Mordell-Weil.

La matriz de Gram se deduce de los grafos de Kodaira, la incidencia de las
secciones y sus intersecciones; la elección de etiquetas (qué fibra recibe
cada letra y la orientación de cada grafo) se busca entre las simetrías y
se valida con rango, |det|, grupo discriminante y valores de q.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from fano_k3 import catalogo
from fano_k3.elliptic import (
    FiberConfiguration,
    KodairaFiber,
    TipoKodaira,
    multiconjunto_fibras,
    multiconjunto_publicado,
    orden_torsion,
)
from fano_k3.errores import RedDegeneradaError, RedEvidenteError
from fano_k3.lattice import (
    COTA_ORDEN_POR_DEFECTO,
    FiniteQuadraticForm,
    GramLattice,
    base_cociente_radical,
    determinant,
    discriminant_form,
    forms_isomorphic,
    gram_en_base,
    invariant_factors,
    matriz_entera,
    resolver_racional,
    saturacion,
    signature,
)


logger = logging.getLogger(__name__)

LETRAS = "abcd"


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class TrivialLattice:
    """F, O y las componentes Θ_{v,j} (j ≥ 1) de todas las fibras reducibles."""
    red: GramLattice

    @property
    def rango(self) -> int:
        return self.red.rango

    @property
    def generadores(self) -> tuple[str, ...]:
        return self.red.etiquetas


@dataclass(frozen=True)
class EvidentLattice:
    """
    Retículo evidente con su Gram en la base de generadores elegida.

    Attributes:
        k: Índice del politopo
        red: Gram de los generadores (etiquetas F, O, Q, O', a1, ...)
        ambiente: Gram de F, O, todas las secciones y todas las componentes
            no identidad (puede ser degenerada)
        base: Coordenadas en `ambiente` de cada generador de `red`, por columnas
        lista_tabla_es_base: False si la lista publicada no era base y se
            eligió otra quitando componentes
        asignacion: Letra -> descripción de la fibra asignada
        orientaciones: Letra -> nombre de la simetría aplicada al grafo
        candidatos: Etiquetados que cumplieron todas las huellas
    """
    k: int
    red: GramLattice
    ambiente: GramLattice
    base: tuple[tuple[int, ...], ...]
    lista_tabla_es_base: bool = True
    asignacion: dict[str, str] = field(default_factory=dict)
    orientaciones: dict[str, str] = field(default_factory=dict)
    candidatos: int = 1

    @property
    def generadores(self) -> tuple[str, ...]:
        return self.red.etiquetas

    @property
    def rango(self) -> int:
        return self.red.rango

    @property
    def det(self) -> int:
        return determinant(self.red)

    def matriz_base(self) -> np.ndarray:
        return matriz_entera(self.base).T


@dataclass
class MordellWeilReport:
    """Rango, torsión y generadores del grupo de Mordell-Weil."""
    rango: int
    torsion: tuple[int, ...]
    generador_libre: Optional[str] = None
    generador_torsion: Optional[str] = None
    alturas: dict[str, Fraction] = field(default_factory=dict)
    ordenes: dict[str, Optional[int]] = field(default_factory=dict)
    rango_secciones: int = 0
    indice_saturacion: int = 1

    @property
    def descripcion_torsion(self) -> str:
        return " + ".join(f"Z{d}" for d in self.torsion) or "0"


# ========================================
# GRAFOS DE KODAIRA Y SIMETRÍAS
# ========================================

def gram_componentes(tipo: TipoKodaira) -> list[list[int]]:
    """Matriz de intersección Θi·Θj de todas las componentes de la fibra."""
    m = tipo.componentes
    gram = [[0] * m for _ in range(m)]
    if m == 1:
        return gram
    for i in range(m):
        gram[i][i] = -2
    for i, j, valor in tipo.aristas():
        gram[i][j] = gram[j][i] = valor
    return gram


def simetrias(tipo: TipoKodaira) -> list[tuple[str, tuple[int, ...]]]:
    """
    Automorfismos del grafo que fijan Θ0, como permutaciones de índices
    (componente real -> etiqueta).
    """
    m = tipo.componentes
    identidad = tuple(range(m))
    opciones = [("identidad", identidad)]
    if tipo.familia == "I" and tipo.n >= 3:
        opciones.append(("reflexion", tuple((-i) % m for i in range(m))))
    elif tipo.familia == "I*":
        permutacion = list(identidad)
        permutacion[2], permutacion[3] = 3, 2
        opciones.append(("lejanas", tuple(permutacion)))
    elif tipo.familia == "IV*":
        opciones.append(("brazos", (0, 2, 1, 3, 5, 4, 6)))
    elif tipo.familia == "IV":
        opciones.append(("brazos", (0, 2, 1)))
    return opciones


def _asignaciones(tipos_tabla: Sequence[str], fibras: Sequence[KodairaFiber],
                  reducibles: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Biyecciones posición publicada -> índice de fibra que respetan el tipo."""
    por_tipo: dict[str, list[int]] = {}
    for i in reducibles:
        por_tipo.setdefault(fibras[i].tipo.nombre, []).append(i)
    posiciones: dict[str, list[int]] = {}
    for p, nombre in enumerate(tipos_tabla):
        posiciones.setdefault(nombre, []).append(p)
    tipos = list(posiciones)
    for combinacion in itertools.product(*(itertools.permutations(por_tipo[t]) for t in tipos)):
        asignacion = [0] * len(tipos_tabla)
        for t, permutacion in zip(tipos, combinacion):
            for p, i in zip(posiciones[t], permutacion):
                asignacion[p] = i
        yield tuple(asignacion)


# ========================================
# GRAM AMBIENTE
# ========================================

def _gram_ambiente(fibras: Sequence[KodairaFiber], secciones: Sequence[str],
                   incidencias: dict[str, dict[int, int]],
                   intersecciones: dict[tuple[str, str], int],
                   asignacion: Sequence[int],
                   orientacion: Sequence[tuple[int, ...]]) -> GramLattice:
    """Gram de F, O, secciones y componentes no identidad con el etiquetado dado."""
    etiquetas = ["F", "O"] + list(secciones)
    bloques = []
    for p, i in enumerate(asignacion):
        letra = LETRAS[p]
        m = fibras[i].componentes
        bloques.append((len(etiquetas), i, orientacion[p]))
        etiquetas.extend(f"{letra}{j}" for j in range(1, m))

    n = len(etiquetas)
    g = [[0] * n for _ in range(n)]
    g[0][1] = g[1][0] = 1
    g[1][1] = -2
    for a, s in enumerate(secciones, start=2):
        g[0][a] = g[a][0] = 1
        g[a][a] = -2
        g[1][a] = g[a][1] = intersecciones[("O", s)]
        for b, t in enumerate(secciones[a - 1:], start=a + 1):
            g[a][b] = g[b][a] = intersecciones[(s, t)]

    for inicio, i, permutacion in bloques:
        intra = gram_componentes(fibras[i].tipo)
        m = len(intra)
        for x in range(1, m):
            for y in range(1, m):
                g[inicio + x - 1][inicio + y - 1] = intra[x][y]
        for a, s in enumerate(secciones, start=2):
            etiqueta = permutacion[incidencias[s][i]]
            if etiqueta != 0:
                g[a][inicio + etiqueta - 1] = g[inicio + etiqueta - 1][a] = 1
    return GramLattice.desde_matriz(g, etiquetas)


def _subred(ambiente: GramLattice, etiquetas: Sequence[str]) -> tuple[GramLattice, np.ndarray]:
    indices = [ambiente.etiquetas.index(e) for e in etiquetas]
    base = np.zeros((ambiente.rango, len(indices)), dtype=object)
    for columna, i in enumerate(indices):
        base[i, columna] = 1
    filas = [[ambiente.gram[i][j] for j in indices] for i in indices]
    return GramLattice.desde_matriz(filas, etiquetas), base


# ========================================
# HUELLAS
# ========================================

def _orden_alfa(alfa: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(c).denominator for c in alfa))


def beta_compatible(forma: FiniteQuadraticForm, k: int) -> list[Optional[tuple[int, ...]]]:
    """
    Para cada α publicado, un β de A_E con el mismo orden y q(β) igual al
    valor publicado (None si no existe o si q(α) + q(β) ≢ 0 mód 2).
    """
    resultado = []
    for (alfa, q_alfa), q_beta in zip(catalogo.ALFAS[k], catalogo.Q_BETAS[k]):
        if (q_alfa + q_beta) % 2 != 0:
            resultado.append(None)
            continue
        orden = _orden_alfa(alfa)
        encontrado = next((x for x in forma.elementos()
                           if forma.orden_de(x) == orden and forma.valor_q(x) == q_beta % 2), None)
        resultado.append(encontrado)
    return resultado


def _cumple_huellas(red: GramLattice, k: int, fila: catalogo.FilaEvidente) -> Optional[FiniteQuadraticForm]:
    if red.rango != fila.rango:
        return None
    if abs(determinant(red)) != fila.det_abs:
        return None
    forma = discriminant_form(red)
    if forma.factores != catalogo.GRUPOS[k]:
        return None
    if any(beta is None for beta in beta_compatible(forma, k)):
        return None
    return forma


def _base_entre_generadores(ambiente: GramLattice, prioridad: Sequence[str]) -> Optional[list[str]]:
    """
    Subconjunto de generadores que es base Z del retículo que generan todos,
    quitando el menor número posible de componentes.
    """
    c = base_cociente_radical(ambiente)
    span = gram_en_base(ambiente, c)
    det_span = abs(determinant(span))
    sobrantes = ambiente.rango - span.rango
    componentes = [e for e in ambiente.etiquetas if e[0] in LETRAS]
    for quitadas in itertools.combinations(reversed(componentes), sobrantes):
        etiquetas = [e for e in prioridad if e not in quitadas]
        sub, _ = _subred(ambiente, etiquetas)
        if abs(determinant(sub)) == det_span and det_span != 0:
            return etiquetas
    return None


# ========================================
# RETÍCULO EVIDENTE
# ========================================

def build_evident(k: int, fibras: Sequence[KodairaFiber], incidencias: dict[str, dict[int, int]],
                  intersecciones: dict[tuple[str, str], int],
                  cota_orden: int = COTA_ORDEN_POR_DEFECTO) -> EvidentLattice:
    """
    Gram de la lista publicada de generadores de E_k.

    Raises:
        RedEvidenteError: Fibras distintas de las publicadas, ningún
            etiquetado cumple las huellas, o candidatos no isométricos
    """
    fila = catalogo.EVIDENTES[k]
    if multiconjunto_fibras(fibras) != multiconjunto_publicado(k):
        raise RedEvidenteError(
            f"k={k}: fibras {multiconjunto_fibras(fibras)} no coinciden con {multiconjunto_publicado(k)}"
        )
    secciones = [s for s in fila.secciones if s not in ("F", "O")]
    tipos_tabla = catalogo.fibras_reducibles(k)
    reducibles = [i for i, f in enumerate(fibras) if f.reducible]

    candidatos: list[tuple[GramLattice, GramLattice, np.ndarray, FiniteQuadraticForm, dict, dict]] = []
    vistos = set()
    primer_ambiente = None
    for asignacion in _asignaciones(tipos_tabla, fibras, reducibles):
        opciones = [simetrias(fibras[i].tipo) for i in asignacion]
        for eleccion in itertools.product(*opciones):
            ambiente = _gram_ambiente(fibras, secciones, incidencias, intersecciones,
                                      asignacion, [perm for _, perm in eleccion])
            if primer_ambiente is None:
                primer_ambiente = (ambiente, asignacion, eleccion)
            red, base = _subred(ambiente, fila.etiquetas())
            if red.gram in vistos:
                continue
            vistos.add(red.gram)
            forma = _cumple_huellas(red, k, fila)
            if forma is None:
                continue
            candidatos.append((red, ambiente, base, forma,
                               _describir_asignacion(fibras, asignacion),
                               {LETRAS[p]: nombre for p, (nombre, _) in enumerate(eleccion)}))

    lista_es_base = True
    if not candidatos and primer_ambiente is not None:
        ambiente, asignacion, eleccion = primer_ambiente
        etiquetas = _base_entre_generadores(ambiente, list(ambiente.etiquetas))
        if etiquetas is not None:
            red, base = _subred(ambiente, etiquetas)
            forma = _cumple_huellas(red, k, fila)
            if forma is not None:
                logger.info(f"k={k}: la lista publicada no es base; se usan {len(etiquetas)} generadores")
                lista_es_base = False
                candidatos.append((red, ambiente, base, forma,
                                   _describir_asignacion(fibras, asignacion),
                                   {LETRAS[p]: nombre for p, (nombre, _) in enumerate(eleccion)}))

    if not candidatos:
        raise RedEvidenteError(f"k={k}: ningún etiquetado reproduce rango {fila.rango}, "
                               f"|det| {fila.det_abs} y grupo {catalogo.GRUPOS[k]}")

    red, ambiente, base, forma, asignacion, orientaciones = candidatos[0]
    firma = signature(red)
    for otra, _, _, otra_forma, _, _ in candidatos[1:]:
        if signature(otra) != firma or not forms_isomorphic(forma, otra_forma, cota_orden):
            raise RedEvidenteError(f"k={k}: etiquetados válidos con retículos no isométricos")

    logger.debug(f"k={k}: {len(candidatos)} etiquetados válidos")
    return EvidentLattice(
        k=k,
        red=red,
        ambiente=ambiente,
        base=tuple(tuple(int(v) for v in base[:, j]) for j in range(base.shape[1])),
        lista_tabla_es_base=lista_es_base,
        asignacion=asignacion,
        orientaciones=orientaciones,
        candidatos=len(candidatos),
    )


def build_evident_desde(k: int, configuracion: FiberConfiguration,
                        cota_orden: int = COTA_ORDEN_POR_DEFECTO) -> EvidentLattice:
    return build_evident(k, configuracion.fibras, configuracion.incidencias,
                         configuracion.intersecciones, cota_orden)


def _describir_asignacion(fibras: Sequence[KodairaFiber], asignacion: Sequence[int]) -> dict[str, str]:
    return {LETRAS[p]: fibras[i].descripcion() for p, i in enumerate(asignacion)}


# ========================================
# RETÍCULO TRIVIAL Y MORDELL-WEIL
# ========================================

def trivial_lattice(evidente: EvidentLattice) -> TrivialLattice:
    etiquetas = [e for e in evidente.ambiente.etiquetas if e in ("F", "O") or e[0] in LETRAS]
    red, _ = _subred(evidente.ambiente, etiquetas)
    return TrivialLattice(red)


def shioda_tate_rank(rango_ns: int, fibras: Sequence[KodairaFiber]) -> int:
    """rango(NS) − 2 − Σ_v (m_v − 1)."""
    rango = rango_ns - 2 - sum((f.componentes - 1) * f.orbita for f in fibras)
    if rango < 0:
        raise RedEvidenteError(f"Rango de Mordell-Weil negativo ({rango}): datos inconsistentes")
    return rango


def _inclusion(evidente: EvidentLattice, trivial: TrivialLattice) -> np.ndarray:
    """Columnas: coordenadas en la base de E de cada generador de T."""
    c = evidente.matriz_base()
    g = evidente.ambiente.matriz
    columnas = []
    for etiqueta in trivial.generadores:
        i = evidente.ambiente.etiquetas.index(etiqueta)
        pares = list((c.T @ g)[:, i])
        x = resolver_racional(evidente.red.gram, pares)
        if any(v.denominator != 1 for v in x):
            raise RedEvidenteError(f"{etiqueta} no pertenece al retículo evidente")
        columnas.append([int(v) for v in x])
    return matriz_entera(columnas).T


def mordell_weil_torsion(evidente: EvidentLattice, trivial: TrivialLattice) -> tuple[int, ...]:
    """
    Factores invariantes de la torsión de E/T (≅ T̂/T), por la forma de
    Smith de la matriz de inclusión. Comprueba además
    |det T| = [T̂:T]²·|det T̂|.
    """
    m = _inclusion(evidente, trivial)
    diagonal = invariant_factors(m)
    torsion = tuple(d for d in diagonal if d > 1)

    saturado = gram_en_base(evidente.red, saturacion(m))
    indice = math.prod(torsion)
    if abs(determinant(trivial.red)) != indice ** 2 * abs(determinant(saturado)):
        raise RedDegeneradaError(f"k={evidente.k}: índice de saturación {indice} inconsistente con los determinantes")
    return torsion


def rango_secciones(evidente: EvidentLattice, trivial: TrivialLattice) -> int:
    """Rango libre de E/T."""
    m = _inclusion(evidente, trivial)
    no_nulos = sum(1 for d in invariant_factors(m) if d != 0)
    return evidente.rango - no_nulos


def contribucion_local(tipo: TipoKodaira, componente: int) -> Fraction:
    """contr_v(P) para una sección que corta la componente dada."""
    if componente == 0:
        return Fraction(0)
    if tipo.familia == "I":
        return Fraction(componente * (tipo.n - componente), tipo.n)
    if tipo.familia == "I*":
        return Fraction(1) if componente == 1 else 1 + Fraction(tipo.n, 4)
    return {"IV*": Fraction(4, 3), "III*": Fraction(3, 2), "IV": Fraction(2, 3),
            "III": Fraction(1, 2)}.get(tipo.familia, Fraction(0))


def altura(configuracion: FiberConfiguration, nombre: str) -> Fraction:
    """h(P) = 4 + 2(P·O) − Σ_v contr_v(P) (χ = 2)."""
    total = 4 + 2 * Fraction(configuracion.interseccion(nombre, "O"))
    for i, componente in configuracion.incidencias[nombre].items():
        total -= contribucion_local(configuracion.fibras[i].tipo, componente)
    return total


def mordell_weil_report(evidente: EvidentLattice, configuracion: FiberConfiguration) -> MordellWeilReport:
    trivial = trivial_lattice(evidente)
    torsion = mordell_weil_torsion(evidente, trivial)
    fibracion = configuracion.modelo.fibracion

    alturas, ordenes = {}, {}
    generador_libre = generador_torsion = None
    for seccion in configuracion.secciones[1:]:
        h = altura(configuracion, seccion.nombre)
        alturas[seccion.nombre] = h
        orden = orden_torsion(fibracion, seccion.punto()) if h == 0 else None
        ordenes[seccion.nombre] = orden
        if orden is not None and generador_torsion is None:
            generador_torsion = seccion.nombre
        if h > 0 and generador_libre is None:
            generador_libre = seccion.nombre

    return MordellWeilReport(
        rango=shioda_tate_rank(evidente.rango, configuracion.fibras),
        torsion=torsion,
        generador_libre=generador_libre,
        generador_torsion=generador_torsion,
        alturas=alturas,
        ordenes=ordenes,
        rango_secciones=rango_secciones(evidente, trivial),
        indice_saturacion=math.prod(torsion),
    )
