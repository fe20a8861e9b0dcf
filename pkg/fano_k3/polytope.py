"""
Politopos reticulares de dimensión 3: facetas, dual polar, reflexividad,
condición de Fano, puntos reticulares, transformada de Gale y la ecuación
anticanónica normalizada.

Las facetas se obtienen por búsqueda exhaustiva de planos soporte sobre
ternas de vértices; con ℓ ≤ 8 son a lo sumo 56 ternas.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from fano_k3 import catalogo
from fano_k3.errores import PolitopoInvalidoError
from fano_k3.lattice import determinant


logger = logging.getLogger(__name__)

Vector = tuple[Fraction, Fraction, Fraction]


def _vector(v: Sequence) -> Vector:
    return tuple(Fraction(c) for c in v)


def _producto(a: Sequence, b: Sequence):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _resta(a: Sequence, b: Sequence) -> Vector:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cruz(a: Sequence, b: Sequence) -> Vector:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _primitivo(v: Sequence[Fraction]) -> tuple[int, int, int]:
    """Múltiplo positivo de v con entradas enteras coprimas."""
    mcm = 1
    for c in v:
        mcm = math.lcm(mcm, Fraction(c).denominator)
    enteros = [int(Fraction(c) * mcm) for c in v]
    divisor = math.gcd(*enteros)
    return tuple(e // divisor for e in enteros)


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class Polytope:
    """
    Politopo de dimensión 3 dado por sus vértices (columnas de la matriz
    publicada). Las coordenadas son racionales para admitir duales.
    """
    vertices: tuple[Vector, ...]
    k: Optional[int] = None

    def __post_init__(self):
        vertices = tuple(_vector(v) for v in self.vertices)
        if len(set(vertices)) != len(vertices):
            raise PolitopoInvalidoError("Vértices repetidos")
        object.__setattr__(self, "vertices", vertices)

    @classmethod
    def desde_columnas(cls, filas: Sequence[Sequence[int]], k: Optional[int] = None) -> "Polytope":
        """Construye a partir de una matriz 3×ℓ cuyas columnas son vértices."""
        if len(filas) != 3:
            raise PolitopoInvalidoError("Se esperan 3 filas de coordenadas")
        return cls(tuple(zip(*filas)), k)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def es_entero(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)

    @property
    def matriz(self) -> np.ndarray:
        """Matriz 3×ℓ (columnas = vértices)."""
        return np.array([[v[i] for v in self.vertices] for i in range(3)], dtype=object)

    def conjunto(self) -> frozenset:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class Facet:
    """Faceta: vértices que la forman, normal interior primitiva n y nivel c."""
    indices: tuple[int, ...]
    normal: tuple[int, int, int]
    nivel: Fraction


@dataclass(frozen=True)
class GaleData:
    """P̃ (4×(ℓ+1)) y su núcleo normalizado K ((ℓ+1)×(ℓ−3))."""
    extendida: np.ndarray
    nucleo: np.ndarray


@dataclass(frozen=True)
class LaurentEquation:
    """
    1 + x + y + z + Σ λ_i·x^a y^b z^c.

    `terminos` guarda (exponentes, token) con token "1" o "λi"; los λ se
    numeran siguiendo el orden de columnas del politopo.
    """
    terminos: tuple[tuple[tuple[int, int, int], str], ...]
    k: Optional[int] = None

    @property
    def num_parametros(self) -> int:
        return sum(1 for _, token in self.terminos if token != "1")


def politopo(k: int) -> Polytope:
    """P_k con el orden de vértices publicado."""
    if k not in catalogo.VERTICES:
        raise PolitopoInvalidoError(f"No existe P_{k}")
    return Polytope.desde_columnas(catalogo.VERTICES[k], k)


# ========================================
# FACETAS Y DUAL
# ========================================

def _rango_afin(vertices: Sequence[Vector]) -> int:
    base = vertices[0]
    diferencias = [_resta(v, base) for v in vertices[1:]]
    for a, b, c in itertools.combinations(diferencias, 3):
        if _producto(_cruz(a, b), c) != 0:
            return 3
    for a, b in itertools.combinations(diferencias, 2):
        if any(_cruz(a, b)):
            return 2
    return 1 if any(any(d) for d in diferencias) else 0


def facets(p: Polytope) -> list[Facet]:
    """Todas las facetas, con normal interior primitiva y nivel."""
    if p.num_vertices < 4 or _rango_afin(p.vertices) < 3:
        raise PolitopoInvalidoError("El politopo no es de dimensión 3")
    encontradas: dict[tuple, Facet] = {}
    for i, j, l in itertools.combinations(range(p.num_vertices), 3):
        a, b, c = p.vertices[i], p.vertices[j], p.vertices[l]
        normal = _cruz(_resta(b, a), _resta(c, a))
        if not any(normal):
            continue
        normal = _primitivo(normal)
        nivel = _producto(normal, a)
        valores = [_producto(normal, v) for v in p.vertices]
        if all(v >= nivel for v in valores):
            pass
        elif all(v <= nivel for v in valores):
            normal = tuple(-n for n in normal)
            nivel = -nivel
        else:
            continue
        clave = (normal, nivel)
        if clave not in encontradas:
            indices = tuple(r for r, v in enumerate(p.vertices) if _producto(normal, v) == nivel)
            encontradas[clave] = Facet(indices, normal, Fraction(nivel))
    return sorted(encontradas.values(), key=lambda f: (f.indices, f.normal))


def origen_interior(p: Polytope) -> bool:
    """El origen es interior si está estrictamente del lado interior de cada faceta."""
    return all(f.nivel < 0 for f in facets(p))


def polar_dual(p: Polytope) -> Polytope:
    """P° = {y : ⟨y, x⟩ ≥ −1 en P}; sus vértices son n_F / (−c_F)."""
    caras = facets(p)
    if not all(f.nivel < 0 for f in caras):
        raise PolitopoInvalidoError("El origen no es interior: el dual polar no está definido")
    vertices = [tuple(Fraction(n) / -f.nivel for n in f.normal) for f in caras]
    return Polytope(tuple(vertices))


def is_reflexive(p: Polytope) -> bool:
    """Verdadero si todos los vértices del dual polar son enteros."""
    return polar_dual(p).es_entero


def is_fano(p: Polytope) -> bool:
    """
    Origen interior y cada faceta con exactamente 3 vértices que forman una
    base de Z³ (determinante ±1).
    """
    if not p.es_entero:
        return False
    caras = facets(p)
    if not all(f.nivel < 0 for f in caras):
        return False
    for cara in caras:
        if len(cara.indices) != 3:
            return False
        columnas = [[int(c) for c in p.vertices[i]] for i in cara.indices]
        if abs(determinant(columnas)) != 1:
            return False
    return True


def lattice_points(p: Polytope) -> list[tuple[int, int, int]]:
    """Puntos de Z³ en P, recorriendo la caja envolvente."""
    caras = facets(p)
    rangos = []
    for i in range(3):
        coords = [v[i] for v in p.vertices]
        rangos.append(range(math.floor(min(coords)), math.ceil(max(coords)) + 1))
    return [punto for punto in itertools.product(*rangos)
            if all(_producto(f.normal, punto) >= f.nivel for f in caras)]


# ========================================
# TRANSFORMADA DE GALE
# ========================================

_BASE_CANONICA = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _exigir_base_canonica(p: Polytope):
    if p.num_vertices < 4 or tuple(tuple(int(c) for c in v) for v in p.vertices[:3]) != _BASE_CANONICA:
        raise PolitopoInvalidoError("Los tres primeros vértices deben ser e1, e2, e3")
    if not p.es_entero:
        raise PolitopoInvalidoError("Se requieren vértices enteros")


def gale_transform(p: Polytope) -> GaleData:
    """
    Núcleo de P̃ = [[1, 1, ..., 1], [0, v_1, ..., v_ℓ]] normalizado para que
    sus filas 4..ℓ sean la identidad.
    """
    _exigir_base_canonica(p)
    ell = p.num_vertices
    extendida = np.zeros((4, ell + 1), dtype=object)
    extendida[0, :] = 1
    for j, v in enumerate(p.vertices, start=1):
        extendida[1:, j] = [int(c) for c in v]

    nucleo = np.zeros((ell + 1, ell - 3), dtype=object)
    for col, j in enumerate(range(4, ell + 1)):
        a, b, c = (int(x) for x in p.vertices[j - 1])
        nucleo[j, col] = 1
        nucleo[1, col] = -a
        nucleo[2, col] = -b
        nucleo[3, col] = -c
        nucleo[0, col] = a + b + c - 1
    if (extendida @ nucleo != 0).any():
        raise ArithmeticError("P̃·K debería anularse")
    return GaleData(extendida, nucleo)


# ========================================
# ECUACIÓN ANTICANÓNICA
# ========================================

_SUPERINDICES = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def anticanonical_equation(p: Polytope) -> LaurentEquation:
    """
    1 + x + y + z + λ_1·m_4 + ... + λ_{ℓ−3}·m_ℓ, con m_j el monomio de
    Laurent del vértice j.
    """
    _exigir_base_canonica(p)
    terminos = [((0, 0, 0), "1")]
    terminos += [(tuple(int(c) for c in v), "1") for v in p.vertices[:3]]
    for i, v in enumerate(p.vertices[3:], start=1):
        terminos.append((tuple(int(c) for c in v), f"λ{i}"))
    return LaurentEquation(tuple(terminos), p.k)


def monomio_despeje(ecuacion: LaurentEquation) -> tuple[int, int, int]:
    """Menor monomio x^a y^b z^c que elimina todos los denominadores."""
    return tuple(max(0, -min(e[i] for e, _ in ecuacion.terminos)) for i in range(3))


def ecuacion_polinomica(ecuacion: LaurentEquation) -> dict[tuple[int, int, int], str]:
    """Exponentes → token tras multiplicar por el monomio de despeje."""
    despeje = monomio_despeje(ecuacion)
    return {tuple(e[i] + despeje[i] for i in range(3)): token for e, token in ecuacion.terminos}


def texto_monomio(exponentes: Sequence[int]) -> str:
    partes = []
    for variable, e in zip("xyz", exponentes):
        if e == 1:
            partes.append(variable)
        elif e:
            partes.append(variable + str(e).translate(_SUPERINDICES))
    return " ".join(partes)


@dataclass(frozen=True)
class ComparacionEcuacion:
    """
    Resultado de comparar con la ecuación publicada.

    `reetiquetado` lleva el índice de λ por orden de columnas al índice
    publicado.
    """
    coincide: bool
    reetiquetado: dict[int, int]
    monomio_despeje: tuple[int, int, int]
    texto: str


_BASE_PUBLICADA = ((1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2))


def texto_ecuacion(ecuacion: LaurentEquation, reetiquetado: Optional[dict[int, int]] = None) -> str:
    """Forma polinómica m·(x+y+z+1) + Σ λ_i m_i, con m el monomio de despeje."""
    reetiquetado = reetiquetado or {}
    polinomio = ecuacion_polinomica(ecuacion)
    parametros = [(reetiquetado.get(int(token[1:]), int(token[1:])), e)
                  for e, token in polinomio.items() if token != "1"]
    partes = [f"λ{i} {texto_monomio(e)}".rstrip() for i, e in sorted(parametros)]
    return f"{texto_monomio(monomio_despeje(ecuacion))} (x+y+z+1)" + "".join(f"+{parte}" for parte in partes) + " = 0"


def _imagen_afin(permutacion: Sequence[int], exponentes: Sequence[int]) -> tuple[int, int, int]:
    """
    Imagen de un exponente por la aplicación afín unimodular que lleva el
    i-ésimo monomio de la base al permutacion[i]-ésimo.
    """
    origen = _BASE_PUBLICADA[permutacion[0]]
    columnas = [[b - o for b, o in zip(_BASE_PUBLICADA[permutacion[i]], origen)] for i in (1, 2, 3)]
    c = [e - 1 for e in exponentes]
    return tuple(origen[r] + sum(c[i] * columnas[i][r] for i in range(3)) for r in range(3))


def simetrias_inducidas(ecuacion: LaurentEquation) -> list[dict[int, int]]:
    """
    Permutaciones de los λ que inducen las simetrías afines del soporte que
    fijan el conjunto de monomios de xyz(x+y+z+1).
    """
    polinomio = ecuacion_polinomica(ecuacion)
    if {e for e, token in polinomio.items() if token == "1"} != set(_BASE_PUBLICADA):
        return []
    parametros = {e: int(token[1:]) for e, token in polinomio.items() if token != "1"}
    inducidas = []
    for permutacion in itertools.permutations(range(4)):
        imagenes = {e: _imagen_afin(permutacion, e) for e in parametros}
        if set(imagenes.values()) == set(parametros):
            inducidas.append({indice: parametros[imagenes[e]] for e, indice in parametros.items()})
    return inducidas


def comparar_con_tabla(ecuacion: LaurentEquation, k: int) -> ComparacionEcuacion:
    """
    Compara con xyz(x+y+z+1) + Σ λ_i m_i publicado, salvo orden de términos.

    El reetiquetado de los λ solo se acepta si es el que publica la tabla
    (catalogo.REETIQUETADO_PUBLICADO) compuesto con una permutación inducida
    por una simetría del soporte.
    """
    esperados = {e: i for i, e in catalogo.TERMINOS_ECUACION[k]}
    polinomio = ecuacion_polinomica(ecuacion)
    parametros = {e: int(token[1:]) for e, token in polinomio.items() if token != "1"}
    reetiquetado = {indice: esperados[e] for e, indice in parametros.items() if e in esperados}
    publicado = catalogo.REETIQUETADO_PUBLICADO.get(k, {})
    coincide = set(parametros) == set(esperados) and any(
        all(reetiquetado[sigma[i]] == publicado.get(i, i) for i in sigma)
        for sigma in simetrias_inducidas(ecuacion))
    if not coincide:
        logger.warning(f"La ecuación de P_{k} no coincide con la publicada")
    return ComparacionEcuacion(coincide, reetiquetado, monomio_despeje(ecuacion),
                               texto_ecuacion(ecuacion, reetiquetado))


def texto_tabla(k: int) -> str:
    """Línea publicada, con el mismo formato que ComparacionEcuacion.texto."""
    partes = [f"λ{i} {texto_monomio(e)}".rstrip() for i, e in catalogo.TERMINOS_ECUACION[k]]
    return "x y z (x+y+z+1)" + "".join(f"+{parte}" for parte in partes) + " = 0"
