"""
Fibraciones elípticas jacobianas z1² = 4y1³ + a1·y1² + a2·y1 + a3 para
k = 6..18.

Contiene la reducción a Weierstrass, el j-invariante, la clasificación de
fibras singulares por lugares de la recta x1 (raíces racionales, órbitas de
Galois y el infinito), la comprobación de secciones, la ley de grupo sobre
Q(x1) y la incidencia sección-componente a partir de valuaciones locales en
el modelo minimal.

Convenciones:
    Y = y1 + a1/12 lleva la cúbica a 4Y³ − g2·Y − g3 con
    g2 = a1²/12 − a2,  g3 = a1·a2/12 − a1³/216 − a3,  Δ = g2³ − 27·g3².
    El discriminante en y de la cúbica original vale 16·Δ.
    j = g2³/Δ (sin el factor 1728).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from fano_k3 import catalogo
from fano_k3.errores import (
    IncidenciaAmbiguaError,
    ParametroDegeneradoError,
    ParametroInvalidoError,
    PolinomioInvalidoError,
    SeccionInvalidaError,
)
from fano_k3.exactmath import (
    INFINITO,
    VALUACION_INFINITA,
    X1,
    Escalar,
    Lugar,
    RatFunc,
    UniPoly,
    a_racional,
    poly_gcd,
    rational_roots,
    squarefree_decompose,
)


logger = logging.getLogger(__name__)

EULER_K3 = 24
COTA_TORSION = 12
MAXIMO_NUMERADOR = 50

# pesos de las funciones en x1 dentro del fibrado de Weierstrass de un K3
PESO_G2, PESO_G3, PESO_DELTA = 8, 12, 24
PESO_Y, PESO_Z = 4, 6
PESO_SINGULAR, PESO_PSI3 = 8, 16


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class FibrationEquation:
    """z1² = 4y1³ + a1·y1² + a2·y1 + a3 para un k y una especialización λ."""
    k: int
    lambdas: tuple[Fraction, ...]
    a1: UniPoly
    a2: UniPoly
    a3: UniPoly

    def cubica(self) -> tuple[UniPoly, UniPoly, UniPoly, UniPoly]:
        return (UniPoly.constante(4), self.a1, self.a2, self.a3)

    def residuo(self, y: UniPoly, z: UniPoly) -> UniPoly:
        """z² − (4y³ + a1·y² + a2·y + a3)."""
        return z * z - (4 * y ** 3 + self.a1 * y * y + self.a2 * y + self.a3)


@dataclass(frozen=True)
class WeierstrassModel:
    """
    Modelo z² = 4Y³ − g2·Y − g3 con Y = y1 + desplazamiento.

    Attributes:
        fibracion: Ecuación de partida
        g2, g3, delta: Invariantes en x1
        desplazamiento: a1/12
    """
    fibracion: FibrationEquation
    g2: UniPoly
    g3: UniPoly
    delta: UniPoly
    desplazamiento: UniPoly

    @property
    def k(self) -> int:
        return self.fibracion.k


@dataclass(frozen=True)
class TipoKodaira:
    """
    Tipo de Kodaira con su grafo de componentes.

    familia es 'I', 'I*', 'II', 'III', 'IV', 'IV*', 'III*' o 'II*'; n solo
    tiene sentido para I_n e I_n*.
    """
    familia: str
    n: int = 0

    @property
    def nombre(self) -> str:
        if self.familia == "I":
            return f"I{self.n}"
        if self.familia == "I*":
            return f"I{self.n}*"
        return self.familia

    @property
    def componentes(self) -> int:
        return len(self.multiplicidades)

    @property
    def euler(self) -> int:
        if self.familia == "I":
            return self.n
        if self.familia == "I*":
            return self.n + 6
        return {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[self.familia]

    @property
    def multiplicativa(self) -> bool:
        return self.familia == "I"

    @property
    def multiplicidades(self) -> tuple[int, ...]:
        if self.familia == "I":
            return (1,) * self.n
        if self.familia == "I*":
            return (1, 1, 1, 1) + (2,) * (self.n + 1)
        return {
            "II": (1,),
            "III": (1, 1),
            "IV": (1, 1, 1),
            "IV*": (1, 1, 1, 2, 2, 2, 3),
            "III*": (1, 1, 2, 3, 4, 3, 2, 2),
            "II*": (1, 2, 3, 4, 5, 6, 4, 2, 3),
        }[self.familia]

    @property
    def simples(self) -> tuple[int, ...]:
        """Componentes de multiplicidad 1, las únicas que corta una sección."""
        return tuple(i for i, m in enumerate(self.multiplicidades) if m == 1)

    def aristas(self) -> list[tuple[int, int, int]]:
        """(i, j, Θi·Θj) para i < j con intersección no nula (grafo de Dynkin extendido)."""
        n = self.n
        if self.familia == "I":
            if n <= 1:
                return []
            if n == 2:
                return [(0, 1, 2)]
            return [(min(i, (i + 1) % n), max(i, (i + 1) % n), 1) for i in range(n)]
        if self.familia == "I*":
            if n == 0:
                return [(i, 4, 1) for i in range(4)]
            cadena = [(j, j + 1, 1) for j in range(4, n + 4)]
            return [(0, 4, 1), (1, 4, 1)] + cadena + [(2, n + 4, 1), (3, n + 4, 1)]
        if self.familia == "II":
            return []
        if self.familia == "III":
            return [(0, 1, 2)]
        if self.familia == "IV":
            return [(0, 1, 1), (0, 2, 1), (1, 2, 1)]
        if self.familia == "IV*":
            return [(0, 3, 1), (3, 6, 1), (1, 4, 1), (4, 6, 1), (2, 5, 1), (5, 6, 1)]
        if self.familia == "III*":
            return [(0, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (1, 6, 1), (4, 7, 1)]
        # II*
        return [(j, j + 1, 1) for j in range(7)] + [(5, 8, 1)]

    @classmethod
    def desde_nombre(cls, nombre: str) -> "TipoKodaira":
        if nombre in ("II", "III", "IV", "IV*", "III*", "II*"):
            return cls(nombre)
        if nombre.startswith("I") and nombre.endswith("*"):
            return cls("I*", int(nombre[1:-1]))
        if nombre.startswith("I"):
            return cls("I", int(nombre[1:]))
        raise ValueError(f"Tipo de Kodaira desconocido: {nombre}")


@dataclass(frozen=True)
class KodairaFiber:
    """Fibra singular sobre un lugar, con órdenes ya minimalizados."""
    lugar: Lugar
    tipo: TipoKodaira
    ord_g2: object
    ord_g3: object
    ord_delta: int
    pasos_minimizacion: int = 0

    @property
    def orbita(self) -> int:
        return self.lugar.grado

    @property
    def euler(self) -> int:
        return self.tipo.euler

    @property
    def componentes(self) -> int:
        return self.tipo.componentes

    @property
    def multiplicidades(self) -> tuple[int, ...]:
        return self.tipo.multiplicidades

    @property
    def reducible(self) -> bool:
        return self.tipo.componentes > 1

    def descripcion(self) -> str:
        return f"{self.tipo.nombre} @ {self.lugar.etiqueta()}"


@dataclass(frozen=True)
class SectionMap:
    """Sección x1 ↦ (x1, y1, z1); O es la sección en el infinito (y = z = None)."""
    nombre: str
    y: Optional[UniPoly] = None
    z: Optional[UniPoly] = None

    @property
    def es_cero(self) -> bool:
        return self.y is None

    def punto(self) -> "Punto":
        if self.es_cero:
            return None
        return (RatFunc(self.y), RatFunc(self.z))


SECCION_CERO = SectionMap("O")

Punto = Optional[tuple[RatFunc, RatFunc]]
"""Punto de la curva genérica en coordenadas (y1, z1); None es O."""


@dataclass
class FiberConfiguration:
    """
    Fibras singulares de una especialización con la incidencia de cada
    sección y sus números de intersección dos a dos.

    incidencias: nombre de sección -> {índice de fibra: componente}
    intersecciones: (nombre, nombre) -> (P·Q)
    """
    modelo: WeierstrassModel
    fibras: list[KodairaFiber]
    secciones: list[SectionMap]
    incidencias: dict[str, dict[int, int]] = field(default_factory=dict)
    intersecciones: dict[tuple[str, str], int] = field(default_factory=dict)

    def interseccion(self, a: str, b: str) -> int:
        if (a, b) in self.intersecciones:
            return self.intersecciones[(a, b)]
        return self.intersecciones[(b, a)]

    def reducibles(self) -> list[int]:
        """Índices de las fibras con más de una componente, en orden de lugares."""
        return [i for i, f in enumerate(self.fibras) if f.reducible]


@dataclass(frozen=True)
class Especializacion:
    """Una especialización genérica de λ ya analizada."""
    lambdas: tuple[Fraction, ...]
    fibracion: FibrationEquation
    modelo: WeierstrassModel
    fibras: list[KodairaFiber]


# ========================================
# CONSTRUCCIÓN Y FORMA DE WEIERSTRASS
# ========================================

def numero_parametros(k: int) -> int:
    return catalogo.numero_vertices(k) - 3


def _validar_k(k: int):
    if k not in catalogo.RANGO_FIBRADO:
        raise ParametroInvalidoError(
            f"k={k} sin modelo de fibración (rango {catalogo.RANGO_FIBRADO.start}..{catalogo.RANGO_FIBRADO.stop - 1})"
        )


def build_fibration(k: int, lambdas: Sequence[Escalar | str], permitir_ceros: bool = False) -> FibrationEquation:
    """
    Ecuación de la fibración de P_k con λ sustituidos.

    Args:
        k: Índice 6..18
        lambdas: ℓ_k − 3 racionales no nulos
        permitir_ceros: Admite λ = 0 (solo para comparar familias)

    Raises:
        ParametroInvalidoError: k fuera de rango, aridad o λ nulo
    """
    _validar_k(k)
    esperados = numero_parametros(k)
    if len(lambdas) != esperados:
        raise ParametroInvalidoError(f"k={k} requiere {esperados} parámetros λ, recibidos {len(lambdas)}")
    try:
        valores = tuple(a_racional(l) for l in lambdas)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ParametroInvalidoError(f"λ no racional: {e}") from e
    if not permitir_ceros and any(v == 0 for v in valores):
        raise ParametroInvalidoError(f"Todos los λ deben ser no nulos: {valores}")
    a1, a2, a3 = catalogo.COEFICIENTES_FIBRACION[k](valores)
    return FibrationEquation(k, valores, a1, a2, a3)


def to_weierstrass(fibracion: FibrationEquation) -> WeierstrassModel:
    """Completa el cubo con Y = y1 + a1/12 y verifica la identidad resultante."""
    a1, a2, a3 = fibracion.a1, fibracion.a2, fibracion.a3
    s = a1 * Fraction(1, 12)
    g2 = a1 * a1 * Fraction(1, 12) - a2
    g3 = a1 * a2 * Fraction(1, 12) - a1 ** 3 * Fraction(1, 216) - a3
    delta = g2 ** 3 - 27 * g3 * g3

    # 4(y+s)³ − g2(y+s) − g3 desarrollado por potencias de y
    if (12 * s != a1
            or 12 * s * s - g2 != a2
            or 4 * s ** 3 - g2 * s - g3 != a3):
        raise ArithmeticError(f"La reducción de Weierstrass no reproduce la cúbica de k={fibracion.k}")
    return WeierstrassModel(fibracion, g2, g3, delta, s)


def j_invariant(modelo: WeierstrassModel) -> RatFunc:
    """j = g2³/(g2³ − 27·g3²) en términos mínimos."""
    if modelo.delta.es_cero:
        raise ParametroDegeneradoError("Δ idénticamente nulo: la fibración no es elíptica")
    return RatFunc(modelo.g2 ** 3, modelo.delta)


def discriminant_factor(modelo: WeierstrassModel) -> UniPoly:
    """Factor libre de cuadrados de Δ que soporta las fibras I1 (multiplicidad 1)."""
    if modelo.delta.es_cero:
        raise ParametroDegeneradoError("Δ idénticamente nulo")
    producto = UniPoly.constante(1)
    for factor, multiplicidad in squarefree_decompose(modelo.delta):
        if multiplicidad == 1:
            producto = producto * factor
    return producto


# ========================================
# LUGARES Y CLASIFICACIÓN DE KODAIRA
# ========================================

def _partir_por_orden(h: UniPoly, f: UniPoly) -> list[UniPoly]:
    """Parte h (libre de cuadrados) según el orden de anulación de f en sus raíces."""
    if f.es_cero:
        return [h]
    partes = []
    actual, derivada = h, f
    while not actual.es_constante:
        siguiente = poly_gcd(actual, derivada)
        exacto = actual.division_exacta(siguiente)
        if not exacto.es_constante:
            partes.append(exacto.monico())
        actual = siguiente
        derivada = derivada.derivada()
    return partes


def _lugares_candidatos(modelo: WeierstrassModel) -> list[Lugar]:
    """
    Lugares finitos donde se anula Δ, separados de modo que g2, g3 y Δ
    tengan orden constante en todas las raíces de cada uno. Los factores
    simples de Δ quedan sin factorizar (órbitas de I1).
    """
    lugares: list[Lugar] = []
    for factor, multiplicidad in squarefree_decompose(modelo.delta):
        if multiplicidad == 1:
            lugares.append(Lugar(factor))
            continue
        partes = [q for p in _partir_por_orden(factor, modelo.g2) for q in _partir_por_orden(p, modelo.g3)]
        for parte in partes:
            resto = parte
            for raiz in rational_roots(parte):
                lineal = X1 - raiz
                lugares.append(Lugar(lineal))
                resto = resto.division_exacta(lineal)
            if not resto.es_constante:
                lugares.append(Lugar(resto.monico()))
    return lugares


def _orden_poly(f: UniPoly, lugar: Lugar, peso: int):
    if f.es_cero:
        return VALUACION_INFINITA
    if lugar.es_infinito:
        if f.grado > peso:
            raise PolinomioInvalidoError(f"Grado {f.grado} supera el peso {peso} en el infinito")
        return peso - f.grado
    return RatFunc(f).orden_en(lugar.factor)


def _restar(orden, cantidad: int):
    return orden if orden == VALUACION_INFINITA else orden - cantidad


def tipo_kodaira(ord_g2, ord_g3, ord_delta: int) -> Optional[TipoKodaira]:
    """
    Tabla (ord g2, ord g3, ord Δ) de un modelo minimal; None si la fibra es lisa.
    """
    if ord_delta == 0:
        return None
    if ord_g2 == 0:
        return TipoKodaira("I", ord_delta)
    if ord_delta == 2:
        return TipoKodaira("II")
    if ord_delta == 3:
        return TipoKodaira("III")
    if ord_delta == 4:
        return TipoKodaira("IV")
    if ord_delta == 6 and ord_g2 >= 2 and ord_g3 >= 3:
        return TipoKodaira("I*", 0)
    if ord_g2 == 2 and ord_g3 == 3 and ord_delta > 6:
        return TipoKodaira("I*", ord_delta - 6)
    if ord_delta == 8 and ord_g3 == 4:
        return TipoKodaira("IV*")
    if ord_delta == 9 and ord_g2 == 3:
        return TipoKodaira("III*")
    if ord_delta == 10 and ord_g3 == 5:
        return TipoKodaira("II*")
    raise ParametroDegeneradoError(
        f"Órdenes (g2, g3, Δ) = ({ord_g2}, {ord_g3}, {ord_delta}) fuera de la tabla de Kodaira"
    )


def _fibra_en(modelo: WeierstrassModel, lugar: Lugar) -> Optional[KodairaFiber]:
    o2 = _orden_poly(modelo.g2, lugar, PESO_G2)
    o3 = _orden_poly(modelo.g3, lugar, PESO_G3)
    od = _orden_poly(modelo.delta, lugar, PESO_DELTA)
    pasos = 0
    while o2 >= 4 and o3 >= 6:
        o2, o3, od = _restar(o2, 4), _restar(o3, 6), od - 12
        pasos += 1
    tipo = tipo_kodaira(o2, o3, od)
    if tipo is None:
        return None
    return KodairaFiber(lugar, tipo, o2, o3, od, pasos)


def _clave_lugar(fibra: KodairaFiber):
    lugar = fibra.lugar
    if lugar.es_infinito:
        return (2, 0, "")
    if lugar.punto is not None:
        return (0, lugar.punto, "")
    return (1, lugar.grado, lugar.factor.a_texto())


def contar_lugares(fibras: Iterable[KodairaFiber]) -> int:
    """Número de lugares geométricos singulares (las órbitas cuentan su grado)."""
    return sum(f.orbita for f in fibras)


def classify_fibers(modelo: WeierstrassModel, lugares_esperados: Optional[int] = None) -> list[KodairaFiber]:
    """
    Fibras singulares: raíces racionales ordenadas, luego órbitas, luego ∞.

    Args:
        modelo: Modelo de Weierstrass
        lugares_esperados: Número de lugares geométricos de una especialización
            genérica; si se obtienen menos, dos fibras han colapsado

    Raises:
        ParametroDegeneradoError: Δ ≡ 0, suma de Euler distinta de 24 o colapso
    """
    if modelo.delta.es_cero:
        raise ParametroDegeneradoError("Δ idénticamente nulo")

    fibras = []
    for lugar in _lugares_candidatos(modelo) + [INFINITO]:
        fibra = _fibra_en(modelo, lugar)
        if fibra is not None:
            fibras.append(fibra)
    fibras.sort(key=_clave_lugar)

    total = sum(f.orbita * f.euler for f in fibras)
    if total != EULER_K3:
        raise ParametroDegeneradoError(f"Suma de números de Euler {total} ≠ {EULER_K3} (k={modelo.k})")
    lugares = contar_lugares(fibras)
    if lugares_esperados is not None and lugares < lugares_esperados:
        raise ParametroDegeneradoError(
            f"Colapso de fibras: {lugares} lugares singulares, se esperaban {lugares_esperados} (k={modelo.k})"
        )
    logger.debug("k=%s fibras: %s", modelo.k, ", ".join(f.descripcion() for f in fibras))
    return fibras


def multiconjunto_fibras(fibras: Iterable[KodairaFiber]) -> dict[str, int]:
    """Tipo -> número de fibras geométricas."""
    conteo: dict[str, int] = {}
    for fibra in fibras:
        conteo[fibra.tipo.nombre] = conteo.get(fibra.tipo.nombre, 0) + fibra.orbita
    return conteo


def multiconjunto_publicado(k: int) -> dict[str, int]:
    conteo: dict[str, int] = {}
    for tipo, cuantas in catalogo.FIBRAS[k]:
        conteo[tipo] = conteo.get(tipo, 0) + cuantas
    return conteo


# ========================================
# ESPECIALIZACIONES GENÉRICAS
# ========================================

def sortear_lambdas(k: int, rng: random.Random) -> tuple[Fraction, ...]:
    """λ_i = p/q con p, q uniformes en [1, 50]."""
    return tuple(Fraction(rng.randint(1, MAXIMO_NUMERADOR), rng.randint(1, MAXIMO_NUMERADOR))
                 for _ in range(numero_parametros(k)))


def generic_specializations(k: int, cantidad: int = 3, semilla: int = 0,
                            intentos_maximos: int = 20) -> list[Especializacion]:
    """
    Sortea especializaciones de λ y conserva las genéricas.

    La referencia de genericidad es el máximo número de lugares singulares
    observado entre los sorteos; una especialización con menos lugares es un
    colapso de fibras y se descarta.

    Raises:
        ParametroDegeneradoError: No se reúnen `cantidad` especializaciones
    """
    _validar_k(k)
    if cantidad < 1:
        raise ParametroInvalidoError("Se necesita al menos una especialización")
    rng = random.Random(semilla * 1000 + k)
    analizadas: list[tuple[Especializacion, int]] = []

    for intento in range(intentos_maximos):
        lambdas = sortear_lambdas(k, rng)
        fibracion = build_fibration(k, lambdas)
        modelo = to_weierstrass(fibracion)
        try:
            fibras = classify_fibers(modelo)
        except ParametroDegeneradoError as e:
            logger.debug("k=%s λ=%s descartada: %s", k, lambdas, e)
            continue
        analizadas.append((Especializacion(lambdas, fibracion, modelo, fibras), contar_lugares(fibras)))
        referencia = max(lugares for _, lugares in analizadas)
        genericas = [esp for esp, lugares in analizadas if lugares == referencia]
        if len(genericas) >= cantidad and intento + 1 > cantidad:
            return genericas[:cantidad]

    raise ParametroDegeneradoError(
        f"k={k}: no se obtuvieron {cantidad} especializaciones genéricas en {intentos_maximos} intentos"
    )


# ========================================
# SECCIONES Y LEY DE GRUPO
# ========================================

def secciones_publicadas(fibracion: FibrationEquation) -> list[SectionMap]:
    """O seguida de las secciones del catálogo (Q y, si existe, O′)."""
    secciones = [SECCION_CERO]
    datos = catalogo.SECCIONES[fibracion.k](fibracion.lambdas)
    for nombre in ("Q", "O'"):
        if nombre in datos:
            y, z = datos[nombre]
            secciones.append(SectionMap(nombre, y, z))
    return secciones


def verify_section(fibracion: FibrationEquation, seccion: SectionMap) -> bool:
    """La sustitución en la ecuación da el polinomio cero; O siempre está."""
    if seccion.es_cero:
        return True
    return fibracion.residuo(seccion.y, seccion.z).es_cero


def _coeficientes(fibracion: FibrationEquation) -> tuple[RatFunc, RatFunc, RatFunc]:
    return RatFunc(fibracion.a1), RatFunc(fibracion.a2), RatFunc(fibracion.a3)


def negar(p: Punto) -> Punto:
    if p is None:
        return None
    return (p[0], -p[1])


def sumar(fibracion: FibrationEquation, p: Punto, q: Punto) -> Punto:
    """Ley de cuerda y tangente sobre Q(x1)."""
    if p is None:
        return q
    if q is None:
        return p
    a1, a2, _ = _coeficientes(fibracion)
    y1, z1 = p
    y2, z2 = q
    if y1 == y2:
        if z1 == -z2:
            return None
        pendiente = (12 * y1 * y1 + 2 * a1 * y1 + a2) / (2 * z1)
    else:
        pendiente = (z2 - z1) / (y2 - y1)
    corte = z1 - pendiente * y1
    y3 = (pendiente * pendiente - a1) * Fraction(1, 4) - y1 - y2
    return (y3, -(pendiente * y3 + corte))


def restar(fibracion: FibrationEquation, p: Punto, q: Punto) -> Punto:
    return sumar(fibracion, p, negar(q))


def multiplicar(fibracion: FibrationEquation, n: int, p: Punto) -> Punto:
    if n < 0:
        return multiplicar(fibracion, -n, negar(p))
    resultado: Punto = None
    base = p
    while n:
        if n & 1:
            resultado = sumar(fibracion, resultado, base)
        base = sumar(fibracion, base, base)
        n >>= 1
    return resultado


def orden_torsion(fibracion: FibrationEquation, p: Punto, cota: int = COTA_TORSION) -> Optional[int]:
    """Menor n ≤ cota con nP = O, o None."""
    if p is None:
        return 1
    acumulado = p
    for n in range(2, cota + 1):
        acumulado = sumar(fibracion, acumulado, p)
        if acumulado is None:
            return n
    return None


def en_curva(fibracion: FibrationEquation, p: Punto) -> bool:
    if p is None:
        return True
    a1, a2, a3 = _coeficientes(fibracion)
    y, z = p
    return (z * z - (4 * y ** 3 + a1 * y * y + a2 * y + a3)).es_cero


# ========================================
# INCIDENCIA SECCIÓN-COMPONENTE
# ========================================

def _valuacion(f: RatFunc, lugar: Lugar, peso: int, pasos: int):
    """Orden de f en el modelo minimal del lugar (f tiene el peso dado)."""
    if f.es_cero:
        return VALUACION_INFINITA
    if lugar.es_infinito:
        base = f.orden_en_infinito() + peso
    else:
        base = f.orden_en(lugar.factor)
    return base - (peso // 2) * pasos


def _contribucion_aditiva(modelo: WeierstrassModel, fibra: KodairaFiber, y_w: RatFunc, z: RatFunc, oz) -> Fraction:
    g2 = RatFunc(modelo.g2)
    g3 = RatFunc(modelo.g3)
    psi3 = (3 * y_w ** 4 - Fraction(3, 2) * g2 * y_w * y_w - 3 * g3 * y_w
            - Fraction(1, 16) * g2 * g2)
    o3 = _valuacion(psi3, fibra.lugar, PESO_PSI3, fibra.pasos_minimizacion)
    if o3 >= 3 * oz:
        return Fraction(2 * oz, 3)
    return Fraction(o3, 4)


def componente_canonica(modelo: WeierstrassModel, fibra: KodairaFiber, punto: Punto) -> int:
    """
    Componente que corta el punto, con la orientación canónica: en I_n el
    índice i ≤ n/2, en I_n* la componente lejana es Θ2 y en IV* el brazo es Θ1.

    Raises:
        IncidenciaAmbiguaError: Las valuaciones no identifican una componente simple
    """
    if punto is None or not fibra.reducible:
        return 0
    if fibra.orbita != 1:
        raise IncidenciaAmbiguaError(f"Fibra reducible en una órbita de grado {fibra.orbita}")
    y, z = punto
    y_w = y + RatFunc(modelo.desplazamiento)
    lugar, pasos = fibra.lugar, fibra.pasos_minimizacion

    oy = _valuacion(y_w, lugar, PESO_Y, pasos)
    if oy < 0:
        return 0
    oz = _valuacion(z, lugar, PESO_Z, pasos)
    osing = _valuacion(12 * y_w * y_w - RatFunc(modelo.g2), lugar, PESO_SINGULAR, pasos)
    if not (oz > 0 and osing > 0):
        return 0

    tipo = fibra.tipo
    if tipo.multiplicativa:
        if oz == VALUACION_INFINITA:
            return tipo.n // 2
        return min(oz, tipo.n // 2)

    if oz == VALUACION_INFINITA:
        raise IncidenciaAmbiguaError(f"Punto de 2-torsión sobre el punto singular de {fibra.descripcion()}")
    contribucion = _contribucion_aditiva(modelo, fibra, y_w, z, oz)
    if tipo.familia == "I*":
        if contribucion == 1:
            return 1
        if contribucion == 1 + Fraction(tipo.n, 4):
            return 2
    elif contribucion == {"IV*": Fraction(4, 3), "IV": Fraction(2, 3),
                          "III": Fraction(1, 2), "III*": Fraction(3, 2)}.get(tipo.familia):
        return 1
    raise IncidenciaAmbiguaError(
        f"Contribución local {contribucion} incompatible con {fibra.descripcion()}"
    )


def _orientar(tipo: TipoKodaira, referencia: int, canonica: int, diferencia: int) -> int:
    """
    Fija la orientación de una componente respecto de la de otra sección,
    usando la componente de su diferencia.
    """
    if canonica == 0:
        return 0
    if tipo.multiplicativa:
        n = tipo.n
        candidatos = [canonica] if canonica * 2 == n else [canonica, n - canonica]
        for candidato in candidatos:
            if (referencia - candidato) % n in (diferencia, (n - diferencia) % n):
                return candidato
        raise IncidenciaAmbiguaError(
            f"{tipo.nombre}: componentes {referencia}, {canonica} y diferencia {diferencia} incompatibles"
        )
    if referencia == 0:
        return canonica
    if tipo.familia == "I*" and canonica in (2, 3) and referencia in (2, 3):
        return referencia if diferencia == 0 else 5 - referencia
    if tipo.familia in ("IV*", "IV") and referencia in (1, 2):
        return referencia if diferencia == 0 else 3 - referencia
    return canonica


def section_incidence(modelo: WeierstrassModel, fibras: Sequence[KodairaFiber], seccion: SectionMap,
                      referencia: Optional[tuple[SectionMap, dict[int, int]]] = None) -> dict[int, int]:
    """
    Componente que corta la sección en cada fibra reducible.

    Args:
        modelo: Modelo de Weierstrass
        fibras: Fibras clasificadas
        seccion: Sección ya verificada
        referencia: (sección, incidencias) ya orientadas; si se da, la
            orientación de cada fibra se elige coherente con ella

    Returns:
        Índice de fibra -> índice de componente (0 = la que corta O)
    """
    punto = seccion.punto()
    fibracion = modelo.fibracion
    diferencia: Punto = None
    if referencia is not None and not referencia[0].es_cero:
        diferencia = restar(fibracion, punto, referencia[0].punto())

    incidencias = {}
    for i, fibra in enumerate(fibras):
        if not fibra.reducible:
            continue
        canonica = componente_canonica(modelo, fibra, punto)
        if referencia is not None and not referencia[0].es_cero:
            d = componente_canonica(modelo, fibra, diferencia)
            canonica = _orientar(fibra.tipo, referencia[1][i], canonica, d)
        incidencias[i] = canonica
    return incidencias


# ========================================
# INTERSECCIONES ENTRE SECCIONES
# ========================================

def interseccion_con_cero(modelo: WeierstrassModel, fibras: Sequence[KodairaFiber], punto: Punto) -> int:
    """
    (P·O): suma sobre los lugares donde Y tiene polo en el modelo minimal de
    grado(lugar) · (−ord Y)/2.
    """
    if punto is None:
        return -2
    y_w = punto[0] + RatFunc(modelo.desplazamiento)
    if y_w.es_cero:
        return 0
    total = Fraction(0)
    minimalizados = [f for f in fibras if f.pasos_minimizacion > 0 and not f.lugar.es_infinito]

    for fibra in minimalizados:
        orden = _valuacion(y_w, fibra.lugar, PESO_Y, fibra.pasos_minimizacion)
        if orden < 0:
            total += Fraction(-orden, 2) * fibra.lugar.grado

    if not y_w.den.es_constante:
        for factor, multiplicidad in squarefree_decompose(y_w.den):
            resto = factor
            for fibra in minimalizados:
                comun = poly_gcd(resto, fibra.lugar.factor)
                if not comun.es_constante:
                    resto = resto.division_exacta(comun)
            if not resto.es_constante:
                total += Fraction(multiplicidad, 2) * resto.grado

    pasos_inf = next((f.pasos_minimizacion for f in fibras if f.lugar.es_infinito), 0)
    orden_inf = _valuacion(y_w, INFINITO, PESO_Y, pasos_inf)
    if orden_inf < 0:
        total += Fraction(-orden_inf, 2)

    if total.denominator != 1:
        raise ArithmeticError(f"Intersección con O no entera: {total}")
    return int(total)


def interseccion_secciones(modelo: WeierstrassModel, fibras: Sequence[KodairaFiber],
                           p: SectionMap, q: SectionMap) -> int:
    """(P·Q) = ((P − Q)·O) para P ≠ Q; (P·P) = −2."""
    if p == q:
        return -2
    if p.es_cero:
        return interseccion_con_cero(modelo, fibras, q.punto())
    if q.es_cero:
        return interseccion_con_cero(modelo, fibras, p.punto())
    diferencia = restar(modelo.fibracion, p.punto(), q.punto())
    if diferencia is None:
        raise SeccionInvalidaError(f"Las secciones {p.nombre} y {q.nombre} coinciden")
    return interseccion_con_cero(modelo, fibras, diferencia)


def pairwise_section_intersections(k: int, lambdas: Sequence[Escalar | str],
                                   nombres: Optional[Sequence[str]] = None) -> dict[tuple[str, str], int]:
    """
    Tabla simétrica de números de intersección entre O y las secciones
    publicadas para (k, λ).
    """
    fibracion = build_fibration(k, lambdas)
    modelo = to_weierstrass(fibracion)
    fibras = classify_fibers(modelo)
    secciones = secciones_publicadas(fibracion)
    if nombres is not None:
        secciones = [s for s in secciones if s.nombre in nombres]
    return _tabla_intersecciones(modelo, fibras, secciones)


def _tabla_intersecciones(modelo, fibras, secciones) -> dict[tuple[str, str], int]:
    tabla = {}
    for i, p in enumerate(secciones):
        for q in secciones[i:]:
            valor = interseccion_secciones(modelo, fibras, p, q)
            tabla[(p.nombre, q.nombre)] = valor
            tabla[(q.nombre, p.nombre)] = valor
    return tabla


def configuracion_fibras(especializacion: Especializacion) -> FiberConfiguration:
    """
    Incidencias y tabla de intersecciones de las secciones publicadas. La
    primera sección no trivial fija la orientación; las demás se orientan
    respecto de ella.
    """
    modelo, fibras = especializacion.modelo, especializacion.fibras
    secciones = secciones_publicadas(especializacion.fibracion)
    for seccion in secciones:
        if not verify_section(especializacion.fibracion, seccion):
            raise SeccionInvalidaError(f"k={modelo.k}: la sección {seccion.nombre} no satisface la ecuación")

    incidencias: dict[str, dict[int, int]] = {"O": {i: 0 for i, f in enumerate(fibras) if f.reducible}}
    referencia = None
    for seccion in secciones[1:]:
        incidencias[seccion.nombre] = section_incidence(modelo, fibras, seccion, referencia)
        if referencia is None:
            referencia = (seccion, incidencias[seccion.nombre])

    return FiberConfiguration(
        modelo=modelo,
        fibras=list(fibras),
        secciones=secciones,
        incidencias=incidencias,
        intersecciones=_tabla_intersecciones(modelo, fibras, secciones),
    )


# ========================================
# INCLUSIONES ENTRE FAMILIAS Y MAPAS BIRRACIONALES
# ========================================

def family_inclusions() -> tuple[catalogo.Inclusion, ...]:
    return catalogo.INCLUSIONES


def check_inclusion(inclusion: catalogo.Inclusion, lambdas: Sequence[Escalar | str]) -> bool:
    """F_menor(λ) y F_mayor(λ sustituidos, con ceros) tienen los mismos a1, a2, a3."""
    menor = build_fibration(inclusion.menor, lambdas)
    sustituidos = [Fraction(0) if indice is None else menor.lambdas[indice] for indice in inclusion.sustitucion]
    mayor = build_fibration(inclusion.mayor, sustituidos, permitir_ceros=True)
    return (menor.a1, menor.a2, menor.a3) == (mayor.a1, mayor.a2, mayor.a3)


def birational_map(k: int) -> dict[str, str]:
    _validar_k(k)
    return catalogo.transformacion_birracional(k)

