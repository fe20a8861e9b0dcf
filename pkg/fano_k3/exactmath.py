"""
Aritmética exacta: racionales, polinomios univariados sobre Q y funciones
racionales en x1.

Todo lo que consumen los demás módulos (máximo común divisor por
subresultantes, descomposición libre de cuadrados, discriminante de una
cúbica en y, raíces racionales y valuaciones en lugares de la recta x1)
vive aquí. No hay punto flotante en ningún cálculo.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Sequence, Union

from fano_k3.errores import PolinomioInvalidoError


Rat = Fraction
Escalar = Union[int, Fraction]


# ========================================
# CENTINELAS
# ========================================

@total_ordering
class _Extremo:
    """Valor extremo comparable con enteros; no admite aritmética."""

    __slots__ = ("_signo", "_nombre")

    def __init__(self, signo: int, nombre: str):
        self._signo = signo
        self._nombre = nombre

    def __eq__(self, other):
        return isinstance(other, _Extremo) and other._signo == self._signo

    def __lt__(self, other):
        if isinstance(other, _Extremo):
            return self._signo < other._signo
        return self._signo < 0

    def __hash__(self):
        return hash(("extremo", self._signo))

    def __repr__(self):
        return self._nombre


GRADO_NULO = _Extremo(-1, "-inf")
"""Grado del polinomio cero."""

VALUACION_INFINITA = _Extremo(+1, "+inf")
"""Valuación de la función cero en cualquier lugar."""


def a_racional(valor: Escalar | str) -> Fraction:
    """Convierte int, Fraction o texto 'p/q' a Fraction."""
    if isinstance(valor, Fraction):
        return valor
    if isinstance(valor, (int, str)):
        return Fraction(valor)
    raise TypeError(f"No es un racional exacto: {valor!r}")


def racional_a_texto(valor: Fraction) -> str:
    """Serializa un racional como 'p/q' (o 'p' si es entero)."""
    valor = a_racional(valor)
    if valor.denominator == 1:
        return str(valor.numerator)
    return f"{valor.numerator}/{valor.denominator}"


# ========================================
# POLINOMIOS UNIVARIADOS
# ========================================

class UniPoly:
    """
    Polinomio en x1 con coeficientes racionales, inmutable.

    Los coeficientes se guardan de menor a mayor grado y sin ceros finales,
    así que el polinomio cero es la tupla vacía y su grado es GRADO_NULO.
    """

    __slots__ = ("_coefs",)

    def __init__(self, coeficientes: Iterable[Escalar] = ()):
        coefs = [a_racional(c) for c in coeficientes]
        while coefs and coefs[-1] == 0:
            coefs.pop()
        self._coefs = tuple(coefs)

    # --- constructores ---

    @classmethod
    def constante(cls, c: Escalar) -> "UniPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def monomio(cls, c: Escalar, grado: int) -> "UniPoly":
        return cls([0] * grado + [c])

    # --- propiedades ---

    @property
    def coeficientes(self) -> tuple[Fraction, ...]:
        return self._coefs

    @property
    def grado(self):
        if not self._coefs:
            return GRADO_NULO
        return len(self._coefs) - 1

    @property
    def es_cero(self) -> bool:
        return not self._coefs

    @property
    def es_constante(self) -> bool:
        return len(self._coefs) <= 1

    @property
    def lider(self) -> Fraction:
        """Coeficiente principal (0 para el polinomio cero)."""
        return self._coefs[-1] if self._coefs else Fraction(0)

    def coef(self, i: int) -> Fraction:
        return self._coefs[i] if 0 <= i < len(self._coefs) else Fraction(0)

    # --- aritmética ---

    @staticmethod
    def _como_poly(otro) -> "UniPoly":
        if isinstance(otro, UniPoly):
            return otro
        if isinstance(otro, (int, Fraction)):
            return UniPoly.constante(otro)
        return NotImplemented

    def __add__(self, otro):
        otro = self._como_poly(otro)
        if otro is NotImplemented:
            return otro
        n = max(len(self._coefs), len(otro._coefs))
        return UniPoly(self.coef(i) + otro.coef(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self._coefs)

    def __sub__(self, otro):
        otro = self._como_poly(otro)
        if otro is NotImplemented:
            return otro
        return self + (-otro)

    def __rsub__(self, otro):
        otro = self._como_poly(otro)
        if otro is NotImplemented:
            return otro
        return otro - self

    def __mul__(self, otro):
        otro = self._como_poly(otro)
        if otro is NotImplemented:
            return otro
        if self.es_cero or otro.es_cero:
            return UniPoly()
        res = [Fraction(0)] * (len(self._coefs) + len(otro._coefs) - 1)
        for i, a in enumerate(self._coefs):
            if a == 0:
                continue
            for j, b in enumerate(otro._coefs):
                res[i + j] += a * b
        return UniPoly(res)

    __rmul__ = __mul__

    def __pow__(self, exponente: int):
        if exponente < 0:
            raise ValueError("Exponente negativo en UniPoly")
        resultado = UniPoly.constante(1)
        base = self
        while exponente:
            if exponente & 1:
                resultado = resultado * base
            base = base * base
            exponente >>= 1
        return resultado

    def divmod(self, divisor: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """División euclidiana exacta sobre Q."""
        if divisor.es_cero:
            raise ZeroDivisionError("División por el polinomio cero")
        resto = list(self._coefs)
        grado_d = divisor.grado
        lider_d = divisor.lider
        if self.es_cero or self.grado < grado_d:
            return UniPoly(), self
        cociente = [Fraction(0)] * (len(resto) - grado_d)
        for i in range(len(resto) - 1, grado_d - 1, -1):
            c = resto[i] / lider_d
            if c == 0:
                continue
            cociente[i - grado_d] = c
            for j, dc in enumerate(divisor._coefs):
                resto[i - grado_d + j] -= c * dc
        return UniPoly(cociente), UniPoly(resto[:grado_d])

    def __floordiv__(self, divisor: "UniPoly") -> "UniPoly":
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: "UniPoly") -> "UniPoly":
        return self.divmod(divisor)[1]

    def division_exacta(self, divisor: "UniPoly") -> "UniPoly":
        cociente, resto = self.divmod(divisor)
        if not resto.es_cero:
            raise ArithmeticError(f"{divisor} no divide a {self}")
        return cociente

    def divide_a(self, otro: "UniPoly") -> bool:
        return (otro % self).es_cero

    # --- operaciones varias ---

    def derivada(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self._coefs) if i > 0)

    def monico(self) -> "UniPoly":
        if self.es_cero:
            return self
        lider = self.lider
        return UniPoly(c / lider for c in self._coefs)

    def evaluar(self, valor: Escalar) -> Fraction:
        acumulado = Fraction(0)
        for c in reversed(self._coefs):
            acumulado = acumulado * valor + c
        return acumulado

    def componer(self, interior: "UniPoly") -> "UniPoly":
        """self(interior(x1))."""
        resultado = UniPoly()
        for c in reversed(self._coefs):
            resultado = resultado * interior + c
        return resultado

    def invertido(self, peso: int) -> "UniPoly":
        """u^peso · f(1/u); exige peso >= grado."""
        if self.es_cero:
            return self
        if self.grado > peso:
            raise PolinomioInvalidoError(
                f"Grado {self.grado} excede el peso {peso} en el cambio x1 = 1/u"
            )
        relleno = [Fraction(0)] * (peso - self.grado)
        return UniPoly(relleno + list(reversed(self._coefs)))

    def primitivo_entero(self) -> tuple[Fraction, list[int]]:
        """
        Devuelve (escala, coefs_enteros) con self = escala · Σ coefs x^i y los
        coeficientes enteros primitivos (mcd 1, líder positivo).
        """
        if self.es_cero:
            return Fraction(0), []
        mcm = 1
        for c in self._coefs:
            mcm = mcm * c.denominator // math.gcd(mcm, c.denominator)
        enteros = [int(c * mcm) for c in self._coefs]
        contenido = 0
        for e in enteros:
            contenido = math.gcd(contenido, e)
        if enteros[-1] < 0:
            contenido = -contenido
        enteros = [e // contenido for e in enteros]
        return Fraction(contenido, mcm), enteros

    # --- protocolo ---

    def __eq__(self, otro):
        if isinstance(otro, (int, Fraction)):
            otro = UniPoly.constante(otro)
        if not isinstance(otro, UniPoly):
            return NotImplemented
        return self._coefs == otro._coefs

    def __hash__(self):
        return hash(self._coefs)

    def __bool__(self):
        return not self.es_cero

    def __repr__(self):
        return f"UniPoly({self.a_texto()})"

    def a_texto(self, variable: str = "x1") -> str:
        if self.es_cero:
            return "0"
        terminos = []
        for i in range(len(self._coefs) - 1, -1, -1):
            c = self._coefs[i]
            if c == 0:
                continue
            signo = "-" if c < 0 else "+"
            absoluto = -c if c < 0 else c
            if i == 0:
                cuerpo = racional_a_texto(absoluto)
            else:
                potencia = variable if i == 1 else f"{variable}^{i}"
                cuerpo = potencia if absoluto == 1 else f"{racional_a_texto(absoluto)}*{potencia}"
            terminos.append((signo, cuerpo))
        texto = ("-" if terminos[0][0] == "-" else "") + terminos[0][1]
        for signo, cuerpo in terminos[1:]:
            texto += f" {signo} {cuerpo}"
        return texto


X1 = UniPoly.x()


# ========================================
# MCD POR SUBRESULTANTES
# ========================================

def _grado_lista(a: Sequence[int]) -> int:
    return len(a) - 1


def _recortar(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pseudo_resto(a: list[int], b: list[int]) -> list[int]:
    """prem(a, b) = lc(b)^(deg a - deg b + 1) · a mod b, todo en Z."""
    resto = list(a)
    lider_b = b[-1]
    grado_b = _grado_lista(b)
    pasos = _grado_lista(a) - grado_b + 1
    while resto and _grado_lista(resto) >= grado_b:
        factor = resto[-1]
        desplazamiento = _grado_lista(resto) - grado_b
        resto = [lider_b * c for c in resto]
        for j, bc in enumerate(b):
            resto[desplazamiento + j] -= factor * bc
        _recortar(resto)
        pasos -= 1
    if pasos > 0:
        resto = [c * lider_b ** pasos for c in resto]
    return resto


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """
    Máximo común divisor mónico de f y g.

    Usa la sucesión de restos subresultante sobre las partes primitivas
    enteras, de modo que los coeficientes intermedios se mantienen enteros.
    gcd(f, 0) = monico(f); gcd(0, 0) = 0.
    """
    if f.es_cero:
        return g.monico()
    if g.es_cero:
        return f.monico()
    if f.grado < g.grado:
        f, g = g, f
    _, a = f.primitivo_entero()
    _, b = g.primitivo_entero()
    if _grado_lista(b) == 0:
        return UniPoly.constante(1)

    escala_g, escala_h = 1, 1
    while True:
        delta = _grado_lista(a) - _grado_lista(b)
        r = _pseudo_resto(a, b)
        if not r:
            break
        if _grado_lista(r) == 0:
            return UniPoly.constante(1)
        a = b
        divisor = escala_g * escala_h ** delta
        b = [c // divisor for c in r]
        escala_g = a[-1]
        if delta:
            escala_h = escala_g ** delta // escala_h ** (delta - 1)
    return UniPoly(b).monico()


def poly_lcm(f: UniPoly, g: UniPoly) -> UniPoly:
    if f.es_cero or g.es_cero:
        return UniPoly()
    return (f * g).division_exacta(poly_gcd(f, g)).monico()


# ========================================
# DESCOMPOSICIÓN LIBRE DE CUADRADOS
# ========================================

def squarefree_decompose(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """
    Algoritmo de Yun: f = lc(f) · ∏ f_i^{m_i} con f_i mónicos, libres de
    cuadrados, coprimos dos a dos y multiplicidades distintas.
    """
    if f.es_cero:
        raise PolinomioInvalidoError("squarefree_decompose no admite el polinomio cero")
    f = f.monico()
    if f.es_constante:
        return []
    derivada = f.derivada()
    a0 = poly_gcd(f, derivada)
    b = f.division_exacta(a0)
    c = derivada.division_exacta(a0)
    d = c - b.derivada()
    factores = []
    multiplicidad = 1
    while not b.es_constante:
        a = poly_gcd(b, d)
        b = b.division_exacta(a)
        c = d.division_exacta(a)
        d = c - b.derivada()
        if not a.es_constante:
            factores.append((a.monico(), multiplicidad))
        multiplicidad += 1
    return factores


def parte_libre_de_cuadrados(f: UniPoly) -> UniPoly:
    resultado = UniPoly.constante(1)
    for factor, _ in squarefree_decompose(f):
        resultado = resultado * factor
    return resultado


# ========================================
# DISCRIMINANTE
# ========================================

def discriminant_wrt_y(coeficientes: Sequence[UniPoly]) -> UniPoly:
    """
    Discriminante de c3·y³ + c2·y² + c1·y + c0 respecto de y.

    Args:
        coeficientes: (c3, c2, c1, c0) como UniPoly en x1

    Convención: para 4y³ − g2·y − g3 el resultado es 16·(g2³ − 27·g3²).
    """
    if len(coeficientes) != 4:
        raise PolinomioInvalidoError("Se esperan exactamente 4 coeficientes (c3, c2, c1, c0)")
    c3, c2, c1, c0 = (UniPoly._como_poly(c) for c in coeficientes)
    if c3.es_cero:
        raise PolinomioInvalidoError("El coeficiente de y³ es idénticamente cero")
    return (c2 * c2 * c1 * c1
            - 4 * c3 * c1 ** 3
            - 4 * c2 ** 3 * c0
            - 27 * c3 * c3 * c0 * c0
            + 18 * c3 * c2 * c1 * c0)


# ========================================
# RAÍCES RACIONALES Y VALUACIONES
# ========================================

COTA_DIVISORES = 10 ** 12


def _divisores(n: int) -> Optional[list[int]]:
    """Divisores positivos de n por división de prueba; None si n es demasiado grande."""
    n = abs(n)
    if n > COTA_DIVISORES:
        return None
    pequenos, grandes = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            pequenos.append(d)
            if d * d != n:
                grandes.append(n // d)
        d += 1
    return pequenos + grandes[::-1]


def rational_roots(f: UniPoly) -> list[Fraction]:
    """
    Raíces racionales distintas de f (teorema de la raíz racional).

    Si los coeficientes extremos superan COTA_DIVISORES la búsqueda se omite
    y el factor queda como órbita (ver elliptic.lugares_de).
    """
    if f.es_cero:
        raise PolinomioInvalidoError("El polinomio cero no tiene raíces aisladas")
    raices: list[Fraction] = []
    if f.coef(0) == 0:
        raices.append(Fraction(0))
        while f.coef(0) == 0 and not f.es_cero:
            f = f.division_exacta(X1)
    if f.es_constante:
        return raices
    if f.grado == 1:
        raices.append(-f.coef(0) / f.coef(1))
        return sorted(raices)
    _, enteros = f.primitivo_entero()
    numeradores = _divisores(enteros[0])
    denominadores = _divisores(enteros[-1])
    if numeradores is None or denominadores is None:
        return sorted(raices)
    candidatos = {Fraction(s * p, q) for p in numeradores for q in denominadores for s in (1, -1)}
    for candidato in sorted(candidatos):
        if f.evaluar(candidato) == 0:
            raices.append(candidato)
    return sorted(raices)


def orden_en(f: UniPoly, factor: UniPoly):
    """Mayor e con factor^e | f; VALUACION_INFINITA si f = 0."""
    if f.es_cero:
        return VALUACION_INFINITA
    if factor.es_constante:
        raise PolinomioInvalidoError("El factor de un lugar no puede ser constante")
    orden = 0
    while True:
        cociente, resto = f.divmod(factor)
        if not resto.es_cero:
            return orden
        f = cociente
        orden += 1


# ========================================
# FUNCIONES RACIONALES EN x1
# ========================================

class RatFunc:
    """Elemento de Q(x1) en forma reducida: num/den con den mónico."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly | Escalar, den: UniPoly | Escalar = 1):
        num = UniPoly._como_poly(num)
        den = UniPoly._como_poly(den)
        if den.es_cero:
            raise ZeroDivisionError("Denominador nulo en RatFunc")
        if num.es_cero:
            self.num, self.den = UniPoly(), UniPoly.constante(1)
            return
        comun = poly_gcd(num, den)
        num = num.division_exacta(comun)
        den = den.division_exacta(comun)
        self.num = num * (Fraction(1) / den.lider)
        self.den = den.monico()

    @staticmethod
    def _como_rf(otro) -> "RatFunc":
        if isinstance(otro, RatFunc):
            return otro
        if isinstance(otro, (UniPoly, int, Fraction)):
            return RatFunc(otro)
        return NotImplemented

    @property
    def es_cero(self) -> bool:
        return self.num.es_cero

    @property
    def es_polinomio(self) -> bool:
        return self.den.es_constante

    def como_polinomio(self) -> UniPoly:
        if not self.es_polinomio:
            raise ArithmeticError(f"{self} no es un polinomio")
        return self.num

    def __add__(self, otro):
        otro = self._como_rf(otro)
        if otro is NotImplemented:
            return otro
        return RatFunc(self.num * otro.den + otro.num * self.den, self.den * otro.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, otro):
        otro = self._como_rf(otro)
        if otro is NotImplemented:
            return otro
        return self + (-otro)

    def __rsub__(self, otro):
        return (-self) + otro

    def __mul__(self, otro):
        otro = self._como_rf(otro)
        if otro is NotImplemented:
            return otro
        return RatFunc(self.num * otro.num, self.den * otro.den)

    __rmul__ = __mul__

    def __truediv__(self, otro):
        otro = self._como_rf(otro)
        if otro is NotImplemented:
            return otro
        if otro.es_cero:
            raise ZeroDivisionError("División por la función racional cero")
        return RatFunc(self.num * otro.den, self.den * otro.num)

    def __rtruediv__(self, otro):
        return self._como_rf(otro) / self

    def __pow__(self, exponente: int):
        if exponente < 0:
            return RatFunc(1) / (self ** (-exponente))
        return RatFunc(self.num ** exponente, self.den ** exponente)

    def orden_en(self, factor: UniPoly):
        if self.es_cero:
            return VALUACION_INFINITA
        return orden_en(self.num, factor) - orden_en(self.den, factor)

    def orden_en_infinito(self):
        """Valuación en x1 = ∞ (parámetro local u = 1/x1)."""
        if self.es_cero:
            return VALUACION_INFINITA
        return self.den.grado - self.num.grado

    def __eq__(self, otro):
        otro = self._como_rf(otro)
        if otro is NotImplemented:
            return otro
        return self.num == otro.num and self.den == otro.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.es_polinomio:
            return f"RatFunc({self.num.a_texto()})"
        return f"RatFunc(({self.num.a_texto()}) / ({self.den.a_texto()}))"


@dataclass(frozen=True)
class Lugar:
    """
    Lugar de la recta x1: factor mónico (raíz racional si es lineal, órbita
    de Galois si tiene grado mayor) o el punto en el infinito (factor None).
    """
    factor: Optional[UniPoly]

    @property
    def es_infinito(self) -> bool:
        return self.factor is None

    @property
    def grado(self) -> int:
        return 1 if self.factor is None else self.factor.grado

    @property
    def punto(self) -> Optional[Fraction]:
        """Coordenada x1 del lugar cuando es racional."""
        if self.factor is not None and self.factor.grado == 1:
            return -self.factor.coef(0)
        return None

    def etiqueta(self) -> str:
        if self.es_infinito:
            return "inf"
        if self.punto is not None:
            return racional_a_texto(self.punto)
        return f"root({self.factor.a_texto()})"


INFINITO = Lugar(None)
