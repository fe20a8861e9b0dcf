"""
Aritmética de retículos pares.

Signatura y determinante exactos, forma normal de Smith con matrices de
paso, grupo y forma discriminante, isomorfismo de formas cuadráticas
finitas por componentes p-primarias, sumas directas y el criterio de
unicidad por invariantes.

Las matrices enteras se manejan como arreglos numpy de dtype=object para
no salir nunca de los enteros de precisión arbitraria.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from fano_k3 import catalogo
from fano_k3.errores import CotaOrdenExcedidaError, RedDegeneradaError


logger = logging.getLogger(__name__)

COTA_ORDEN_POR_DEFECTO = 10 ** 4


def matriz_entera(filas: Iterable[Iterable[int]]) -> np.ndarray:
    """Arreglo 2D de enteros Python (dtype=object)."""
    filas = [list(f) for f in filas]
    if not filas:
        return np.zeros((0, 0), dtype=object)
    return np.array(filas, dtype=object)


def identidad(n: int) -> np.ndarray:
    return np.eye(n, dtype=int).astype(object)


# ========================================
# RETÍCULO CON MATRIZ DE GRAM
# ========================================

@dataclass(frozen=True)
class GramLattice:
    """
    Retículo dado por su matriz de Gram (simétrica, entera) y etiquetas de base.

    La matriz se guarda como tupla de tuplas para que el objeto sea inmutable
    y pueda compartirse entre hilos.
    """
    gram: tuple[tuple[int, ...], ...]
    etiquetas: tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(tuple(int(v) for v in fila) for fila in self.gram)
        n = len(gram)
        if any(len(fila) != n for fila in gram):
            raise RedDegeneradaError("La matriz de Gram debe ser cuadrada")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise RedDegeneradaError(f"Gram no simétrica en ({i}, {j})")
        etiquetas = tuple(self.etiquetas) or tuple(f"e{i + 1}" for i in range(n))
        if len(etiquetas) != n:
            raise RedDegeneradaError("Número de etiquetas distinto del rango")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "etiquetas", etiquetas)

    @classmethod
    def desde_matriz(cls, matriz, etiquetas: Sequence[str] = ()) -> "GramLattice":
        return cls(tuple(tuple(int(v) for v in fila) for fila in matriz), tuple(etiquetas))

    @property
    def rango(self) -> int:
        return len(self.gram)

    @property
    def matriz(self) -> np.ndarray:
        if not self.gram:
            return np.zeros((0, 0), dtype=object)
        return matriz_entera(self.gram)

    @property
    def es_par(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rango))

    def producto(self, v: Sequence, w: Sequence):
        """vᵀ·Gram·w con coeficientes enteros o racionales."""
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rango) for j in range(self.rango)
                   if v[i] and w[j])

    def escalada(self, factor: int) -> "GramLattice":
        """L(factor): la misma base con la forma multiplicada."""
        return GramLattice(tuple(tuple(factor * v for v in fila) for fila in self.gram),
                           self.etiquetas)

    def con_entrada(self, i: int, j: int, valor: int) -> "GramLattice":
        """Copia con la entrada (i, j) y su simétrica reemplazadas."""
        filas = [list(fila) for fila in self.gram]
        filas[i][j] = valor
        filas[j][i] = valor
        return GramLattice.desde_matriz(filas, self.etiquetas)


def direct_sum(a: GramLattice, b: GramLattice) -> GramLattice:
    """Suma ortogonal: Gram diagonal por bloques."""
    n, m = a.rango, b.rango
    filas = [list(fila) + [0] * m for fila in a.gram]
    filas += [[0] * n + list(fila) for fila in b.gram]
    return GramLattice.desde_matriz(filas, a.etiquetas + b.etiquetas)


def suma_directa(*sumandos: GramLattice) -> GramLattice:
    resultado = GramLattice(())
    for sumando in sumandos:
        resultado = direct_sum(resultado, sumando)
    return resultado


def hiperbolico() -> GramLattice:
    """U: plano hiperbólico par unimodular."""
    return GramLattice(((0, 1), (1, 0)), ("u1", "u2"))


_CARTAN_E8 = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def e8_negativo() -> GramLattice:
    """E8(−1): retículo raíz E8 con la forma cambiada de signo."""
    return GramLattice.desde_matriz(_CARTAN_E8, [f"r{i + 1}" for i in range(8)]).escalada(-1)


def red_k3() -> GramLattice:
    """II(3,19) = U³ ⊕ E8(−1)²."""
    u = hiperbolico()
    e8 = e8_negativo()
    return suma_directa(u, u, u, e8, e8)


def red_L(k: int) -> GramLattice:
    """L_k tal como se publicó."""
    n = len(catalogo.GRAM_L[k])
    return GramLattice.desde_matriz(catalogo.GRAM_L[k], [f"l{i + 1}" for i in range(n)])


# ========================================
# DETERMINANTE Y SIGNATURA
# ========================================

def determinant(red: GramLattice | Sequence[Sequence[int]]) -> int:
    """Determinante exacto por eliminación de Bareiss (sin fracciones)."""
    filas = red.gram if isinstance(red, GramLattice) else red
    a = [[int(v) for v in fila] for fila in filas]
    n = len(a)
    if n == 0:
        return 1
    signo = 1
    previo = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivote = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivote is None:
                return 0
            a[k], a[pivote] = a[pivote], a[k]
            signo = -signo
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previo
        previo = a[k][k]
    return signo * a[n - 1][n - 1]


def signature(red: GramLattice) -> tuple[int, int]:
    """
    Signatura (s, t) por diagonalización simétrica exacta.

    Con diagonal nula y algún término fuera de la diagonal se separa un
    bloque hiperbólico 2×2, que aporta (1, 1).
    """
    a = [[Fraction(v) for v in fila] for fila in red.gram]
    positivos = negativos = 0
    while a:
        n = len(a)
        pivote = next((i for i in range(n) if a[i][i] != 0), None)
        if pivote is not None:
            p = a[pivote][pivote]
            if p > 0:
                positivos += 1
            else:
                negativos += 1
            resto = [i for i in range(n) if i != pivote]
            a = [[a[i][j] - a[i][pivote] * a[pivote][j] / p for j in resto] for i in resto]
            continue
        par = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if par is None:
            raise RedDegeneradaError(f"Retículo degenerado: radical de dimensión {n}")
        i, j = par
        b = a[i][j]
        positivos += 1
        negativos += 1
        resto = [r for r in range(n) if r not in (i, j)]
        # A' = A_rr − A_r{i,j} · [[0, 1/b], [1/b, 0]] · A_{i,j}r
        a = [[a[r][c] - (a[r][i] * a[j][c] + a[r][j] * a[i][c]) / b for c in resto]
             for r in resto]
    return positivos, negativos


# ========================================
# FORMA NORMAL DE SMITH
# ========================================

def exgcd(a: int, b: int) -> np.ndarray:
    """
    Matriz 2×2 M de determinante 1 con M @ [a, b] = [mcd(a, b), 0].
    Si a divide a b, M[0, 1] es 0.
    """
    signo_a = -1 if a < 0 else 1
    signo_b = -1 if b < 0 else 1
    a *= signo_a
    b *= signo_b

    m = np.array([[b, 0, 1],
                  [a, 1, 0]], dtype=object)
    while m[1, 0] != 0:
        q = m[0, 0] // m[1, 0]
        m[0] -= q * m[1]
        m = m[::-1]

    g = m[0, 0]
    m = m[:, 1:].copy()
    m *= np.array([signo_a, signo_b], dtype=object)
    if g != 0:
        m[1] = [-signo_b * b // g, signo_a * a // g]
    return m


def inversa_2x2_det1(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=object)


@dataclass
class _Pasos:
    """U·A·V = D junto con U⁻¹ y V⁻¹."""
    u: np.ndarray
    d: np.ndarray
    v: np.ndarray
    u_inv: np.ndarray
    v_inv: np.ndarray

    def filas(self, i: int, j: int, m: np.ndarray):
        """Aplica m (det 1) a las filas i, j de D."""
        self.d[[i, j]] = m @ self.d[[i, j]]
        self.u[[i, j]] = m @ self.u[[i, j]]
        self.u_inv[:, [i, j]] = self.u_inv[:, [i, j]] @ inversa_2x2_det1(m)

    def columnas(self, i: int, j: int, m: np.ndarray):
        """Aplica m (det 1) a las columnas i, j de D."""
        self.d[:, [i, j]] = self.d[:, [i, j]] @ m
        self.v[:, [i, j]] = self.v[:, [i, j]] @ m
        self.v_inv[[i, j]] = inversa_2x2_det1(m) @ self.v_inv[[i, j]]

    def intercambiar(self, i: int, j: int):
        self.d[[i, j]] = self.d[[j, i]]
        self.u[[i, j]] = self.u[[j, i]]
        self.u_inv[:, [i, j]] = self.u_inv[:, [j, i]]
        self.d[:, [i, j]] = self.d[:, [j, i]]
        self.v[:, [i, j]] = self.v[:, [j, i]]
        self.v_inv[[i, j]] = self.v_inv[[j, i]]

    def negar_fila(self, i: int):
        self.d[i] = -self.d[i]
        self.u[i] = -self.u[i]
        self.u_inv[:, i] = -self.u_inv[:, i]


def _diagonalizar(a: np.ndarray) -> _Pasos:
    """
    Diagonaliza alternando limpieza de columna y de fila en cada posición
    (sin garantía de divisibilidad todavía).
    """
    filas, columnas = a.shape
    pasos = _Pasos(identidad(filas), a.copy().astype(object), identidad(columnas),
                   identidad(filas), identidad(columnas))
    d = pasos.d

    def limpiar_fila(i: int) -> bool:
        if (d[i, i + 1:] == 0).all():
            return False
        for j in range(i + 1, columnas):
            if d[i, j] == 0:
                continue
            pasos.columnas(i, j, exgcd(d[i, i], d[i, j]).T)
        return True

    def limpiar_columna(i: int) -> bool:
        if (d[i + 1:, i] == 0).all():
            return False
        for j in range(i + 1, filas):
            if d[j, i] == 0:
                continue
            pasos.filas(i, j, exgcd(d[i, i], d[j, i]))
        return True

    for i in range(min(filas, columnas)):
        limpiar_columna(i)
        while limpiar_fila(i) and limpiar_columna(i):
            pass
    return pasos


def _smith(a) -> _Pasos:
    a = np.asarray(a, dtype=object)
    if a.ndim != 2:
        raise ValueError("Se espera una matriz 2D")
    pasos = _diagonalizar(a)
    n = min(a.shape)
    d = pasos.d
    for i in range(n):
        if d[i, i] < 0:
            pasos.negar_fila(i)
    # ceros al final
    for i in range(n):
        if d[i, i] == 0:
            j = next((j for j in range(i + 1, n) if d[j, j] != 0), None)
            if j is not None:
                pasos.intercambiar(i, j)
    # d_i | d_{i+1}: diag(a, b) ~ diag(mcd, mcm)
    cambiado = True
    while cambiado:
        cambiado = False
        for i in range(n):
            for j in range(i + 1, n):
                ai, bj = d[i, i], d[j, j]
                if ai == 0 or bj % ai == 0:
                    continue
                m = exgcd(ai, bj)
                g = m[0, 0] * ai + m[0, 1] * bj
                s, t = m[0, 0], m[0, 1]
                izquierda = np.array([[s, t], [-bj // g, ai // g]], dtype=object)
                derecha = np.array([[1, -t * bj // g], [1, s * ai // g]], dtype=object)
                pasos.filas(i, j, izquierda)
                pasos.columnas(i, j, derecha)
                cambiado = True
    for i in range(n):
        if d[i, i] < 0:
            pasos.negar_fila(i)
    return pasos


def smith_normal_form(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Forma normal de Smith: (U, D, V) con U·M·V = D, U y V unimodulares y
    D diagonal no negativa con d_i | d_{i+1} (los ceros al final).
    """
    pasos = _smith(m)
    return pasos.u, pasos.d, pasos.v


def invariant_factors(m) -> list[int]:
    """Diagonal de la forma de Smith (incluye unos y ceros)."""
    d = _smith(m).d
    return [int(d[i, i]) for i in range(min(d.shape))]


def nucleo_entero(m) -> np.ndarray:
    """Columnas que generan el núcleo entero (saturado) de M."""
    m = np.asarray(m, dtype=object)
    pasos = _smith(m)
    diagonal = [pasos.d[i, i] for i in range(min(m.shape))]
    diagonal += [0] * (m.shape[1] - len(diagonal))
    columnas = [j for j, dj in enumerate(diagonal) if dj == 0]
    return pasos.v[:, columnas]


def saturacion(m) -> np.ndarray:
    """Columnas que generan (span_Q de las columnas de M) ∩ Z^n."""
    m = np.asarray(m, dtype=object)
    pasos = _smith(m)
    r = sum(1 for i in range(min(m.shape)) if pasos.d[i, i] != 0)
    return pasos.u_inv[:, :r]


def base_cociente_radical(red: GramLattice) -> np.ndarray:
    """
    Matriz C (n×r) cuyas columnas son una base de Z^n módulo el radical de
    la forma; Cᵀ·Gram·C es entonces no degenerada.
    """
    n = red.rango
    radical = nucleo_entero(red.matriz)
    s = radical.shape[1]
    if s == 0:
        return identidad(n)
    pasos = _smith(radical)
    if any(pasos.d[i, i] != 1 for i in range(s)):
        raise ArithmeticError("El radical entero debería ser saturado")
    return pasos.u_inv[:, s:]


def resolver_racional(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solución exacta de A·x = b con A cuadrada invertible."""
    n = len(a)
    m = [[Fraction(v) for v in fila] + [Fraction(b[i])] for i, fila in enumerate(a)]
    for col in range(n):
        pivote = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivote is None:
            raise RedDegeneradaError("Sistema singular")
        m[col], m[pivote] = m[pivote], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [vr - factor * vc for vr, vc in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def gram_en_base(red: GramLattice, c: np.ndarray, etiquetas: Sequence[str] = ()) -> GramLattice:
    """Gram de las columnas de C: Cᵀ·G·C."""
    c = np.asarray(c, dtype=object)
    return GramLattice.desde_matriz(c.T @ red.matriz @ c, etiquetas)


# ========================================
# FORMAS CUADRÁTICAS FINITAS
# ========================================

def _mod(valor: Fraction, modulo: int) -> Fraction:
    return Fraction(valor) % modulo


Elemento = tuple[int, ...]


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """
    Grupo abeliano finito ⊕ Z/d_i con forma cuadrática q: A → Q/2Z.

    `q` guarda q(g_i) mód 2 en cada generador y `b` la forma bilineal
    b(g_i, g_j) mód 1. `proyeccion` (opcional) guarda las filas de V⁻¹ con
    las que un vector del dual se lleva a coordenadas del grupo, y
    `generadores` los representantes en el dual.
    """
    factores: tuple[int, ...]
    q: tuple[Fraction, ...]
    b: tuple[tuple[Fraction, ...], ...]
    generadores: tuple[tuple[Fraction, ...], ...] = ()
    proyeccion: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        n = len(self.factores)
        if len(self.q) != n or len(self.b) != n:
            raise ValueError("Dimensiones inconsistentes en la forma finita")
        object.__setattr__(self, "q", tuple(_mod(v, 2) for v in self.q))
        object.__setattr__(self, "b", tuple(tuple(_mod(v, 1) for v in fila) for fila in self.b))

    @property
    def orden(self) -> int:
        return math.prod(self.factores)

    @property
    def longitud(self) -> int:
        """l(A): número mínimo de generadores."""
        return len(self.factores)

    def reducir(self, a: Sequence[int]) -> Elemento:
        return tuple(int(x) % d for x, d in zip(a, self.factores))

    def sumar(self, a: Sequence[int], c: Sequence[int]) -> Elemento:
        return self.reducir([x + y for x, y in zip(a, c)])

    def escalar(self, n: int, a: Sequence[int]) -> Elemento:
        return self.reducir([n * x for x in a])

    def valor_q(self, a: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, ai in enumerate(a):
            if not ai:
                continue
            total += ai * ai * self.q[i]
            for j in range(i + 1, len(a)):
                if a[j]:
                    total += 2 * ai * a[j] * self.b[i][j]
        return _mod(total, 2)

    def valor_b(self, a: Sequence[int], c: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, cj in enumerate(c):
                if cj:
                    total += ai * cj * (self.q[i] if i == j else self.b[i][j])
        return _mod(total, 1)

    def orden_de(self, a: Sequence[int]) -> int:
        orden = 1
        for x, d in zip(a, self.factores):
            orden = math.lcm(orden, d // math.gcd(int(x) % d, d))
        return orden

    def elementos(self) -> Iterator[Elemento]:
        return itertools.product(*(range(d) for d in self.factores))

    def coordenadas(self, vector: Sequence[Fraction]) -> Elemento:
        """Coordenadas en el grupo de un vector del dual (base del retículo)."""
        if not self.proyeccion:
            raise ValueError("La forma no conserva la proyección desde el dual")
        coords = []
        for fila, d in zip(self.proyeccion, self.factores):
            w = sum(Fraction(c) * Fraction(v) for c, v in zip(fila, vector))
            valor = w * d
            if valor.denominator != 1:
                raise ValueError("El vector no pertenece al dual del retículo")
            coords.append(int(valor) % d)
        return tuple(coords)

    def descripcion(self) -> str:
        return " + ".join(f"Z{d}" for d in self.factores) or "0"


def discriminant_form(red: GramLattice) -> FiniteQuadraticForm:
    """
    Forma discriminante q_L: L∨/L → Q/2Z.

    Con U·G·V = D, los generadores son v_i = V·e_i / d_i para d_i > 1 y
    q(v) = vᵀ·G·v mód 2.
    """
    if not red.es_par:
        raise RedDegeneradaError("La forma discriminante exige un retículo par")
    if determinant(red) == 0:
        raise RedDegeneradaError("Retículo degenerado")
    g = red.matriz
    pasos = _smith(g)
    indices = [i for i in range(red.rango) if pasos.d[i, i] > 1]
    factores = tuple(int(pasos.d[i, i]) for i in indices)
    generadores = []
    for i in indices:
        d = pasos.d[i, i]
        generadores.append(tuple(Fraction(int(pasos.v[r, i]), int(d)) for r in range(red.rango)))
    q = tuple(red.producto(v, v) for v in generadores)
    b = tuple(tuple(red.producto(v, w) for w in generadores) for v in generadores)
    proyeccion = tuple(tuple(int(c) for c in pasos.v_inv[i]) for i in indices)
    return FiniteQuadraticForm(factores, q, b, tuple(generadores), proyeccion)


def q_en_dual(red: GramLattice, vector: Sequence[Fraction]) -> Fraction:
    """q(v) = vᵀ·G·v mód 2 para v en el dual (G·v entero)."""
    vector = [Fraction(v) for v in vector]
    for i in range(red.rango):
        if sum(red.gram[i][j] * vector[j] for j in range(red.rango)).denominator != 1:
            raise ValueError("El vector no pertenece al dual del retículo")
    return _mod(red.producto(vector, vector), 2)


def negate_form(forma: FiniteQuadraticForm) -> FiniteQuadraticForm:
    """Mismo grupo con q ↦ −q."""
    return FiniteQuadraticForm(
        forma.factores,
        tuple(-v for v in forma.q),
        tuple(tuple(-v for v in fila) for fila in forma.b),
        forma.generadores,
        forma.proyeccion,
    )


def suma_ortogonal(f: FiniteQuadraticForm, g: FiniteQuadraticForm) -> FiniteQuadraticForm:
    n, m = len(f.factores), len(g.factores)
    b = [list(fila) + [Fraction(0)] * m for fila in f.b]
    b += [[Fraction(0)] * n + list(fila) for fila in g.b]
    return FiniteQuadraticForm(f.factores + g.factores, f.q + g.q, tuple(tuple(fila) for fila in b))


# ========================================
# ISOMORFISMO DE FORMAS
# ========================================

@dataclass(frozen=True)
class ResultadoIsomorfismo:
    """
    Resultado de forms_isomorphic. `testigo[i]` es la imagen del generador i
    de la primera forma, en coordenadas de la segunda.
    """
    isomorfas: bool
    testigo: Optional[tuple[Elemento, ...]] = None

    def __bool__(self):
        return self.isomorfas


def _factoriza(n: int) -> dict[int, int]:
    primos: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            primos[p] = primos.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        primos[n] = primos.get(n, 0) + 1
    return primos


def _valuacion(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _parte_primaria(forma: FiniteQuadraticForm, p: int) -> list[tuple[int, Elemento, int]]:
    """(índice, generador p-primario, orden p^a) para cada factor divisible por p."""
    partes = []
    for i, d in enumerate(forma.factores):
        a = _valuacion(d, p)
        if a == 0:
            continue
        elemento = [0] * len(forma.factores)
        elemento[i] = d // p ** a
        partes.append((i, tuple(elemento), p ** a))
    return partes


def _elementos_p(forma: FiniteQuadraticForm, generadores: list[tuple[int, Elemento, int]]) -> list[Elemento]:
    elementos = set()
    for coefs in itertools.product(*(range(orden) for _, _, orden in generadores)):
        acumulado = tuple([0] * len(forma.factores))
        for c, (_, gen, _) in zip(coefs, generadores):
            acumulado = forma.sumar(acumulado, forma.escalar(c, gen))
        elementos.add(acumulado)
    return sorted(elementos)


def _genera_todo(forma: FiniteQuadraticForm, imagenes: list[Elemento], ordenes: list[int], total: int) -> bool:
    alcanzados = set()
    for coefs in itertools.product(*(range(o) for o in ordenes)):
        acumulado = tuple([0] * len(forma.factores))
        for c, img in zip(coefs, imagenes):
            acumulado = forma.sumar(acumulado, forma.escalar(c, img))
        alcanzados.add(acumulado)
    return len(alcanzados) == total


def _buscar_p(f: FiniteQuadraticForm, g: FiniteQuadraticForm, p: int) -> Optional[list[Elemento]]:
    """Imágenes de los generadores p-primarios de f en g que preservan q y b."""
    gens_f = _parte_primaria(f, p)
    gens_g = _parte_primaria(g, p)
    candidatos = _elementos_p(g, gens_g)
    total = len(candidatos)
    ordenes = [orden for _, _, orden in gens_f]
    imagenes: list[Elemento] = []

    def extender(i: int) -> bool:
        if i == len(gens_f):
            return _genera_todo(g, imagenes, ordenes, total)
        _, gen, orden = gens_f[i]
        q_gen = f.valor_q(gen)
        for cand in candidatos:
            if g.orden_de(cand) != orden or g.valor_q(cand) != q_gen:
                continue
            if any(g.valor_b(cand, imagenes[j]) != f.valor_b(gen, gens_f[j][1]) for j in range(i)):
                continue
            imagenes.append(cand)
            if extender(i + 1):
                return True
            imagenes.pop()
        return False

    return list(imagenes) if extender(0) else None


def forms_isomorphic(f: FiniteQuadraticForm, g: FiniteQuadraticForm,
                     cota_orden: int = COTA_ORDEN_POR_DEFECTO) -> ResultadoIsomorfismo:
    """
    Decide si existe un isomorfismo de grupos que preserve q.

    Trabaja por componentes p-primarias con búsqueda exhaustiva de imágenes
    de generadores; el testigo se recompone por el teorema chino del resto.
    """
    if f.orden > cota_orden or g.orden > cota_orden:
        raise CotaOrdenExcedidaError(
            f"Orden {max(f.orden, g.orden)} supera la cota {cota_orden}"
        )
    if f.factores != g.factores:
        return ResultadoIsomorfismo(False)

    testigo = [tuple([0] * len(g.factores)) for _ in f.factores]
    for p in _factoriza(f.orden):
        imagenes = _buscar_p(f, g, p)
        if imagenes is None:
            logger.debug(f"Sin isomorfismo en la parte {p}-primaria")
            return ResultadoIsomorfismo(False)
        for (i, _, orden), imagen in zip(_parte_primaria(f, p), imagenes):
            cofactor = f.factores[i] // orden
            # g_i = Σ_p (cofactor⁻¹ mód p^a)·(cofactor·g_i)
            peso = pow(cofactor, -1, orden) if orden > 1 else 0
            testigo[i] = g.sumar(testigo[i], g.escalar(peso, imagen))
    return ResultadoIsomorfismo(True, tuple(testigo))


def aplicar_testigo(f: FiniteQuadraticForm, g: FiniteQuadraticForm,
                    testigo: Sequence[Elemento], a: Sequence[int]) -> Elemento:
    """Imagen en g del elemento a de f."""
    resultado = tuple([0] * len(g.factores))
    for ai, imagen in zip(a, testigo):
        resultado = g.sumar(resultado, g.escalar(ai, imagen))
    return resultado


def invertir_testigo(f: FiniteQuadraticForm, g: FiniteQuadraticForm,
                     testigo: Sequence[Elemento]) -> tuple[Elemento, ...]:
    """Testigo de g → f a partir de uno de f → g."""
    preimagen = {aplicar_testigo(f, g, testigo, a): a for a in f.elementos()}
    inverso = []
    for i in range(len(g.factores)):
        generador = [0] * len(g.factores)
        generador[i] = 1
        inverso.append(tuple(preimagen[tuple(generador)]))
    return tuple(inverso)


def componer_testigos(f: FiniteQuadraticForm, g: FiniteQuadraticForm, h: FiniteQuadraticForm,
                      f_a_g: Sequence[Elemento], g_a_h: Sequence[Elemento]) -> tuple[Elemento, ...]:
    return tuple(aplicar_testigo(g, h, g_a_h, imagen) for imagen in f_a_g)


def es_isometria(f: FiniteQuadraticForm, g: FiniteQuadraticForm, testigo: Sequence[Elemento]) -> bool:
    """Comprueba un testigo elemento a elemento (biyectivo y preservando q)."""
    imagenes = set()
    for a in f.elementos():
        imagen = aplicar_testigo(f, g, testigo, a)
        if g.valor_q(imagen) != f.valor_q(a):
            return False
        imagenes.add(imagen)
    return len(imagenes) == g.orden


# ========================================
# INVARIANTES Y UNICIDAD
# ========================================

@dataclass(frozen=True)
class LatticeInvariant:
    """Invariante (s, t, q_L) de un retículo par no degenerado."""
    s: int
    t: int
    forma: FiniteQuadraticForm

    @property
    def rango(self) -> int:
        return self.s + self.t


def invariante(red: GramLattice) -> LatticeInvariant:
    s, t = signature(red)
    return LatticeInvariant(s, t, discriminant_form(red))


def unique_by_invariant(red: GramLattice) -> bool:
    """Criterio suficiente: indefinido y l(A_L) ≤ rango − 2."""
    s, t = signature(red)
    if s == 0 or t == 0:
        return False
    return discriminant_form(red).longitud <= red.rango - 2


@dataclass
class ResumenRed:
    """Resumen solo-retículo de L_k (usado también para k = 1..5)."""
    k: int
    rango: int
    degenerada: bool
    signatura: Optional[tuple[int, int]] = None
    det: Optional[int] = None
    grupo: tuple[int, ...] = field(default_factory=tuple)
    longitud: Optional[int] = None
    unicidad_u_mas_l: Optional[bool] = None
    signatura_esperada: Optional[tuple[int, int]] = None


def resumen_red(k: int) -> ResumenRed:
    red = red_L(k)
    esperada = (1, catalogo.numero_vertices(k) - 4)
    det = determinant(red)
    if det == 0:
        logger.warning(f"L_{k} publicado es degenerado")
        return ResumenRed(k, red.rango, True, det=0, signatura_esperada=esperada)
    forma = discriminant_form(red)
    return ResumenRed(
        k=k,
        rango=red.rango,
        degenerada=False,
        signatura=signature(red),
        det=det,
        grupo=forma.factores,
        longitud=forma.longitud,
        unicidad_u_mas_l=unique_by_invariant(direct_sum(hiperbolico(), red)),
        signatura_esperada=esperada,
    )
