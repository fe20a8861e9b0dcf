"""
Datos embebidos: politopos de Fano P_k y redes L_k, ecuaciones de las
superficies, coeficientes de la fibración, transformaciones birracionales,
fibras singulares y secciones, generadores de las redes evidentes, grupos
discriminantes y los vectores α/β con sus valores de q.

El orden de los vértices se conserva tal cual se publicó: la normalización
de la transformada de Gale depende de él.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from fano_k3.exactmath import UniPoly, X1


RANGO_K = range(1, 19)
RANGO_FIBRADO = range(6, 19)
"""Índices con modelo de fibración elíptica embebido."""


# ========================================
# POLITOPOS Y REDES L_k
# ========================================

VERTICES: dict[int, list[list[int]]] = {
    1: [[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]],
    2: [[1, 0, 0, -1, 0], [0, 1, 0, -1, 0], [0, 0, 1, 0, -1]],
    3: [[1, 0, 0, 0, -1], [0, 1, 0, 0, -1], [0, 0, 1, -1, -1]],
    4: [[1, 0, 0, 0, -1], [0, 1, 0, 0, -1], [0, 0, 1, -1, -2]],
    5: [[1, 0, 0, -1, -1], [0, 1, 0, -1, -1], [0, 0, 1, 0, -1]],
    6: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, -1, 0], [0, 0, 1, -1, 0, 0]],
    7: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, -1, 0], [0, 0, 1, -1, -1, -1]],
    8: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, -1, 0], [0, 0, 1, -1, 1, -1]],
    9: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, -1, -1], [0, 0, 1, -1, 0, 0]],
    10: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, -1, -1], [0, 0, 1, -1, -1, -1]],
    11: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, 1, -1], [0, 0, 1, -1, -1, -1]],
    12: [[1, 0, 0, 0, 0, -1], [0, 1, 0, 0, 1, -1], [0, 0, 1, -1, -1, 0]],
    13: [[1, 0, 0, 0, 0, -1, -1], [0, 1, 0, 0, -1, 0, -1], [0, 0, 1, -1, 0, 0, 0]],
    14: [[1, 0, 0, -1, 0, -1, -1], [0, 1, 0, 0, -1, 0, -1], [0, 0, 1, -1, 0, 0, 0]],
    15: [[1, 0, 0, 1, 0, -1, -1], [0, 1, 0, 0, -1, 0, -1], [0, 0, 1, -1, 0, 0, 0]],
    16: [[1, 0, 0, -1, 0, -1, -1], [0, 1, 0, -1, -1, 0, -1], [0, 0, 1, -1, 0, 0, 0]],
    17: [[1, 0, 0, 0, 0, -1, 1, -1], [0, 1, 0, 0, -1, 0, -1, 1], [0, 0, 1, -1, 0, 0, 0, 0]],
    18: [[1, 0, 0, 1, 0, -1, 1, -1], [0, 1, 0, -1, -1, 0, -1, 1], [0, 0, 1, -1, 0, 0, 0, 0]],
}

GRAM_L: dict[int, list[list[int]]] = {
    1: [[4]],
    2: [[0, 3], [3, 2]],
    3: [[-2, 2], [2, -2]],
    4: [[-2, 1], [1, -2]],
    5: [[0, 3], [3, -2]],
    6: [[0, 2, 2], [2, 0, 2], [2, 2, 0]],
    7: [[-2, 1, 1], [1, 0, 2], [1, 2, 0]],
    8: [[-2, 1, 3], [1, 0, 2], [3, 2, 0]],
    9: [[0, 1, 2], [1, -2, 2], [2, 2, 0]],
    10: [[-2, 1, 1], [1, -2, 2], [1, 2, 0]],
    11: [[-2, 1, 1], [1, -2, 1], [1, 1, 2]],
    12: [[-2, 2, 2], [2, -2, 1], [2, 1, 2]],
    13: [[0, 1, 1, 1], [1, -2, 0, 2], [1, 0, -2, 2], [1, 2, 2, -2]],
    14: [[0, 1, 1, 1], [1, -2, 0, 2], [1, 0, -2, 1], [1, 2, 1, -2]],
    15: [[0, 1, 1, 1], [1, -2, 0, 2], [1, 0, -2, 3], [1, 2, 3, -2]],
    16: [[0, 1, 1, 1], [1, -2, 0, 1], [1, 0, -2, 1], [1, 1, 1, -2]],
    17: [[0, 1, 1, 1, 1], [1, -2, 2, 2, 0], [1, 2, -2, 0, 2], [1, 2, 0, -2, 0], [1, 0, 2, 0, -2]],
    18: [[0, 1, 1, 1, 1], [1, -2, 2, 1, 0], [1, 2, -2, 0, 3], [1, 1, 0, -2, 0], [1, 0, 3, 0, -2]],
}


def numero_vertices(k: int) -> int:
    """ℓ_k: número de vértices de P_k."""
    return len(VERTICES[k][0])


# ========================================
# ECUACIONES xyz(x+y+z+1) + Σ λ_i m_i
# ========================================

TERMINOS_ECUACION: dict[int, list[tuple[int, tuple[int, int, int]]]] = {
    6: [(1, (1, 1, 0)), (2, (1, 0, 1)), (3, (0, 1, 1))],
    7: [(1, (1, 1, 0)), (2, (1, 0, 0)), (3, (0, 1, 0))],
    8: [(1, (1, 1, 0)), (2, (1, 0, 2)), (3, (0, 1, 0))],
    9: [(1, (1, 1, 0)), (2, (1, 0, 1)), (3, (0, 0, 1))],
    10: [(1, (1, 1, 0)), (2, (1, 0, 0)), (3, (0, 0, 0))],
    11: [(1, (1, 1, 0)), (2, (1, 2, 0)), (3, (0, 0, 0))],
    12: [(1, (1, 1, 0)), (2, (1, 2, 0)), (3, (0, 0, 1))],
    13: [(1, (1, 1, 0)), (2, (1, 0, 1)), (3, (0, 1, 1)), (4, (0, 0, 1))],
    14: [(1, (0, 1, 0)), (2, (1, 0, 1)), (3, (0, 1, 1)), (4, (0, 0, 1))],
    15: [(1, (2, 1, 0)), (2, (1, 0, 1)), (3, (0, 1, 1)), (4, (0, 0, 1))],
    16: [(1, (0, 0, 0)), (2, (1, 0, 1)), (3, (0, 1, 1)), (4, (0, 0, 1))],
    17: [(1, (1, 1, 0)), (2, (0, 1, 1)), (3, (1, 0, 1)), (4, (2, 0, 1)), (5, (0, 2, 1))],
    18: [(1, (2, 0, 0)), (2, (0, 1, 1)), (3, (1, 0, 1)), (4, (2, 0, 1)), (5, (0, 2, 1))],
}
"""(índice de λ, exponentes (x, y, z)) de cada término λ_i·m_i publicado."""

REETIQUETADO_PUBLICADO: dict[int, dict[int, int]] = {
    17: {2: 3, 3: 2},
    18: {2: 3, 3: 2},
}
"""Índice de λ por orden de columnas → índice en la tabla, donde la tabla no sigue ese orden."""


# ========================================
# COEFICIENTES a1, a2, a3 DE LA FIBRACIÓN
# ========================================

Lambdas = tuple[Fraction, ...]


def _a1_tipo_14(l: Lambdas) -> UniPoly:
    x = X1
    return l[1] ** 2 + 2 * l[1] * x * (1 + x) + x * (-4 * l[3] + x * (-4 * l[2] + (1 + x) ** 2))


def _coef_6(l):
    x = X1
    a1 = l[1] ** 2 + 2 * l[1] * x * (1 + x) + x ** 2 * (-4 * l[0] - 4 * l[2] + (1 + x) ** 2)
    return a1, 4 * l[0] * l[2] * x ** 4, UniPoly()


def _coef_7(l):
    x = X1
    a1 = x * (-4 * l[1] + x * (-4 * l[0] + (1 + x) ** 2))
    return a1, -2 * l[2] * x ** 4 * (1 + x), l[2] ** 2 * x ** 6


def _coef_8(l):
    x = X1
    a1 = x * (x * (1 + x) ** 2 - 4 * l[0] * (l[1] + x))
    a2 = -2 * l[2] * x ** 3 * (1 + x) * (l[1] + x)
    a3 = l[2] ** 2 * x ** 4 * (l[1] + x) ** 2
    return a1, a2, a3


def _coef_9(l):
    x = X1
    a1 = l[1] ** 2 + 2 * l[1] * x * (1 + x) + x * (-4 * l[2] + x * (-4 * l[0] + (1 + x) ** 2))
    return a1, 4 * l[0] * l[2] * x ** 3, UniPoly()


def _coef_10(l):
    x = X1
    a1 = l[0] ** 2 + 2 * l[0] * x * (1 + x) + x * (-4 * l[1] + x * (1 + x) ** 2)
    a2 = -2 * l[2] * x ** 2 * (l[0] + x + x ** 2)
    return a1, a2, l[2] ** 2 * x ** 4


def _coef_11(l):
    x = X1
    a1 = x ** 2 * (1 - 4 * l[0] + (2 - 4 * l[1]) * x + x ** 2)
    return a1, -2 * l[2] * x ** 3 * (1 + x), l[2] ** 2 * x ** 4


def _coef_12(l):
    x = X1
    cuadratica = l[0] + x + x ** 2
    a2 = -2 * l[2] * x ** 2 * (l[1] + x) * cuadratica
    a3 = l[2] ** 2 * x ** 4 * (l[1] + x) ** 2
    return cuadratica ** 2, a2, a3


def _coef_13(l):
    x = X1
    a1 = l[1] ** 2 + 2 * l[1] * x * (1 + x) + x * (-4 * l[3] + x * (-4 * l[0] - 4 * l[2] + (1 + x) ** 2))
    return a1, 4 * l[0] * x ** 3 * (l[3] + l[2] * x), UniPoly()


def _coef_14(l):
    x = X1
    a2 = -2 * l[0] * x ** 3 * (l[1] + x + x ** 2)
    return _a1_tipo_14(l), a2, l[0] ** 2 * x ** 6


def _coef_15(l):
    x = X1
    lineal = l[3] + l[2] * x
    a2 = -2 * l[0] * x ** 2 * lineal * (l[1] + x + x ** 2)
    a3 = l[0] ** 2 * x ** 4 * lineal ** 2
    return _a1_tipo_14(l), a2, a3


def _coef_16(l):
    x = X1
    a2 = -2 * l[0] * x ** 2 * (l[1] + x + x ** 2)
    return _a1_tipo_14(l), a2, l[0] ** 2 * x ** 4


def _coef_17(l):
    x = X1
    a1 = (l[2] ** 2 + 2 * l[2] * x * (1 + x)
          + x * (-4 * l[1] * (l[3] + x)
                 + x * (1 - 4 * l[0] - 4 * l[3] * l[4] + 2 * x - 4 * l[4] * x + x ** 2)))
    a2 = 4 * l[0] * x ** 3 * (l[3] + x) * (l[1] + l[4] * x)
    return a1, a2, UniPoly()


def _coef_18(l):
    x = X1
    a1 = (l[1] ** 2 + 2 * l[1] * x * (1 + x)
          + x * (-4 * l[2] * (l[4] + x) + x * ((1 + x) ** 2 - 4 * l[3] * (l[4] + x))))
    a2 = -2 * l[0] * x ** 3 * (l[4] + x) * (l[1] + x + x ** 2)
    a3 = l[0] ** 2 * x ** 6 * (l[4] + x) ** 2
    return a1, a2, a3


COEFICIENTES_FIBRACION: dict[int, Callable[[Lambdas], tuple[UniPoly, UniPoly, UniPoly]]] = {
    6: _coef_6, 7: _coef_7, 8: _coef_8, 9: _coef_9, 10: _coef_10,
    11: _coef_11, 12: _coef_12, 13: _coef_13, 14: _coef_14, 15: _coef_15,
    16: _coef_16, 17: _coef_17, 18: _coef_18,
}
"""k -> λ -> (a1, a2, a3) de z1² = 4y1³ + a1·y1² + a2·y1 + a3."""


# ========================================
# SECCIONES
# ========================================

def _secciones_6(l):
    x = X1
    y = l[0] * x ** 2
    return {"O'": (UniPoly(), UniPoly()), "Q": (y, y * (l[1] + x + x ** 2))}


def _secciones_9(l):
    return _secciones_6(l)


def _secciones_13(l):
    x = X1
    y = x * (l[3] + l[2] * x)
    return {"O'": (UniPoly(), UniPoly()), "Q": (y, y * (l[1] + x + x ** 2))}


def _secciones_17(l):
    x = X1
    y = x * (l[1] + l[4] * x) * (l[3] + x)
    return {"O'": (UniPoly(), UniPoly()), "Q": (y, y * (l[2] + x + x ** 2))}


def _solo_q(z: Callable[[Lambdas], UniPoly]):
    return lambda l: {"Q": (UniPoly(), z(l))}


SECCIONES: dict[int, Callable[[Lambdas], dict[str, tuple[UniPoly, UniPoly]]]] = {
    6: _secciones_6,
    7: _solo_q(lambda l: l[2] * X1 ** 3),
    8: _solo_q(lambda l: l[2] * X1 ** 2 * (l[1] + X1)),
    9: _secciones_9,
    10: _solo_q(lambda l: l[2] * X1 ** 2),
    11: _solo_q(lambda l: l[2] * X1 ** 2),
    12: _solo_q(lambda l: l[2] * X1 ** 2 * (l[1] + X1)),
    13: _secciones_13,
    14: _solo_q(lambda l: l[0] * X1 ** 3),
    15: _solo_q(lambda l: l[0] * X1 ** 2 * (l[3] + l[2] * X1)),
    16: _solo_q(lambda l: l[0] * X1 ** 2),
    17: _secciones_17,
    18: _solo_q(lambda l: l[0] * X1 ** 3 * (l[4] + X1)),
}
"""k -> λ -> {nombre: (y1, z1)} de las secciones no triviales publicadas."""


# ========================================
# FIBRAS SINGULARES PUBLICADAS
# ========================================

FIBRAS: dict[int, list[tuple[str, int]]] = {
    6: [("I8", 1), ("I8", 1), ("I1", 8)],
    7: [("I3*", 1), ("I8", 1), ("I1", 7)],
    8: [("I1*", 1), ("I3", 1), ("I8", 1), ("I1", 6)],
    9: [("I6", 1), ("I10", 1), ("I1", 8)],
    10: [("I5", 1), ("I11", 1), ("I1", 8)],
    11: [("IV*", 1), ("I9", 1), ("I1", 7)],
    12: [("I6", 1), ("I3", 1), ("I9", 1), ("I1", 6)],
    13: [("I6", 1), ("I2", 1), ("I8", 1), ("I1", 8)],
    14: [("I7", 1), ("I8", 1), ("I1", 9)],
    15: [("I5", 1), ("I3", 1), ("I8", 1), ("I1", 8)],
    16: [("I5", 1), ("I10", 1), ("I1", 9)],
    17: [("I6", 1), ("I2", 1), ("I2", 1), ("I6", 1), ("I1", 8)],
    18: [("I7", 1), ("I3", 1), ("I5", 1), ("I1", 9)],
}
"""(tipo de Kodaira, multiplicidad) en el orden publicado; las letras a, b, c, d siguen este orden."""


def fibras_reducibles(k: int) -> list[str]:
    """Tipos con más de una componente, en orden publicado."""
    return [tipo for tipo, cuantas in FIBRAS[k] if tipo != "I1" for _ in range(cuantas)]


# ========================================
# REDES EVIDENTES, GRUPOS Y VALORES DE q
# ========================================

@dataclass(frozen=True)
class FilaEvidente:
    """Lista de generadores publicada para E_k."""
    secciones: tuple[str, ...]
    componentes: dict[str, tuple[int, ...]] = field(default_factory=dict)
    rango: int = 0
    det_abs: int = 0

    def etiquetas(self) -> list[str]:
        etiquetas = list(self.secciones)
        for letra, indices in self.componentes.items():
            etiquetas.extend(f"{letra}{j}" for j in indices)
        return etiquetas


def _r(a: int, b: int) -> tuple[int, ...]:
    return tuple(range(a, b + 1))


EVIDENTES: dict[int, FilaEvidente] = {
    6: FilaEvidente(("F", "O", "Q", "O'"), {"a": _r(2, 7), "b": _r(1, 7)}, 17, 16),
    7: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 7), "b": _r(1, 7)}, 17, 12),
    8: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 5), "b": _r(1, 2), "c": _r(1, 7)}, 17, 20),
    9: FilaEvidente(("F", "O", "Q", "O'"), {"a": _r(1, 5), "b": _r(1, 8)}, 17, 16),
    10: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 4), "b": _r(1, 10)}, 17, 14),
    11: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 6), "b": _r(1, 8)}, 17, 12),
    12: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 5), "b": _r(1, 1), "c": _r(1, 7)}, 17, 18),
    13: FilaEvidente(("F", "O", "Q", "O'"), {"a": _r(1, 4), "b": _r(1, 1), "c": _r(1, 7)}, 16, 28),
    14: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 6), "b": _r(1, 7)}, 16, 23),
    15: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 4), "b": _r(1, 2), "c": _r(1, 7)}, 16, 31),
    16: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 4), "b": _r(1, 9)}, 16, 20),
    17: FilaEvidente(("F", "O", "Q", "O'"),
                     {"a": _r(1, 4), "b": _r(1, 1), "c": _r(1, 1), "d": _r(1, 5)}, 15, 48),
    18: FilaEvidente(("F", "O", "Q"), {"a": _r(1, 6), "b": _r(1, 2), "c": _r(1, 4)}, 15, 44),
}

GRUPOS: dict[int, tuple[int, ...]] = {
    6: (2, 2, 4), 7: (12,), 8: (20,), 9: (16,), 10: (14,), 11: (12,), 12: (18,),
    13: (2, 14), 14: (23,), 15: (31,), 16: (2, 10), 17: (2, 2, 12), 18: (44,),
}
"""Factores invariantes de A_{L_k} ≅ A_{E_k}. Para k = 8 el orden |det| = 20 fija Z/20."""

GRUPOS_IMPRESOS: dict[int, str] = {
    6: "Z4+Z2+Z2", 7: "Z12", 8: "Z10", 9: "Z16", 10: "Z14", 11: "Z12", 12: "Z18",
    13: "Z14+Z2", 14: "Z23", 15: "Z31", 16: "Z10+Z2", 17: "Z12+Z2+Z2", 18: "Z44",
}

RANGO_MW: dict[int, int] = {k: 1 for k in RANGO_FIBRADO} | {12: 0}
"""Rango de Mordell-Weil esperado. En k = 12 las fibras I6 + I3 + I9 agotan el rango 17 y Q es de 3-torsión."""

TORSION_MW: dict[int, tuple[int, ...]] = {k: () for k in RANGO_FIBRADO} | {6: (2,), 9: (2,), 12: (3,), 13: (2,), 17: (2,)}


def _fr(*valores) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in valores)


ALFAS: dict[int, list[tuple[tuple[Fraction, ...], Fraction]]] = {
    6: [(_fr("3/4", "1/4", "1/4"), Fraction(7, 4)),
        (_fr(0, "1/2", 0), Fraction(0)),
        (_fr("1/2", "1/2", 0), Fraction(1))],
    7: [(_fr("1/6", "11/12", "5/12"), Fraction(23, 12))],
    8: [(_fr("1/10", "7/20", "19/20"), Fraction(39, 20))],
    9: [(_fr("3/8", "1/8", "15/16"), Fraction(31, 16))],
    10: [(_fr("2/7", "5/14", "3/14"), Fraction(3, 14))],
    11: [(_fr("7/12", "11/12", "1/4"), Fraction(19, 12))],
    12: [(_fr("13/18", "8/9", "1/3"), Fraction(31, 18))],
    13: [(_fr("2/7", "5/7", "3/14", "1/14"), Fraction(12, 7)),
         (_fr(0, "1/2", 0, "1/2"), Fraction(0))],
    14: [(_fr("9/23", "17/23", "5/23", "1/23"), Fraction(40, 23))],
    15: [(_fr("13/31", "5/31", "12/31", "14/31"), Fraction(44, 31))],
    16: [(_fr("3/10", "1/5", "7/10", "1/10"), Fraction(17, 10)),
         (_fr("1/2", "1/2", 0, "1/2"), Fraction(1, 2))],
    17: [(_fr("1/6", "5/6", "1/3", "5/12", "5/12"), Fraction(17, 12)),
         (_fr(0, 0, "1/2", 0, "1/2"), Fraction(0)),
         (_fr(0, "1/2", "1/2", "1/2", "1/2"), Fraction(1))],
    18: [(_fr("13/44", "5/44", "27/44", "31/44", "25/44"), Fraction(57, 44))],
}
"""Coordenadas de α en la base de L_k y el valor publicado de q_{L_k}(α)."""

Q_BETAS: dict[int, list[Fraction]] = {
    6: [Fraction(1, 4), Fraction(0), Fraction(1)],
    7: [Fraction(1, 12)],
    8: [Fraction(1, 20)],
    9: [Fraction(1, 16)],
    10: [Fraction(25, 14)],
    11: [Fraction(5, 12)],
    12: [Fraction(5, 18)],
    13: [Fraction(2, 7), Fraction(0)],
    14: [Fraction(6, 23)],
    15: [Fraction(18, 31)],
    16: [Fraction(3, 10), Fraction(3, 2)],
    17: [Fraction(7, 12), Fraction(0), Fraction(1)],
    18: [Fraction(31, 44)],
}
"""Valores publicados de q_{E_k}(β), en el mismo orden que ALFAS."""


# ========================================
# TRANSFORMACIONES BIRRACIONALES (solo lectura)
# ========================================

_X_BIRRACIONAL: dict[int, str] = {
    6: "2*y1*(-λ3*x1^2 + y1) / (x1*(λ2*y1 + x1*y1 + x1^2*y1 + z1))",
    7: "2*y1^2 / (x1*(-λ3*x1^3 + x1*y1 + x1^2*y1 - z1))",
    8: "2*y1^2 / (x1*(-λ2*λ3*x1^2 - λ3*x1^3 + x1*y1 + x1^2*y1 + z1))",
    9: "2*y1*(-λ3*x1 + y1) / (x1*(λ2*y1 + x1*y1 + x1^2*y1 - z1))",
    10: "2*y1^2 / (x1*(-λ3*x1^2 + λ1*y1 + x1*y1 + x1^2*y1 + z1))",
    11: "2*y1^2 / (x1*(-λ3*x1^2 + x1*y1 + x1^2*y1 + z1))",
    12: "2*y1^2 / (x1*(-λ2*λ3*x1^2 - λ3*x1^3 + λ1*y1 + x1*y1 + x1^2*y1 + z1))",
    13: "2*y1*(-λ4*x1 - λ3*x1^2 + y1) / (x1*(λ2*y1 + x1*y1 + x1^2*y1 - z1))",
    14: "2*(λ4*x1 + λ3*x1^2 - y1)*y1 / (x1*(λ1*x1^3 - λ2*y1 - x1*y1 - x1^2*y1 - z1))",
    15: "(λ4 + λ3*x1)*(-λ1*λ4*x1^2 - λ1*λ3*x1^3 + λ2*y1 + x1*y1 + x1^2*y1 + z1) / (2*y1*(-λ4*x1 - λ3*x1^2 + y1))",
    16: "2*y1*(-λ4*x1 - λ3*x1^2 + y1) / (x1*(-λ1*x1^2 + λ2*y1 + x1*y1 + x1^2*y1 + z1))",
    17: "2*y1*(-λ2*λ4*x1 - λ2*x1^2 - λ4*λ5*x1^2 - λ5*x1^3 + y1) / ((λ4 + x1)*(λ3*y1 + x1*y1 + x1^2*y1 + z1))",
    18: "x1",
}

_Y_BIRRACIONAL: dict[int, str] = {
    10: "-(-λ3*x1^2 + λ1*y1 + x1*y1 + x1^2*y1 + z1) / (2*x1*y1)",
    12: "(λ2*λ3*x1^2 + λ3*x1^3 - λ1*y1 - x1*y1 - x1^2*y1 - z1) / (2*(λ2 + x1)*y1)",
    18: "(λ1*λ5*x1^3 + λ1*x1^4 - λ2*y1 - x1*y1 - x1^2*y1 + z1) / (2*(λ5 + x1)*y1)",
}

_Z_BIRRACIONAL: dict[int, str] = {
    6: "-(λ2*y1 + x1*y1 + x1^2*y1 + z1) / (2*x1*(-λ3*x1^2 + y1))",
    7: "-(-λ3*x1^3 + x1*y1 + x1^2*y1 - z1) / (2*x1*y1)",
    8: "(λ2*λ3*x1^2 + λ3*x1^3 - x1*y1 - x1^2*y1 - z1) / (2*(λ2 + x1)*y1)",
    9: "(λ2*y1 + x1*y1 + x1^2*y1 - z1) / (2*x1*(λ3*x1 - y1))",
    10: "x1",
    11: "-(-λ3*x1^2 + x1*y1 + x1^2*y1 + z1) / (2*x1*y1)",
    12: "x1",
    13: "(λ2*y1 + x1*y1 + x1^2*y1 - z1) / (2*x1*(λ4*x1 + λ3*x1^2 - y1))",
    14: "-(λ1*x1^3 - λ2*y1 - x1*y1 - x1^2*y1 - z1) / (2*x1*(λ4*x1 + λ3*x1^2 - y1))",
    15: "-(-λ1*λ4*x1^2 - λ1*λ3*x1^3 + λ2*y1 + x1*y1 + x1^2*y1 + z1) / (2*x1*(-λ4*x1 - λ3*x1^2 + y1))",
    16: "(-λ1*x1^2 + λ2*y1 + x1*y1 + x1^2*y1 + z1) / (2*x1*(λ4*x1 + λ3*x1^2 - y1))",
    17: "(λ3*y1 + x1*y1 + x1^2*y1 + z1) / (2*x1*(λ2*λ4*x1 + λ2*x1^2 + λ4*λ5*x1^2 + λ5*x1^3 - y1))",
    18: "-λ1*x1^2*(λ5 + x1) / y1",
}


def transformacion_birracional(k: int) -> dict[str, str]:
    """Fórmulas (x, y, z) en función de (x1, y1, z1), como texto."""
    return {
        "x": _X_BIRRACIONAL[k],
        "y": _Y_BIRRACIONAL.get(k, "x1"),
        "z": _Z_BIRRACIONAL[k],
    }


# ========================================
# INCLUSIONES ENTRE FAMILIAS
# ========================================

@dataclass(frozen=True)
class Inclusion:
    """
    F_menor(λ) = F_mayor(sustitucion(λ)): cada entrada de `sustitucion` es el
    índice (base 0) de la λ de la familia menor, o None para un cero.
    """
    menor: int
    mayor: int
    sustitucion: tuple[Optional[int], ...]


INCLUSIONES: tuple[Inclusion, ...] = (
    Inclusion(7, 14, (2, None, 0, 1)),
    Inclusion(9, 13, (0, 1, None, 2)),
    Inclusion(10, 16, (2, 0, None, 1)),
)
