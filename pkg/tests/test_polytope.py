"""
Tests unitarios para polytope

Facetas, dual polar, condición de Fano, puntos reticulares, transformada
de Gale y ecuación anticanónica de los 18 politopos.
"""

import unittest
from unittest.mock import patch
from fractions import Fraction
from pathlib import Path
import sys

# Agregar el directorio raíz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from fano_k3 import catalogo
from fano_k3.errores import PolitopoInvalidoError
from fano_k3.polytope import (
    Polytope,
    anticanonical_equation,
    comparar_con_tabla,
    facets,
    gale_transform,
    is_fano,
    is_reflexive,
    lattice_points,
    monomio_despeje,
    origen_interior,
    polar_dual,
    politopo,
    simetrias_inducidas,
    texto_ecuacion,
    texto_tabla,
)


# ========================================
# TESTS DE CONSTRUCCIÓN
# ========================================

class TestPolytope(unittest.TestCase):
    """Tests para la construcción de Polytope"""

    def test_politopo_conserva_orden_publicado(self):
        """Test: los vértices siguen el orden de columnas publicado"""
        p = politopo(6)

        self.assertEqual(p.num_vertices, 6)
        self.assertEqual(p.vertices[3], (0, 0, -1))
        self.assertEqual(p.vertices[5], (-1, 0, 0))
        self.assertEqual(p.matriz.shape, (3, 6))

    def test_politopo_inexistente(self):
        """Test: k fuera de 1..18 se rechaza"""
        with self.assertRaises(PolitopoInvalidoError):
            politopo(19)

    def test_vertices_repetidos(self):
        """Test: vértices repetidos se rechazan"""
        with self.assertRaises(PolitopoInvalidoError):
            Polytope(((1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def test_desde_columnas_exige_tres_filas(self):
        """Test: la matriz debe tener 3 filas"""
        with self.assertRaises(PolitopoInvalidoError):
            Polytope.desde_columnas([[1, 0], [0, 1]])

    def test_politopo_plano(self):
        """Test: un politopo de dimensión 2 no tiene facetas de dimensión 3"""
        plano = Polytope(((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)))

        with self.assertRaises(PolitopoInvalidoError):
            facets(plano)


# ========================================
# TESTS DE LOS 18 POLITOPOS
# ========================================

class TestCatalogoPolitopos(unittest.TestCase):
    """Tests de las propiedades de P_1, ..., P_18"""

    def test_todos_fano_y_reflexivos(self):
        """Test: los 18 politopos son Fano y reflexivos"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                p = politopo(k)
                self.assertTrue(origen_interior(p))
                self.assertTrue(is_fano(p))
                self.assertTrue(is_reflexive(p))

    def test_dual_polar_es_involucion(self):
        """Test: (P°)° = P"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                p = politopo(k)
                self.assertEqual(polar_dual(polar_dual(p)).conjunto(), p.conjunto())

    def test_numero_de_facetas(self):
        """Test: politopo simplicial con ℓ vértices tiene 2ℓ − 4 facetas"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                p = politopo(k)
                caras = facets(p)
                self.assertEqual(len(caras), 2 * p.num_vertices - 4)
                self.assertTrue(all(len(c.indices) == 3 for c in caras))

    def test_puntos_reticulares(self):
        """Test: los únicos puntos enteros son los vértices y el origen"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                p = politopo(k)
                puntos = lattice_points(p)
                self.assertEqual(len(puntos), p.num_vertices + 1)
                self.assertIn((0, 0, 0), puntos)

    def test_no_fano_faceta_no_unimodular(self):
        """Test: una faceta con determinante 3 no es Fano"""
        p = Polytope(((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -3)))

        self.assertTrue(origen_interior(p))
        self.assertFalse(is_fano(p))

    def test_origen_exterior(self):
        """Test: sin origen interior no hay dual polar"""
        p = Polytope(((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))

        self.assertFalse(origen_interior(p))
        self.assertFalse(is_fano(p))
        with self.assertRaises(PolitopoInvalidoError):
            polar_dual(p)


# ========================================
# TESTS DE GALE
# ========================================

class TestGale(unittest.TestCase):
    """Tests para gale_transform"""

    def test_nucleo_se_anula(self):
        """Test: P̃·K = 0 y K tiene forma (ℓ+1)×(ℓ−3)"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                p = politopo(k)
                gale = gale_transform(p)
                ell = p.num_vertices
                self.assertEqual(gale.nucleo.shape, (ell + 1, ell - 3))
                self.assertFalse((gale.extendida @ gale.nucleo != 0).any())

    def test_columna_de_p6(self):
        """Test: primera columna de K para P_6"""
        gale = gale_transform(politopo(6))

        self.assertEqual(list(gale.nucleo[:, 0]), [-2, 0, 0, 1, 1, 0, 0])

    def test_filas_inferiores_identidad(self):
        """Test: filas 4..ℓ de K forman la identidad"""
        gale = gale_transform(politopo(17))

        for i in range(5):
            for j in range(5):
                self.assertEqual(gale.nucleo[4 + i, j], 1 if i == j else 0)

    def test_exige_base_canonica(self):
        """Test: los tres primeros vértices deben ser e1, e2, e3"""
        p = Polytope(((0, 1, 0), (1, 0, 0), (0, 0, 1), (-1, -1, -1)))

        with self.assertRaises(PolitopoInvalidoError):
            gale_transform(p)


# ========================================
# TESTS DE LA ECUACIÓN ANTICANÓNICA
# ========================================

class TestEcuacion(unittest.TestCase):
    """Tests para anticanonical_equation y comparar_con_tabla"""

    def test_numero_de_parametros(self):
        """Test: la ecuación de P_k tiene ℓ − 3 parámetros"""
        for k in catalogo.RANGO_K:
            with self.subTest(k=k):
                ecuacion = anticanonical_equation(politopo(k))
                self.assertEqual(ecuacion.num_parametros, catalogo.numero_vertices(k) - 3)

    def test_monomio_despeje(self):
        """Test: P_11 se despeja multiplicando por x y z"""
        ecuacion = anticanonical_equation(politopo(11))

        self.assertEqual(monomio_despeje(ecuacion), (1, 1, 1))

    def test_ecuacion_p11(self):
        """Test: texto normalizado de la ecuación de P_11"""
        comparacion = comparar_con_tabla(anticanonical_equation(politopo(11)), 11)

        self.assertTrue(comparacion.coincide)
        self.assertEqual(comparacion.texto, "x y z (x+y+z+1)+λ1 x y+λ2 x y²+λ3 = 0")
        self.assertEqual(comparacion.texto, texto_tabla(11))

    def test_ecuaciones_coinciden_con_tabla(self):
        """Test: las 13 ecuaciones coinciden con las publicadas salvo reetiquetado"""
        for k in catalogo.RANGO_FIBRADO:
            with self.subTest(k=k):
                comparacion = comparar_con_tabla(anticanonical_equation(politopo(k)), k)
                self.assertTrue(comparacion.coincide)
                self.assertEqual(sorted(comparacion.reetiquetado.values()),
                                 list(range(1, catalogo.numero_vertices(k) - 2)))

    def test_reetiquetado_p18(self):
        """Test: en P_18 los λ de columnas 5 y 6 se intercambian respecto a la tabla"""
        comparacion = comparar_con_tabla(anticanonical_equation(politopo(18)), 18)

        self.assertEqual(comparacion.reetiquetado[2], 3)
        self.assertEqual(comparacion.texto, texto_tabla(18))

    def test_reetiquetado_p18_sin_registrar_falla(self):
        """Test: sin el reetiquetado publicado, el intercambio de P_18 no se acepta"""
        with patch.dict(catalogo.REETIQUETADO_PUBLICADO, {}, clear=True):
            comparacion = comparar_con_tabla(anticanonical_equation(politopo(18)), 18)

        self.assertFalse(comparacion.coincide)

    def test_lambda_en_monomio_equivocado_falla(self):
        """Test: intercambiar λ1 y λ2 en la tabla de P_11 no lo induce ninguna simetría"""
        with patch.dict(catalogo.TERMINOS_ECUACION, {11: [(2, (1, 1, 0)), (1, (1, 2, 0)), (3, (0, 0, 0))]}):
            comparacion = comparar_con_tabla(anticanonical_equation(politopo(11)), 11)

        self.assertFalse(comparacion.coincide)
        self.assertEqual(comparacion.reetiquetado, {1: 2, 2: 1, 3: 3})

    def test_intercambio_inducido_por_simetria(self):
        """Test: en P_7 intercambiar x e y permuta λ2 y λ3, y se acepta"""
        with patch.dict(catalogo.TERMINOS_ECUACION, {7: [(1, (1, 1, 0)), (2, (0, 1, 0)), (3, (1, 0, 0))]}):
            comparacion = comparar_con_tabla(anticanonical_equation(politopo(7)), 7)

        self.assertTrue(comparacion.coincide)

    def test_simetrias_inducidas(self):
        """Test: P_6 admite las 6 permutaciones de x, y, z; P_18 solo la identidad"""
        self.assertEqual(len(simetrias_inducidas(anticanonical_equation(politopo(6)))), 6)
        self.assertEqual(simetrias_inducidas(anticanonical_equation(politopo(18))),
                         [{i: i for i in range(1, 6)}])

    def test_ecuacion_sin_tabla(self):
        """Test: P_4 se despeja con x y z² y no tiene simetrías de la base"""
        ecuacion = anticanonical_equation(politopo(4))

        self.assertEqual(texto_ecuacion(ecuacion), "x y z² (x+y+z+1)+λ1 x y z+λ2 = 0")
        self.assertEqual(simetrias_inducidas(ecuacion), [])

    def test_coeficientes_racionales(self):
        """Test: el dual polar de P_1 tiene vértices enteros"""
        dual = polar_dual(politopo(1))

        self.assertTrue(dual.es_entero)
        self.assertIn((Fraction(-1), Fraction(-1), Fraction(3)), dual.conjunto())


# ========================================
# RUNNER
# ========================================

if __name__ == '__main__':
    unittest.main(verbosity=2)
