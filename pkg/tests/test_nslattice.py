"""
Tests unitarios para nslattice

Grafos de Kodaira, retículo evidente, retículo trivial, alturas y
estructura de Mordell-Weil.
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Agregar el directorio raíz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from fano_k3 import catalogo
from fano_k3.elliptic import TipoKodaira, configuracion_fibras, generic_specializations
from fano_k3.errores import RedEvidenteError
from fano_k3.lattice import GramLattice, determinant, discriminant_form, signature
from fano_k3.nslattice import (
    beta_compatible,
    build_evident,
    build_evident_desde,
    contribucion_local,
    gram_componentes,
    mordell_weil_report,
    shioda_tate_rank,
    simetrias,
    trivial_lattice,
)


def sin_identidad(gram: list[list[int]]) -> list[list[int]]:
    return [fila[1:] for fila in gram[1:]]


# ========================================
# TESTS DE GRAFOS DE KODAIRA
# ========================================

class TestGrafosKodaira(unittest.TestCase):
    """Tests para gram_componentes y simetrias"""

    def test_gram_extendido_degenerado(self):
        """Test: el grafo extendido completo es degenerado"""
        for nombre in ("I2", "I8", "I0*", "I3*", "IV*", "III*", "II*"):
            with self.subTest(tipo=nombre):
                self.assertEqual(determinant(gram_componentes(TipoKodaira.desde_nombre(nombre))), 0)

    def test_discriminante_sin_identidad(self):
        """Test: |det| de A_{n−1}, D_{n+4}, E6, E7 y E8"""
        casos = {"I8": 8, "I3": 3, "I1*": 4, "I3*": 4, "IV*": 3, "III*": 2, "II*": 1}
        for nombre, esperado in casos.items():
            with self.subTest(tipo=nombre):
                raiz = sin_identidad(gram_componentes(TipoKodaira.desde_nombre(nombre)))
                self.assertEqual(abs(determinant(raiz)), esperado)

    def test_definido_negativo(self):
        """Test: el retículo raíz es definido negativo"""
        raiz = sin_identidad(gram_componentes(TipoKodaira.desde_nombre("IV*")))
        self.assertEqual(signature(GramLattice.desde_matriz(raiz)), (0, 6))

    def test_fibra_irreducible(self):
        """Test: I1 tiene una sola componente sin autointersección asignada"""
        self.assertEqual(gram_componentes(TipoKodaira.desde_nombre("I1")), [[0]])

    def test_simetrias_preservan_el_grafo(self):
        """Test: cada simetría fija Θ0 y preserva las intersecciones"""
        for nombre in ("I8", "I5", "I0*", "I2*", "IV*", "IV", "II*"):
            tipo = TipoKodaira.desde_nombre(nombre)
            gram = gram_componentes(tipo)
            for etiqueta, permutacion in simetrias(tipo):
                with self.subTest(tipo=nombre, simetria=etiqueta):
                    self.assertEqual(permutacion[0], 0)
                    m = len(gram)
                    for i in range(m):
                        for j in range(m):
                            self.assertEqual(gram[permutacion[i]][permutacion[j]], gram[i][j])

    def test_numero_de_simetrias(self):
        """Test: I_n (n ≥ 3), I_n* e IV* tienen una simetría no trivial"""
        self.assertEqual(len(simetrias(TipoKodaira.desde_nombre("I8"))), 2)
        self.assertEqual(len(simetrias(TipoKodaira.desde_nombre("I1*"))), 2)
        self.assertEqual(len(simetrias(TipoKodaira.desde_nombre("IV*"))), 2)
        self.assertEqual(len(simetrias(TipoKodaira.desde_nombre("I2"))), 1)
        self.assertEqual(len(simetrias(TipoKodaira.desde_nombre("II*"))), 1)


# ========================================
# TESTS DE CONTRIBUCIONES LOCALES
# ========================================

class TestContribuciones(unittest.TestCase):
    """Tests para contribucion_local"""

    def test_multiplicativas(self):
        """Test: contr = i(n − i)/n en I_n"""
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("I8"), 4), Fraction(2))
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("I5"), 2), Fraction(6, 5))
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("I5"), 0), Fraction(0))

    def test_aditivas(self):
        """Test: I_n* cercana/lejana e IV*"""
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("I2*"), 1), Fraction(1))
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("I2*"), 2), Fraction(3, 2))
        self.assertEqual(contribucion_local(TipoKodaira.desde_nombre("IV*"), 1), Fraction(4, 3))


# ========================================
# TESTS DEL RETÍCULO EVIDENTE (k = 6)
# ========================================

class TestEvidenteK6(unittest.TestCase):
    """Tests del retículo evidente y Mordell-Weil de E_6"""

    @classmethod
    def setUpClass(cls):
        especializacion = generic_specializations(6, cantidad=1, semilla=0)[0]
        cls.fibras = especializacion.fibras
        cls.configuracion = configuracion_fibras(especializacion)
        cls.evidente = build_evident_desde(6, cls.configuracion)

    def test_huellas(self):
        """Test: rango 17, |det| 16 y grupo Z2 + Z2 + Z4"""
        self.assertEqual(self.evidente.rango, 17)
        self.assertEqual(abs(self.evidente.det), 16)
        self.assertTrue(self.evidente.lista_tabla_es_base)
        self.assertEqual(self.evidente.generadores[:4], ("F", "O", "Q", "O'"))

    def test_signatura_hiperbolica(self):
        """Test: E_6 tiene signatura (1, 16)"""
        self.assertEqual(signature(self.evidente.red), (1, 16))

    def test_betas(self):
        """Test: existe β con el q publicado para cada α"""
        betas = beta_compatible(discriminant_form(self.evidente.red), 6)
        self.assertEqual(len(betas), len(catalogo.ALFAS[6]))
        self.assertTrue(all(beta is not None for beta in betas))

    def test_reticulo_trivial(self):
        """Test: T = U ⊕ A7 ⊕ A7 tiene rango 16"""
        trivial = trivial_lattice(self.evidente)

        self.assertEqual(trivial.rango, 16)
        self.assertEqual(abs(determinant(trivial.red)), 64)

    def test_shioda_tate(self):
        """Test: 17 − 2 − 7 − 7 = 1"""
        self.assertEqual(shioda_tate_rank(17, self.fibras), 1)
        with self.assertRaises(RedEvidenteError):
            shioda_tate_rank(10, self.fibras)

    def test_mordell_weil(self):
        """Test: rango 1, torsión Z2 generada por O′ y Q de altura positiva"""
        reporte = mordell_weil_report(self.evidente, self.configuracion)

        self.assertEqual(reporte.rango, 1)
        self.assertEqual(reporte.rango_secciones, 1)
        self.assertEqual(reporte.torsion, (2,))
        self.assertEqual(reporte.descripcion_torsion, "Z2")
        self.assertEqual(reporte.alturas["O'"], 0)
        self.assertEqual(reporte.ordenes["O'"], 2)
        self.assertGreater(reporte.alturas["Q"], 0)
        self.assertEqual(reporte.generador_libre, "Q")
        self.assertEqual(reporte.generador_torsion, "O'")

    def test_fibras_distintas_se_rechazan(self):
        """Test: las fibras de otro k no construyen E_7"""
        with self.assertRaises(RedEvidenteError):
            build_evident(7, self.configuracion.fibras, self.configuracion.incidencias,
                          self.configuracion.intersecciones)


# ========================================
# TESTS DEL RETÍCULO EVIDENTE (k = 18)
# ========================================

class TestEvidenteK18(unittest.TestCase):
    """Tests del retículo evidente de E_18"""

    @classmethod
    def setUpClass(cls):
        especializacion = generic_specializations(18, cantidad=1, semilla=0)[0]
        cls.configuracion = configuracion_fibras(especializacion)
        cls.evidente = build_evident_desde(18, cls.configuracion)

    def test_huellas(self):
        """Test: rango 15, |det| 44 y grupo cíclico Z44"""
        self.assertEqual(self.evidente.rango, 15)
        self.assertEqual(abs(self.evidente.det), 44)
        self.assertEqual(signature(self.evidente.red), (1, 14))

    def test_sin_torsion(self):
        """Test: Mordell-Weil de rango 1 sin torsión"""
        reporte = mordell_weil_report(self.evidente, self.configuracion)

        self.assertEqual(reporte.rango, 1)
        self.assertEqual(reporte.torsion, ())
        self.assertEqual(reporte.descripcion_torsion, "0")


# ========================================
# RUNNER
# ========================================

if __name__ == '__main__':
    unittest.main(verbosity=2)
