"""
Tests unitarios para elliptic

Ecuación de la fibración, forma de Weierstrass, clasificación de Kodaira,
especializaciones genéricas, ley de grupo e inclusiones entre familias.
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Agregar el directorio raíz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from fano_k3 import catalogo
from fano_k3.errores import ParametroDegeneradoError, ParametroInvalidoError
from fano_k3.exactmath import X1, RatFunc, UniPoly, discriminant_wrt_y, poly_gcd
from fano_k3.elliptic import (
    FibrationEquation,
    SectionMap,
    TipoKodaira,
    birational_map,
    build_fibration,
    check_inclusion,
    classify_fibers,
    configuracion_fibras,
    discriminant_factor,
    en_curva,
    family_inclusions,
    generic_specializations,
    j_invariant,
    multiconjunto_fibras,
    multiconjunto_publicado,
    multiplicar,
    numero_parametros,
    orden_torsion,
    pairwise_section_intersections,
    secciones_publicadas,
    sumar,
    tipo_kodaira,
    to_weierstrass,
    verify_section,
)


LAMBDAS_PRUEBA = (Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11))


def lambdas_para(k: int) -> tuple[Fraction, ...]:
    return LAMBDAS_PRUEBA[:numero_parametros(k)]


# ========================================
# TESTS DE CONSTRUCCIÓN
# ========================================

class TestBuildFibration(unittest.TestCase):
    """Tests para build_fibration"""

    def test_coeficientes_k6(self):
        """Test: para k = 6 y λ = (1, 1, 1), a2 = 4x⁴ y a3 = 0"""
        fibracion = build_fibration(6, [1, 1, 1])

        self.assertEqual(fibracion.a2, 4 * X1 ** 4)
        self.assertTrue(fibracion.a3.es_cero)

    def test_coeficientes_k18(self):
        """Test: para k = 18 y λ = 1, a3 = x⁶(1 + x)²"""
        fibracion = build_fibration(18, [1, 1, 1, 1, 1])

        self.assertEqual(fibracion.a3, X1 ** 6 * (1 + X1) ** 2)

    def test_lambdas_como_texto(self):
        """Test: los λ se aceptan como 'p/q'"""
        fibracion = build_fibration(7, ["1/2", "3", "-5/7"])

        self.assertEqual(fibracion.lambdas, (Fraction(1, 2), Fraction(3), Fraction(-5, 7)))

    def test_aridad_incorrecta(self):
        """Test: k = 6 exige exactamente 3 λ"""
        with self.assertRaises(ParametroInvalidoError):
            build_fibration(6, [1, 2])

    def test_lambda_nulo(self):
        """Test: λ = 0 se rechaza"""
        with self.assertRaises(ParametroInvalidoError):
            build_fibration(6, [1, 0, 2])

    def test_lambda_float(self):
        """Test: un float no es un racional exacto"""
        with self.assertRaises(ParametroInvalidoError):
            build_fibration(6, [1, 0.5, 2])

    def test_k_sin_fibracion(self):
        """Test: k = 5 no tiene modelo de fibración"""
        with self.assertRaises(ParametroInvalidoError):
            build_fibration(5, [1])


# ========================================
# TESTS DE WEIERSTRASS
# ========================================

class TestWeierstrass(unittest.TestCase):
    """Tests para to_weierstrass y j_invariant"""

    def test_a1_constante(self):
        """Test: a1 = 12, a2 = a3 = 0 da g2 = 12 y g3 = −8"""
        fibracion = FibrationEquation(6, (), UniPoly.constante(12), UniPoly(), UniPoly())
        modelo = to_weierstrass(fibracion)

        self.assertEqual(modelo.g2, UniPoly.constante(12))
        self.assertEqual(modelo.g3, UniPoly.constante(-8))
        self.assertTrue(modelo.delta.es_cero)

    def test_delta_nulo_no_es_eliptica(self):
        """Test: Δ ≡ 0 impide calcular j y clasificar"""
        modelo = to_weierstrass(FibrationEquation(6, (), UniPoly.constante(12), UniPoly(), UniPoly()))

        with self.assertRaises(ParametroDegeneradoError):
            j_invariant(modelo)
        with self.assertRaises(ParametroDegeneradoError):
            classify_fibers(modelo)

    def test_discriminante_de_la_cubica(self):
        """Test: disc_y(4y³ + a1y² + a2y + a3) = 16Δ"""
        for k in catalogo.RANGO_FIBRADO:
            with self.subTest(k=k):
                fibracion = build_fibration(k, lambdas_para(k))
                modelo = to_weierstrass(fibracion)
                self.assertEqual(discriminant_wrt_y(fibracion.cubica()), 16 * modelo.delta)

    def test_j_consistente(self):
        """Test: j·Δ = g2³"""
        modelo = to_weierstrass(build_fibration(9, lambdas_para(9)))
        j = j_invariant(modelo)

        self.assertEqual(j * RatFunc(modelo.delta), RatFunc(modelo.g2 ** 3))

    def test_factor_de_fibras_i1(self):
        """Test: el factor de Δ es libre de cuadrados y su grado cuenta las I1 finitas"""
        especializacion = generic_specializations(6, cantidad=1, semilla=0)[0]
        factor = discriminant_factor(especializacion.modelo)
        i1_finitas = sum(f.orbita for f in especializacion.fibras
                         if f.tipo.nombre == "I1" and not f.lugar.es_infinito)

        self.assertTrue(factor.divide_a(especializacion.modelo.delta))
        self.assertTrue(poly_gcd(factor, factor.derivada()).es_constante)
        self.assertEqual(factor.grado, i1_finitas)


# ========================================
# TESTS DE KODAIRA
# ========================================

class TestKodaira(unittest.TestCase):
    """Tests para TipoKodaira y tipo_kodaira"""

    def test_tabla(self):
        """Test: órdenes (g2, g3, Δ) de un modelo minimal"""
        self.assertEqual(tipo_kodaira(0, 0, 5).nombre, "I5")
        self.assertEqual(tipo_kodaira(1, 1, 2).nombre, "II")
        self.assertEqual(tipo_kodaira(2, 3, 6).nombre, "I0*")
        self.assertEqual(tipo_kodaira(2, 3, 9).nombre, "I3*")
        self.assertEqual(tipo_kodaira(3, 4, 8).nombre, "IV*")
        self.assertIsNone(tipo_kodaira(1, 0, 0))

    def test_fuera_de_tabla(self):
        """Test: una combinación imposible se rechaza"""
        with self.assertRaises(ParametroDegeneradoError):
            tipo_kodaira(1, 1, 7)

    def test_euler_y_componentes(self):
        """Test: número de Euler y de componentes"""
        casos = {"I8": (8, 8), "I3*": (9, 8), "IV*": (8, 7), "III*": (9, 8), "II*": (10, 9), "II": (2, 1)}
        for nombre, (euler, componentes) in casos.items():
            with self.subTest(tipo=nombre):
                tipo = TipoKodaira.desde_nombre(nombre)
                self.assertEqual(tipo.euler, euler)
                self.assertEqual(tipo.componentes, componentes)

    def test_grafos_son_arboles_o_ciclos(self):
        """Test: los grafos extendidos tienen tantas aristas como exige su forma"""
        self.assertEqual(len(TipoKodaira.desde_nombre("I7").aristas()), 7)
        self.assertEqual(TipoKodaira.desde_nombre("I2").aristas(), [(0, 1, 2)])
        for nombre in ("I0*", "I3*", "IV*", "III*", "II*"):
            with self.subTest(tipo=nombre):
                tipo = TipoKodaira.desde_nombre(nombre)
                self.assertEqual(len(tipo.aristas()), tipo.componentes - 1)

    def test_componentes_simples(self):
        """Test: I_n* tiene cuatro componentes simples e IV* tres"""
        self.assertEqual(TipoKodaira.desde_nombre("I1*").simples, (0, 1, 2, 3))
        self.assertEqual(TipoKodaira.desde_nombre("IV*").simples, (0, 1, 2))

    def test_nombre_desconocido(self):
        """Test: nombre fuera de la clasificación"""
        with self.assertRaises(ValueError):
            TipoKodaira.desde_nombre("V")


# ========================================
# TESTS DE FIBRAS Y ESPECIALIZACIONES
# ========================================

class TestFibras(unittest.TestCase):
    """Tests para classify_fibers y generic_specializations"""

    def test_fibras_k6(self):
        """Test: k = 6 tiene 2·I8 + 8·I1"""
        especializacion = generic_specializations(6, cantidad=1, semilla=0)[0]

        self.assertEqual(multiconjunto_fibras(especializacion.fibras), {"I8": 2, "I1": 8})
        self.assertEqual(multiconjunto_publicado(6), {"I8": 2, "I1": 8})

    def test_fibras_k18(self):
        """Test: k = 18 reproduce I7 + I3 + I5 + 9·I1"""
        especializacion = generic_specializations(18, cantidad=1, semilla=0)[0]

        self.assertEqual(multiconjunto_fibras(especializacion.fibras), multiconjunto_publicado(18))

    def test_suma_de_euler(self):
        """Test: Σ órbita·euler = 24"""
        especializacion = generic_specializations(11, cantidad=1, semilla=3)[0]

        self.assertEqual(sum(f.orbita * f.euler for f in especializacion.fibras), 24)

    def test_determinismo_por_semilla(self):
        """Test: la misma semilla produce los mismos λ"""
        a = generic_specializations(7, cantidad=2, semilla=42)
        b = generic_specializations(7, cantidad=2, semilla=42)

        self.assertEqual([e.lambdas for e in a], [e.lambdas for e in b])
        self.assertNotEqual(a[0].lambdas, a[1].lambdas)

    def test_lambdas_en_rango(self):
        """Test: λ = p/q con p, q en [1, 50]"""
        for especializacion in generic_specializations(13, cantidad=2, semilla=1):
            for l in especializacion.lambdas:
                self.assertGreater(l, 0)
                self.assertLessEqual(l, 50)
                self.assertGreaterEqual(l, Fraction(1, 50))

    def test_cantidad_invalida(self):
        """Test: se necesita al menos una especialización"""
        with self.assertRaises(ParametroInvalidoError):
            generic_specializations(6, cantidad=0)

    def test_sin_intentos_suficientes(self):
        """Test: con un único intento no se reúnen dos especializaciones"""
        with self.assertRaises(ParametroDegeneradoError):
            generic_specializations(6, cantidad=2, intentos_maximos=1)


# ========================================
# TESTS DE SECCIONES
# ========================================

class TestSecciones(unittest.TestCase):
    """Tests para secciones, ley de grupo e intersecciones"""

    def test_secciones_publicadas_verifican(self):
        """Test: Q (y O′ si existe) satisfacen la ecuación para todo k"""
        for k in catalogo.RANGO_FIBRADO:
            fibracion = build_fibration(k, lambdas_para(k))
            for seccion in secciones_publicadas(fibracion):
                with self.subTest(k=k, seccion=seccion.nombre):
                    self.assertTrue(verify_section(fibracion, seccion))

    def test_seccion_falsa(self):
        """Test: (y, z) = (x, x) no es una sección de k = 6"""
        fibracion = build_fibration(6, lambdas_para(6))

        self.assertFalse(verify_section(fibracion, SectionMap("P", X1, X1)))

    def test_o_prima_es_2_torsion(self):
        """Test: O′ = (0, 0) tiene orden 2 para k = 6, 9, 13, 17"""
        for k in (6, 9, 13, 17):
            with self.subTest(k=k):
                fibracion = build_fibration(k, lambdas_para(k))
                o_prima = [s for s in secciones_publicadas(fibracion) if s.nombre == "O'"][0]
                self.assertEqual(orden_torsion(fibracion, o_prima.punto()), 2)
                self.assertIsNone(multiplicar(fibracion, 2, o_prima.punto()))

    def test_suma_en_curva(self):
        """Test: Q + O′ y 2Q siguen en la curva"""
        fibracion = build_fibration(6, lambdas_para(6))
        secciones = {s.nombre: s for s in secciones_publicadas(fibracion)}
        q = secciones["Q"].punto()
        o_prima = secciones["O'"].punto()

        self.assertTrue(en_curva(fibracion, sumar(fibracion, q, o_prima)))
        self.assertTrue(en_curva(fibracion, sumar(fibracion, q, q)))

    def test_q_no_es_torsion_pequena(self):
        """Test: Q no tiene orden ≤ 3 para k = 6"""
        fibracion = build_fibration(6, lambdas_para(6))
        q = secciones_publicadas(fibracion)[1]

        self.assertIsNone(orden_torsion(fibracion, q.punto(), cota=3))

    def test_tabla_intersecciones(self):
        """Test: la tabla es simétrica con −2 en la diagonal"""
        especializacion = generic_specializations(6, cantidad=1, semilla=0)[0]
        tabla = pairwise_section_intersections(6, especializacion.lambdas)

        for nombre in ("O", "Q", "O'"):
            self.assertEqual(tabla[(nombre, nombre)], -2)
        self.assertEqual(tabla[("O", "Q")], tabla[("Q", "O")])
        self.assertGreaterEqual(tabla[("Q", "O'")], 0)

    def test_configuracion_k6(self):
        """Test: O corta la componente 0 de las dos fibras I8"""
        configuracion = configuracion_fibras(generic_specializations(6, cantidad=1, semilla=0)[0])

        self.assertEqual(len(configuracion.reducibles()), 2)
        self.assertEqual(set(configuracion.incidencias["O"].values()), {0})
        for nombre in ("Q", "O'"):
            for i, componente in configuracion.incidencias[nombre].items():
                self.assertIn(componente, range(8))


# ========================================
# TESTS DE INCLUSIONES Y MAPAS
# ========================================

class TestInclusiones(unittest.TestCase):
    """Tests para check_inclusion y birational_map"""

    def test_inclusiones(self):
        """Test: F7 ⊂ F14, F9 ⊂ F13 y F10 ⊂ F16"""
        inclusiones = family_inclusions()

        self.assertEqual([(i.menor, i.mayor) for i in inclusiones], [(7, 14), (9, 13), (10, 16)])
        for inclusion in inclusiones:
            with self.subTest(menor=inclusion.menor):
                self.assertTrue(check_inclusion(inclusion, [Fraction(2), Fraction(3, 7), Fraction(5)]))

    def test_mapa_birracional(self):
        """Test: las fórmulas se devuelven como texto"""
        mapa = birational_map(18)

        self.assertEqual(mapa["x"], "x1")
        self.assertEqual(set(mapa), {"x", "y", "z"})

    def test_mapa_fuera_de_rango(self):
        """Test: k = 3 no tiene mapa"""
        with self.assertRaises(ParametroInvalidoError):
            birational_map(3)


# ========================================
# RUNNER
# ========================================

if __name__ == '__main__':
    unittest.main(verbosity=2)
