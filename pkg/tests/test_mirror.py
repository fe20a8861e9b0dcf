"""
Tests unitarios para mirror

Pipeline de verificación E_k ≅ U ⊕ L_k, control negativo con Gram
mutados y backend VerificadorEspejo.
"""

import unittest
from unittest.mock import Mock
from pathlib import Path
import tempfile
import sys

# Agregar el directorio raíz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from fano_k3 import catalogo
from fano_k3.backend_base import EstadoProceso, FaseProceso, NivelMensaje, ResultadoK
from fano_k3.elliptic import multiconjunto_fibras, multiconjunto_publicado
from fano_k3.errores import EtapaFallidaError, ParametroDegeneradoError, ParametroInvalidoError
from fano_k3.lattice import discriminant_form, red_L
from fano_k3.mirror import (
    CHEQUEOS,
    InformeEspejo,
    MirrorVerdict,
    VerificadorEspejo,
    _veredicto_fallido,
    analizar_fibracion,
    control_negativo,
    mutaciones_gram,
    report_all,
    verify_mirror,
)


# ========================================
# TESTS DEL PIPELINE
# ========================================

class TestVerifyMirrorK6(unittest.TestCase):
    """Tests de verify_mirror para k = 6"""

    @classmethod
    def setUpClass(cls):
        cls.veredicto = verify_mirror(6, semilla=0, especializaciones=1)

    def test_todos_los_chequeos(self):
        """Test: los seis chequeos pasan para k = 6"""
        self.assertEqual(tuple(self.veredicto.checks), CHEQUEOS)
        self.assertTrue(all(self.veredicto.checks.values()))
        self.assertTrue(self.veredicto.overall)
        self.assertIsNone(self.veredicto.etapa_fallida)

    def test_formas_discriminantes(self):
        """Test: A_E ≅ A_L ≅ Z2 + Z2 + Z4"""
        self.assertEqual(self.veredicto.forma_e.factores, (2, 2, 4))
        self.assertEqual(self.veredicto.forma_l.factores, catalogo.GRUPOS[6])

    def test_secciones_y_q_beta(self):
        """Test: Q y O′ verifican y hay un q(β) por cada α"""
        self.assertEqual(self.veredicto.secciones, {"Q": True, "O'": True})
        self.assertEqual(len(self.veredicto.q_beta), len(catalogo.ALFAS[6]))

    def test_control_negativo_todas_las_mutaciones(self):
        """Test: ninguna mutación ±1 de L_6 conserva q_E ≅ −q_L"""
        for (i, j, delta), mutado in mutaciones_gram(catalogo.GRAM_L[6]):
            with self.subTest(i=i, j=j, delta=delta):
                self.assertFalse(control_negativo(self.veredicto.forma_e, mutado))


class TestVerifyMirror(unittest.TestCase):
    """Tests de verify_mirror para otros k y casos de error"""

    def test_k18(self):
        """Test: k = 18 verifica con grupo Z44"""
        veredicto = verify_mirror(18, semilla=0, especializaciones=1)

        self.assertTrue(veredicto.overall)
        self.assertEqual(veredicto.forma_e.factores, (44,))

    def test_k9_torsion(self):
        """Test: k = 9 tiene torsión de Mordell-Weil Z2"""
        veredicto = verify_mirror(9, semilla=0, especializaciones=1)

        self.assertTrue(veredicto.overall)
        self.assertEqual(veredicto.mordell_weil.torsion, (2,))

    def test_gram_mutado_falla_isomorfismo(self):
        """Test: L_6 con la entrada (0, 1) = 3 no pasa form_isomorphism"""
        mutado = [list(fila) for fila in catalogo.GRAM_L[6]]
        mutado[0][1] = mutado[1][0] = 3

        veredicto = verify_mirror(6, semilla=0, especializaciones=1, gram_l=mutado)

        self.assertFalse(veredicto.checks["form_isomorphism"])
        self.assertFalse(veredicto.checks["determinant"])
        self.assertFalse(veredicto.overall)
        self.assertEqual(veredicto.etapa_fallida, "form_isomorphism")

    def test_rango_mw_distinto_falla(self):
        """Test: exigir rango 2 en k = 6 hace fallar mw_rank"""
        veredicto = verify_mirror(6, semilla=0, especializaciones=1, rango_mw=2)

        self.assertEqual(veredicto.mordell_weil.rango, 1)
        self.assertFalse(veredicto.checks["mw_rank"])
        self.assertFalse(veredicto.overall)
        self.assertEqual(veredicto.etapa_fallida, "mw_rank")

    def test_k_fuera_de_rango(self):
        """Test: la verificación completa exige k en 6..18"""
        with self.assertRaises(ParametroInvalidoError):
            verify_mirror(5)

    def test_etapa_fallida(self):
        """Test: sin intentos suficientes falla la etapa 'especializaciones'"""
        with self.assertRaises(EtapaFallidaError) as contexto:
            verify_mirror(6, especializaciones=1, intentos_maximos=1)

        self.assertEqual(contexto.exception.etapa, "especializaciones")
        self.assertIsInstance(contexto.exception.causa, ParametroDegeneradoError)

    def test_analizar_fibracion(self):
        """Test: las especializaciones de k = 7 coinciden con la tabla"""
        analisis = analizar_fibracion(7, semilla=5, especializaciones=2)

        self.assertEqual(len(analisis.lambdas), 2)
        self.assertTrue(analisis.coincide_con_tabla)
        self.assertIsNone(analisis.torsion_o_prima)


# ========================================
# TESTS DE TODOS LOS k FIBRADOS
# ========================================

class TestTodosLosK(unittest.TestCase):
    """Tests de aceptación para k = 6..18 con tres especializaciones"""

    @classmethod
    def setUpClass(cls):
        cls.veredictos = {k: verify_mirror(k, semilla=0, especializaciones=3) for k in catalogo.RANGO_FIBRADO}
        cls.fibraciones = {k: analizar_fibracion(k, semilla=0, especializaciones=3) for k in catalogo.RANGO_FIBRADO}

    def test_veredicto_positivo(self):
        """Test: los seis chequeos pasan en cada k"""
        for k, veredicto in self.veredictos.items():
            with self.subTest(k=k):
                self.assertTrue(veredicto.overall, veredicto.checks)

    def test_fibras_de_cada_especializacion(self):
        """Test: las tres especializaciones reproducen el multiconjunto publicado"""
        for k, analisis in self.fibraciones.items():
            with self.subTest(k=k):
                self.assertEqual(len(analisis.fibras), 3)
                for fibras in analisis.fibras:
                    self.assertEqual(multiconjunto_fibras(fibras), multiconjunto_publicado(k))
                    self.assertEqual(sum(f.orbita * f.euler for f in fibras), 24)

    def test_fibras_k8(self):
        """Test: k = 8 tiene I1* + I3 + I8 + 6·I1"""
        esperado = {"I1*": 1, "I3": 1, "I8": 1, "I1": 6}

        self.assertEqual(multiconjunto_publicado(8), esperado)
        for fibras in self.fibraciones[8].fibras:
            self.assertEqual(multiconjunto_fibras(fibras), esperado)

    def test_huellas_del_evidente(self):
        """Test: rango y |det| de E_k coinciden con la tabla"""
        for k, veredicto in self.veredictos.items():
            fila = catalogo.EVIDENTES[k]
            with self.subTest(k=k):
                self.assertEqual(veredicto.evidente.rango, fila.rango)
                self.assertEqual(abs(veredicto.evidente.det), fila.det_abs)
                self.assertEqual(veredicto.forma_e.factores, catalogo.GRUPOS[k])
                self.assertEqual(len(veredicto.q_beta), len(catalogo.ALFAS[k]))

    def test_mordell_weil(self):
        """Test: rango y torsión de Mordell-Weil para cada k"""
        for k, veredicto in self.veredictos.items():
            mw = veredicto.mordell_weil
            with self.subTest(k=k):
                self.assertEqual(mw.rango, catalogo.RANGO_MW[k])
                self.assertEqual(veredicto.rango_mw_esperado, catalogo.RANGO_MW[k])
                self.assertEqual(mw.torsion, catalogo.TORSION_MW[k])

    def test_excepcion_k12(self):
        """Test: k = 12 tiene rango 0 y Q de 3-torsión"""
        mw = self.veredictos[12].mordell_weil

        self.assertEqual(catalogo.RANGO_MW[12], 0)
        self.assertEqual(mw.torsion, (3,))
        self.assertTrue(self.veredictos[12].checks["mw_rank"])


# ========================================
# TESTS DE TIPOS Y CONTROL NEGATIVO
# ========================================

class TestVeredictos(unittest.TestCase):
    """Tests para MirrorVerdict, InformeEspejo y mutaciones_gram"""

    def test_veredicto_fallido(self):
        """Test: un fallo de etapa queda registrado y el veredicto es negativo"""
        error = EtapaFallidaError("fibras", ParametroDegeneradoError("colapso"))
        veredicto = _veredicto_fallido(12, error)

        self.assertFalse(veredicto.overall)
        self.assertEqual(veredicto.etapa_fallida, "fibras")
        self.assertEqual(veredicto.error["type"], "ParametroDegeneradoError")
        self.assertEqual(veredicto.error["message"], "colapso")

    def test_veredicto_sin_chequeos(self):
        """Test: sin chequeos el veredicto no es positivo"""
        self.assertFalse(MirrorVerdict(k=6).overall)

    def test_informe_cancelado(self):
        """Test: un informe cancelado nunca es positivo"""
        informe = InformeEspejo(0, 3, [MirrorVerdict(k=6, checks={"signature": True})], cancelado=True)

        self.assertFalse(informe.overall)
        informe.cancelado = False
        self.assertTrue(informe.overall)

    def test_mutaciones(self):
        """Test: 2 mutaciones por entrada fuera de la diagonal, diagonal intacta"""
        mutaciones = list(mutaciones_gram(catalogo.GRAM_L[6]))

        self.assertEqual(len(mutaciones), 6)
        for _, mutado in mutaciones:
            self.assertEqual([mutado[i][i] for i in range(3)], [0, 0, 0])
            self.assertEqual(mutado, [list(fila) for fila in zip(*mutado)])

    def test_control_negativo_degenerado(self):
        """Test: un Gram degenerado nunca pasa el control"""
        forma = discriminant_form(red_L(6))
        self.assertFalse(control_negativo(forma, [[0, 0], [0, 0]]))


# ========================================
# TESTS DEL BACKEND
# ========================================

class TestVerificadorEspejo(unittest.TestCase):
    """Tests para VerificadorEspejo y report_all"""

    def setUp(self):
        self.callback_mensaje = Mock()
        self.callback_progreso = Mock()
        self.callback_estado = Mock()

    def test_validacion(self):
        """Test: parámetros inválidos se rechazan con mensaje"""
        verificador = VerificadorEspejo()

        self.assertFalse(verificador.validar_parametros([19])[0])
        self.assertFalse(verificador.validar_parametros([6], especializaciones=0)[0])
        self.assertFalse(verificador.validar_parametros([6], especializaciones=3, intentos_maximos=3)[0])
        self.assertFalse(verificador.validar_parametros([6], semilla=-1)[0])
        self.assertFalse(verificador.validar_parametros([6], cota_orden=0)[0])
        self.assertEqual(verificador.validar_parametros([6]), (True, ""))

    def test_ejecutar_invalido(self):
        """Test: ejecutar lanza ValueError y notifica el error"""
        verificador = VerificadorEspejo(callback_mensaje=self.callback_mensaje)

        with self.assertRaises(ValueError):
            verificador.ejecutar([0])
        niveles = [llamada[0][1] for llamada in self.callback_mensaje.call_args_list]
        self.assertIn(NivelMensaje.ERROR, niveles)

    def test_report_all_cardinalidad(self):
        """Test: un veredicto por k fibrado y un resumen por k solo-retículo"""
        informe = report_all(
            ks=[1, 3, 7], especializaciones=1, hilos=2,
            callback_mensaje=self.callback_mensaje,
            callback_progreso=self.callback_progreso,
            callback_estado=self.callback_estado,
        )

        self.assertEqual([v.k for v in informe.veredictos], [7])
        self.assertEqual([r.k for r in informe.resumenes], [1, 3])
        self.assertTrue(informe.resumenes[1].degenerada)
        self.assertTrue(informe.overall)
        self.callback_progreso.assert_called_with(1, 1, 100.0)
        self.callback_estado.assert_called_with(EstadoProceso.COMPLETADO)
        niveles = [llamada[0][1] for llamada in self.callback_mensaje.call_args_list]
        self.assertIn(NivelMensaje.SUCCESS, niveles)

    def test_log_de_verificacion(self):
        """Test: el log abre con los parámetros y cierra con una línea por k"""
        with tempfile.TemporaryDirectory() as tmpdir:
            verificador = VerificadorEspejo()
            resultado = verificador.ejecutar([4, 2], semilla=5, carpeta_log=tmpdir)

            contenido = verificador.log_file.read_text(encoding='utf-8')
            self.assertTrue(verificador.log_file.name.startswith("verificacion_espejo_"))
            self.assertEqual(resultado['resumenes_solo_red'], 2)
            self.assertIn("semilla: 5", contenido)
            self.assertIn("RESUMEN POR K", contenido)
            self.assertLess(contenido.index("k= 2 | solo_red"), contenido.index("k= 4 | solo_red"))
            self.assertIn("[solo_red] L_4", contenido)
            self.assertIn("Estado final: completado", contenido)

    def test_registro_por_k(self):
        """Test: cada k queda registrado con la fase en que terminó"""
        verificador = VerificadorEspejo()
        verificador._informe = InformeEspejo(0, 1)

        error = EtapaFallidaError("fibras", ParametroDegeneradoError("colapso de fibras"))
        verificador._registrar(_veredicto_fallido(6, error))
        checks = {nombre: True for nombre in CHEQUEOS} | {"mw_rank": False}
        verificador._registrar(MirrorVerdict(k=7, checks=checks))
        checks = {nombre: True for nombre in CHEQUEOS} | {"group": False}
        verificador._registrar(MirrorVerdict(k=8, checks=checks))

        registros = verificador.estadisticas.registros
        self.assertEqual((registros[6].fase, registros[6].resultado), (FaseProceso.FIBRAS, ResultadoK.ERROR))
        self.assertIn("colapso de fibras", registros[6].detalle)
        self.assertEqual((registros[7].fase, registros[7].resultado),
                         (FaseProceso.MORDELL_WEIL, ResultadoK.FALLIDO))
        self.assertEqual(registros[8].fase, FaseProceso.FORMAS)
        self.assertEqual(verificador.estadisticas.totales()['ks_con_error'], 1)
        self.assertEqual(verificador.estadisticas.totales()['ks_fallidos'], 2)

    def test_cancelacion(self):
        """Test: cancelar tras el primer k devuelve un informe parcial"""
        verificador = VerificadorEspejo(hilos=1)

        def progreso(actual, total, porcentaje):
            if actual >= 1:
                verificador.cancelar()

        verificador.callback_progreso = progreso
        resultado = verificador.ejecutar([7, 10], especializaciones=1)

        self.assertTrue(resultado['cancelado'])
        self.assertTrue(resultado['informe'].cancelado)
        self.assertFalse(resultado['informe'].overall)
        self.assertLessEqual(len(resultado['informe'].veredictos), 2)
        self.assertEqual(verificador.estado_actual, EstadoProceso.CANCELADO)


# ========================================
# RUNNER
# ========================================

if __name__ == '__main__':
    unittest.main(verbosity=2)
