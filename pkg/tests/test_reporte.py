"""
Tests unitarios para reporte

JSON canónico, registros por k, tablas Markdown y exportación a Excel.
"""

import unittest
from pathlib import Path
import json
import sys
import tempfile

from openpyxl import load_workbook

# Agregar el directorio raíz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from fano_k3.errores import EtapaFallidaError, ParametroDegeneradoError
from fano_k3.lattice import resumen_red
from fano_k3.mirror import CHEQUEOS, InformeEspejo, _veredicto_fallido, verify_mirror
from fano_k3.reporte import (
    FALLA,
    OK,
    TablaReporte,
    a_json,
    construir_tablas,
    dict_a_markdown,
    ecuacion_a_dict,
    emit_tables,
    error_a_dict,
    exportar_xlsx,
    informe_a_dict,
    informe_a_markdown,
    politopo_a_dict,
    resumen_a_dict,
    tabla_a_markdown,
    veredicto_a_dict,
)


def informe_fallido() -> InformeEspejo:
    error = EtapaFallidaError("fibras", ParametroDegeneradoError("colapso de fibras"))
    return InformeEspejo(semilla=0, especializaciones=1, veredictos=[_veredicto_fallido(6, error)])


# ========================================
# TESTS DE JSON
# ========================================

class TestJson(unittest.TestCase):
    """Tests para a_json y los registros por k"""

    def test_canonico(self):
        """Test: indentación 2, orden de inserción y Unicode sin escapar"""
        self.assertEqual(a_json({"b": 1, "a": "λ"}), '{\n  "b": 1,\n  "a": "λ"\n}\n')

    def test_error(self):
        """Test: objeto de error con etapa, tipo y mensaje"""
        self.assertEqual(error_a_dict("fibras", "X", "m"),
                         {"error": {"stage": "fibras", "type": "X", "message": "m"}})

    def test_politopo(self):
        """Test: registro de P_6"""
        datos = politopo_a_dict(6)

        self.assertEqual(datos["vertices"], 6)
        self.assertEqual(datos["facets"], 8)
        self.assertEqual(datos["lattice_points"], 7)
        self.assertEqual(datos["det_L"], 16)
        self.assertEqual(datos["signature_L"], [1, 2])
        self.assertTrue(datos["polar_involution"])

    def test_politopo_degenerado(self):
        """Test: L_3 degenerado no tiene signatura"""
        datos = politopo_a_dict(3)

        self.assertEqual(datos["det_L"], 0)
        self.assertIsNone(datos["signature_L"])

    def test_ecuacion(self):
        """Test: registro de la ecuación de P_11"""
        datos = ecuacion_a_dict(11)

        self.assertTrue(datos["matches"])
        self.assertEqual(datos["equation"], datos["published"])
        self.assertEqual(datos["divided_by"], [1, 1, 1])

    def test_ecuacion_sin_tabla(self):
        """Test: P_4 no tiene ecuación publicada; published y matches quedan en None"""
        datos = ecuacion_a_dict(4)

        self.assertIsNone(datos["published"])
        self.assertIsNone(datos["matches"])
        self.assertEqual(datos["divided_by"], [1, 1, 2])

    def test_veredicto_con_error(self):
        """Test: un veredicto fallido solo lleva k, error y overall"""
        datos = veredicto_a_dict(informe_fallido().veredictos[0])

        self.assertEqual(set(datos), {"k", "error", "overall"})
        self.assertEqual(datos["error"]["stage"], "fibras")
        self.assertFalse(datos["overall"])

    def test_resumen(self):
        """Test: resumen solo-retículo de L_4"""
        datos = resumen_a_dict(resumen_red(4))

        self.assertEqual(datos["signature"], [0, 2])
        self.assertEqual(datos["expected_signature"], [1, 1])
        self.assertEqual(datos["det"], 3)


class TestVeredictoCompleto(unittest.TestCase):
    """Tests del JSON de un veredicto exitoso (k = 18)"""

    @classmethod
    def setUpClass(cls):
        cls.veredicto = verify_mirror(18, semilla=0, especializaciones=1)
        cls.datos = veredicto_a_dict(cls.veredicto)

    def test_esquema(self):
        """Test: claves en orden fijo y chequeos completos"""
        self.assertEqual(list(self.datos), ["k", "lambda_used", "fibers", "sections", "evident",
                                            "mordell_weil", "checks", "overall"])
        self.assertEqual(list(self.datos["checks"]), list(CHEQUEOS))
        self.assertTrue(self.datos["overall"])

    def test_racionales_como_texto(self):
        """Test: λ y q(β) se serializan como texto"""
        self.assertTrue(all(isinstance(l, str) for l in self.datos["lambda_used"]))
        self.assertEqual(self.datos["evident"]["group"], [44])
        self.assertTrue(all(isinstance(q, str) for q in self.datos["evident"]["q_beta"]))

    def test_reserializacion_estable(self):
        """Test: leer y volver a escribir el JSON da los mismos bytes"""
        texto = a_json(informe_a_dict(InformeEspejo(0, 1, [self.veredicto])))
        self.assertEqual(a_json(json.loads(texto)), texto)


# ========================================
# TESTS DE TABLAS
# ========================================

class TestTablas(unittest.TestCase):
    """Tests para TablaReporte, Markdown y emit_tables"""

    def test_tabla_a_markdown(self):
        """Test: encabezado, separador y una fila"""
        tabla = TablaReporte("t", "Título", ["a", "b"], [[1, f"x {OK}"]])

        self.assertEqual(tabla_a_markdown(tabla), f"## Título\n\n| a | b |\n|---|---|\n| 1 | x {OK} |\n")
        self.assertTrue(tabla.coincide)
        tabla.filas.append([2, f"y {FALLA}"])
        self.assertFalse(tabla.coincide)

    def test_tablas_con_veredicto_fallido(self):
        """Test: un veredicto con error marca ✗ en las tablas que dependen de E_k"""
        tablas = {t.clave: t for t in construir_tablas(informe_fallido())}

        self.assertEqual(len(tablas), 7)
        self.assertTrue(tablas["politopos"].coincide)
        self.assertTrue(tablas["ecuaciones"].coincide)
        self.assertFalse(tablas["fibras"].coincide)
        self.assertIn("error en 'fibras'", tablas["fibras"].filas[0][1])

    def test_emit_tables_json(self):
        """Test: emit_tables en JSON lista las siete tablas"""
        datos = json.loads(emit_tables(informe_fallido(), "json"))

        self.assertEqual([t["key"] for t in datos["tables"]][:2], ["politopos", "ecuaciones"])
        self.assertEqual(len(datos["tables"]), 7)

    def test_emit_tables_formato_desconocido(self):
        """Test: un formato desconocido lanza ValueError"""
        with self.assertRaises(ValueError):
            emit_tables(informe_fallido(), "csv")

    def test_informe_markdown(self):
        """Test: el informe Markdown muestra la etapa fallida"""
        texto = informe_a_markdown(informe_fallido())

        self.assertIn("semilla 0", texto)
        self.assertIn("error en 'fibras'", texto)

    def test_dict_a_markdown(self):
        """Test: diccionarios anidados como sublistas"""
        texto = dict_a_markdown("T", {"k": 6, "checks": {"x": True}})
        self.assertEqual(texto, "# T\n\n- **k**: 6\n- **checks**:\n  - x: True\n")


# ========================================
# TESTS DE EXCEL
# ========================================

class TestExcel(unittest.TestCase):
    """Tests para exportar_xlsx"""

    def test_una_hoja_por_tabla(self):
        """Test: el libro tiene una hoja por tabla con encabezado"""
        tablas = [
            TablaReporte("tabla_a", "A", ["k", "valor"], [[6, "Z2"], [7, "Z3"]]),
            TablaReporte("tabla_b", "B", ["k"], []),
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            ruta = exportar_xlsx(tablas, Path(tmpdir) / "sub" / "tablas.xlsx")
            wb = load_workbook(ruta)

            self.assertEqual(wb.sheetnames, ["tabla_a", "tabla_b"])
            ws = wb["tabla_a"]
            self.assertEqual(ws["A1"].value, "k")
            self.assertEqual(ws["B3"].value, "Z3")
            self.assertTrue(ws["A1"].font.bold)
            self.assertEqual(len(ws.tables), 1)
            wb.close()


# ========================================
# RUNNER
# ========================================

if __name__ == '__main__':
    unittest.main(verbosity=2)
