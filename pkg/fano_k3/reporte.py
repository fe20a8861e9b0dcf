"""
Salidas del paquete: JSON canónico, tablas Markdown y libro Excel.

El JSON usa un orden de campos fijo y racionales como texto "p/q", de modo
que volver a serializar un informe leído da exactamente los mismos bytes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.worksheet.table import Table, TableStyleInfo

from fano_k3 import catalogo
from fano_k3.elliptic import KodairaFiber, multiconjunto_fibras, multiconjunto_publicado
from fano_k3.exactmath import racional_a_texto
from fano_k3.lattice import ResumenRed, determinant, q_en_dual, red_L, signature
from fano_k3.mirror import CHEQUEOS, AnalisisEvidente, AnalisisFibracion, InformeEspejo, MirrorVerdict
from fano_k3.polytope import (
    anticanonical_equation,
    comparar_con_tabla,
    facets,
    is_fano,
    is_reflexive,
    lattice_points,
    monomio_despeje,
    polar_dual,
    politopo,
    texto_ecuacion,
    texto_tabla,
)


logger = logging.getLogger(__name__)

OK, FALLA = "✓", "✗"
COLOR_ENCABEZADO = "16A085"
ANCHO_MAXIMO = 60


# ========================================
# JSON CANÓNICO
# ========================================

def a_json(datos: Any) -> str:
    """Serialización canónica: indent=2, sin escapar Unicode, salto final."""
    return json.dumps(datos, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _texto(valor: Fraction) -> str:
    return racional_a_texto(valor)


def _fibras_a_lista(fibras: Iterable[KodairaFiber]) -> list[dict[str, str]]:
    return [{"place": f.lugar.etiqueta(), "type": f.tipo.nombre} for f in fibras]


def veredicto_a_dict(veredicto: MirrorVerdict) -> dict:
    """Esquema {k, lambda_used, fibers, evident, mordell_weil, checks, overall} (o error)."""
    datos: dict[str, Any] = {"k": veredicto.k}
    if veredicto.error is not None:
        datos["error"] = dict(veredicto.error)
        datos["overall"] = False
        return datos

    evidente = veredicto.evidente
    mw = veredicto.mordell_weil
    datos["lambda_used"] = [_texto(l) for l in veredicto.lambdas]
    datos["fibers"] = _fibras_a_lista(veredicto.fibras)
    datos["sections"] = dict(veredicto.secciones)
    datos["evident"] = {
        "rank": evidente.rango,
        "det": abs(evidente.det),
        "group": list(veredicto.forma_e.factores),
        "q_beta": [_texto(q) for q in veredicto.q_beta],
        "table_list_is_basis": evidente.lista_tabla_es_base,
    }
    datos["mordell_weil"] = {
        "rank": mw.rango,
        "expected_rank": veredicto.rango_mw_esperado,
        "torsion": list(mw.torsion),
        "heights": {nombre: _texto(h) for nombre, h in mw.alturas.items()},
        "orders": dict(mw.ordenes),
    }
    datos["checks"] = {nombre: bool(valor) for nombre, valor in veredicto.checks.items()}
    datos["overall"] = veredicto.overall
    return datos


def resumen_a_dict(resumen: ResumenRed) -> dict:
    return {
        "k": resumen.k,
        "rank": resumen.rango,
        "degenerate": resumen.degenerada,
        "signature": list(resumen.signatura) if resumen.signatura else None,
        "expected_signature": list(resumen.signatura_esperada) if resumen.signatura_esperada else None,
        "det": resumen.det,
        "group": list(resumen.grupo),
        "length": resumen.longitud,
        "unique_u_plus_l": resumen.unicidad_u_mas_l,
    }


def informe_a_dict(informe: InformeEspejo) -> dict:
    return {
        "seed": informe.semilla,
        "specializations": informe.especializaciones,
        "verdicts": [veredicto_a_dict(v) for v in informe.veredictos],
        "lattice_only": [resumen_a_dict(r) for r in informe.resumenes],
        "cancelled": informe.cancelado,
        "overall": informe.overall,
    }


def error_a_dict(etapa: str, tipo: str, mensaje: str) -> dict:
    return {"error": {"stage": etapa, "type": tipo, "message": mensaje}}


def politopo_a_dict(k: int) -> dict:
    """Hechos de la tabla de politopos para P_k."""
    p = politopo(k)
    dual = polar_dual(p)
    red = red_L(k)
    det = determinant(red)
    return {
        "k": k,
        "vertices": p.num_vertices,
        "facets": len(facets(p)),
        "lattice_points": len(lattice_points(p)),
        "fano": is_fano(p),
        "reflexive": is_reflexive(p),
        "polar_involution": polar_dual(dual).conjunto() == p.conjunto(),
        "det_L": det,
        "signature_L": list(signature(red)) if det != 0 else None,
    }


def ecuacion_a_dict(k: int) -> dict:
    """Ecuación normalizada de P_k; sin tabla publicada (k < 6) `published` y `matches` son None."""
    ecuacion = anticanonical_equation(politopo(k))
    if k not in catalogo.TERMINOS_ECUACION:
        return {
            "k": k,
            "equation": texto_ecuacion(ecuacion),
            "published": None,
            "matches": None,
            "divided_by": list(monomio_despeje(ecuacion)),
        }
    comparacion = comparar_con_tabla(ecuacion, k)
    return {
        "k": k,
        "equation": comparacion.texto,
        "published": texto_tabla(k),
        "matches": comparacion.coincide,
        "divided_by": list(comparacion.monomio_despeje),
    }


def fibracion_a_dict(analisis: AnalisisFibracion, semilla: int, especializaciones: int,
                     mapa: Optional[dict[str, str]] = None) -> dict:
    k = analisis.k
    datos: dict[str, Any] = {
        "k": k,
        "seed": semilla,
        "specializations": especializaciones,
        "lambda_used": [[_texto(l) for l in lambdas] for lambdas in analisis.lambdas],
        "fibers": _fibras_a_lista(analisis.configuracion.fibras),
        "fiber_types": multiconjunto_fibras(analisis.configuracion.fibras),
        "published_fiber_types": multiconjunto_publicado(k),
        "fibers_match": analisis.coincide_con_tabla,
        "sections": dict(analisis.secciones),
        "incidence": {nombre: {analisis.configuracion.fibras[i].descripcion(): c for i, c in inc.items()}
                      for nombre, inc in analisis.configuracion.incidencias.items() if nombre != "O"},
    }
    if analisis.torsion_o_prima is not None:
        datos["o_prime_order"] = analisis.torsion_o_prima
    if mapa is not None:
        datos["birational_map"] = dict(mapa)
    return datos


def evidente_a_dict(analisis: AnalisisEvidente, semilla: int, especializaciones: int) -> dict:
    k = analisis.evidente.k
    fila = catalogo.EVIDENTES[k]
    evidente = analisis.evidente
    return {
        "k": k,
        "seed": semilla,
        "specializations": especializaciones,
        "generators": list(evidente.generadores),
        "rank": evidente.rango,
        "det": abs(evidente.det),
        "published_rank": fila.rango,
        "published_det": fila.det_abs,
        "group": list(analisis.forma_e.factores),
        "published_group": catalogo.GRUPOS_IMPRESOS[k],
        "q_beta": [_texto(q) for q in analisis.q_beta],
        "published_q_beta": [_texto(q) for q in catalogo.Q_BETAS[k]],
        "table_list_is_basis": evidente.lista_tabla_es_base,
        "assignment": dict(evidente.asignacion),
        "orientations": dict(evidente.orientaciones),
        "labelings": evidente.candidatos,
        "fingerprints_match": all(b is not None for b in analisis.betas),
    }


# ========================================
# TABLAS
# ========================================

@dataclass
class TablaReporte:
    """Tabla reproducida con marcas ✓/✗ por celda comparada."""
    clave: str
    titulo: str
    encabezados: list[str]
    filas: list[list[Any]] = field(default_factory=list)

    @property
    def coincide(self) -> bool:
        return not any(FALLA in str(celda) for fila in self.filas for celda in fila)


def _marca(obtenido: Any, esperado: Any) -> str:
    return f"{obtenido} {OK if obtenido == esperado else FALLA}"


def _bandera(valor: bool) -> str:
    return OK if valor else FALLA


def tabla_politopos() -> TablaReporte:
    tabla = TablaReporte("politopos", "Politopos de Fano y redes L_k",
                         ["k", "ℓ_k", "Fano", "Reflexivo", "P°° = P", "Signatura L_k", "det L_k"])
    for k in catalogo.RANGO_K:
        datos = politopo_a_dict(k)
        ell = datos["vertices"]
        firma = tuple(datos["signature_L"]) if datos["signature_L"] else "degenerada"
        det = datos["det_L"]
        celda_det = _marca(abs(det), catalogo.EVIDENTES[k].det_abs) if k in catalogo.EVIDENTES else str(det)
        tabla.filas.append([
            k, ell,
            _bandera(datos["fano"]), _bandera(datos["reflexive"]), _bandera(datos["polar_involution"]),
            _marca(firma, (1, ell - 4)) if k in catalogo.RANGO_FIBRADO else str(firma),
            celda_det,
        ])
    return tabla


def tabla_ecuaciones() -> TablaReporte:
    tabla = TablaReporte("ecuaciones", "Ecuaciones de las superficies", ["k", "Ecuación", "Coincide"])
    for k in catalogo.RANGO_FIBRADO:
        datos = ecuacion_a_dict(k)
        tabla.filas.append([k, datos["equation"], _bandera(datos["matches"])])
    return tabla


def _texto_multiconjunto(conteo: dict[str, int]) -> str:
    return ", ".join(f"{n} {t}" if n > 1 else t for t, n in sorted(conteo.items()))


def tabla_fibras(veredictos: Sequence[MirrorVerdict]) -> TablaReporte:
    tabla = TablaReporte("fibras", "Fibras singulares y secciones",
                         ["k", "Fibras", "Coinciden", "Secciones"])
    for v in veredictos:
        if v.error is not None:
            tabla.filas.append([v.k, f"error en '{v.error['stage']}'", FALLA, ""])
            continue
        obtenido = multiconjunto_fibras(v.fibras)
        secciones = ", ".join(f"{n} {_bandera(ok)}" for n, ok in v.secciones.items())
        tabla.filas.append([v.k, _texto_multiconjunto(obtenido),
                            _bandera(obtenido == multiconjunto_publicado(v.k)), secciones])
    return tabla


def tabla_evidentes(veredictos: Sequence[MirrorVerdict]) -> TablaReporte:
    tabla = TablaReporte("evidentes", "Redes evidentes E_k", ["k", "Generadores", "Rango", "|det|"])
    for v in veredictos:
        fila = catalogo.EVIDENTES[v.k]
        if v.error is not None:
            tabla.filas.append([v.k, "", FALLA, FALLA])
            continue
        generadores = ", ".join(v.evidente.generadores)
        tabla.filas.append([v.k, generadores, _marca(v.evidente.rango, fila.rango),
                            _marca(abs(v.evidente.det), fila.det_abs)])
    return tabla


def tabla_grupos(veredictos: Sequence[MirrorVerdict]) -> TablaReporte:
    tabla = TablaReporte("grupos", "Grupos discriminantes", ["k", "A_{L_k}", "A_{E_k}", "Publicado"])
    for v in veredictos:
        if v.error is not None:
            tabla.filas.append([v.k, "", FALLA, catalogo.GRUPOS_IMPRESOS[v.k]])
            continue
        esperado = catalogo.GRUPOS[v.k]
        tabla.filas.append([
            v.k,
            f"{v.forma_l.descripcion()} {_bandera(v.forma_l.factores == esperado)}",
            f"{v.forma_e.descripcion()} {_bandera(v.forma_e.factores == esperado)}",
            catalogo.GRUPOS_IMPRESOS[v.k],
        ])
    return tabla


def tabla_alfas() -> TablaReporte:
    tabla = TablaReporte("alfas", "Valores q_{L_k}(α)", ["k", "α", "q(α)", "Publicado"])
    for k in catalogo.RANGO_FIBRADO:
        red = red_L(k)
        for alfa, publicado in catalogo.ALFAS[k]:
            q = q_en_dual(red, alfa)
            coincide = (q - publicado) % 2 == 0
            tabla.filas.append([k, "(" + ", ".join(_texto(c) for c in alfa) + ")",
                                f"{_texto(q)} {_bandera(coincide)}", _texto(publicado)])
    return tabla


def tabla_betas(veredictos: Sequence[MirrorVerdict]) -> TablaReporte:
    tabla = TablaReporte("betas", "Valores q_{E_k}(β)", ["k", "q(β)", "Publicado", "q(α) + q(β) ≡ 0"])
    for v in veredictos:
        publicados = catalogo.Q_BETAS[v.k]
        obtenidos = [] if v.error is not None else v.q_beta
        for i, (alfa, q_beta) in enumerate(zip(catalogo.ALFAS[v.k], publicados)):
            obtenido = obtenidos[i] if i < len(obtenidos) else None
            if obtenido is None:
                tabla.filas.append([v.k, FALLA, _texto(q_beta), FALLA])
                continue
            suma = (alfa[1] + obtenido) % 2 == 0
            tabla.filas.append([v.k, f"{_texto(obtenido)} {_bandera((obtenido - q_beta) % 2 == 0)}",
                                _texto(q_beta), _bandera(suma)])
    return tabla


def construir_tablas(informe: InformeEspejo) -> list[TablaReporte]:
    """Las siete tablas, en orden; las que dependen de E_k usan los veredictos del informe."""
    veredictos = informe.veredictos
    return [
        tabla_politopos(),
        tabla_ecuaciones(),
        tabla_fibras(veredictos),
        tabla_evidentes(veredictos),
        tabla_grupos(veredictos),
        tabla_alfas(),
        tabla_betas(veredictos),
    ]


def tabla_a_markdown(tabla: TablaReporte) -> str:
    lineas = [f"## {tabla.titulo}", "",
              "| " + " | ".join(tabla.encabezados) + " |",
              "|" + "|".join("---" for _ in tabla.encabezados) + "|"]
    for fila in tabla.filas:
        lineas.append("| " + " | ".join(str(celda) for celda in fila) + " |")
    return "\n".join(lineas) + "\n"


def emit_tables(informe: InformeEspejo, formato: str = "markdown") -> str:
    """
    Reproducción de las tablas en Markdown o JSON.

    Raises:
        ValueError: Formato desconocido
    """
    tablas = construir_tablas(informe)
    if formato == "markdown":
        return "\n".join(tabla_a_markdown(t) for t in tablas)
    if formato == "json":
        return a_json({
            "seed": informe.semilla,
            "specializations": informe.especializaciones,
            "tables": [{"key": t.clave, "title": t.titulo, "headers": t.encabezados,
                        "rows": [[str(c) for c in fila] for fila in t.filas],
                        "matches": t.coincide} for t in tablas],
        })
    raise ValueError(f"Formato desconocido: {formato}")


# ========================================
# EXPORTACIÓN A EXCEL
# ========================================

def exportar_xlsx(tablas: Sequence[TablaReporte], ruta: str | Path) -> Path:
    """Una hoja por tabla, con encabezado en color y formato de tabla de Excel."""
    wb = Workbook()
    wb.remove(wb.active)

    for indice, tabla in enumerate(tablas, start=1):
        ws = wb.create_sheet(title=tabla.clave)
        ws.append(tabla.encabezados)

        for col in range(1, len(tabla.encabezados) + 1):
            cell = ws.cell(row=1, column=col)
            cell.font = Font(bold=True, size=11, color="FFFFFF")
            cell.fill = PatternFill(start_color=COLOR_ENCABEZADO, end_color=COLOR_ENCABEZADO, fill_type="solid")
            cell.alignment = Alignment(horizontal="center", vertical="center")

        for fila in tabla.filas:
            ws.append([celda if isinstance(celda, (int, str)) else str(celda) for celda in fila])

        if tabla.filas:
            ultima_columna = ws.cell(row=1, column=len(tabla.encabezados)).column_letter
            referencia = f"A1:{ultima_columna}{len(tabla.filas) + 1}"
            excel = Table(displayName=f"Tabla{indice}", ref=referencia)
            excel.tableStyleInfo = TableStyleInfo(
                name="TableStyleMedium2",
                showFirstColumn=False,
                showLastColumn=False,
                showRowStripes=True,
                showColumnStripes=False
            )
            ws.add_table(excel)

        for col in ws.columns:
            largo = max((len(str(cell.value)) for cell in col if cell.value is not None), default=0)
            ws.column_dimensions[col[0].column_letter].width = min(largo + 2, ANCHO_MAXIMO)

    ruta = Path(ruta)
    ruta.parent.mkdir(parents=True, exist_ok=True)
    wb.save(str(ruta))
    logger.info(f"Libro Excel guardado en {ruta}")
    return ruta


# ========================================
# MARKDOWN DE LOS SUBCOMANDOS
# ========================================

def informe_a_markdown(informe: InformeEspejo) -> str:
    lineas = [f"# Verificación espejo (semilla {informe.semilla}, "
              f"{informe.especializaciones} especializaciones)", ""]
    if informe.veredictos:
        lineas += ["| k | " + " | ".join(CHEQUEOS) + " | Global |",
                   "|" + "|".join("---" for _ in range(len(CHEQUEOS) + 2)) + "|"]
        for v in informe.veredictos:
            if v.error is not None:
                celdas = [f"error en '{v.error['stage']}'"] + [""] * (len(CHEQUEOS) - 1)
            else:
                celdas = [_bandera(v.checks[nombre]) for nombre in CHEQUEOS]
            lineas.append(f"| {v.k} | " + " | ".join(celdas) + f" | {_bandera(v.overall)} |")
        lineas.append("")
    if informe.resumenes:
        lineas += ["| k | Rango | det | Grupo | Unicidad U ⊕ L_k |", "|---|---|---|---|---|"]
        for r in informe.resumenes:
            grupo = " + ".join(f"Z{d}" for d in r.grupo) or ("degenerado" if r.degenerada else "0")
            unicidad = "" if r.unicidad_u_mas_l is None else _bandera(r.unicidad_u_mas_l)
            lineas.append(f"| {r.k} | {r.rango} | {r.det} | {grupo} | {unicidad} |")
        lineas.append("")
    return "\n".join(lineas)


def dict_a_markdown(titulo: str, datos: dict) -> str:
    """Lista de clave: valor para los informes de un solo k."""
    lineas = [f"# {titulo}", ""]
    for clave, valor in datos.items():
        if isinstance(valor, dict):
            lineas.append(f"- **{clave}**:")
            lineas.extend(f"  - {k}: {v}" for k, v in valor.items())
        elif isinstance(valor, list) and valor and isinstance(valor[0], dict):
            lineas.append(f"- **{clave}**: " + ", ".join(" @ ".join(str(x) for x in reversed(list(d.values())))
                                                         for d in valor))
        else:
            lineas.append(f"- **{clave}**: {valor}")
    return "\n".join(lineas) + "\n"
