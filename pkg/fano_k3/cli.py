"""
Interfaz de línea de comandos.

Subcomandos: polytopes, equation, fibration, evident, mirror y tables.
Código de salida 0 si todos los chequeos ejecutados pasan, 1 si alguno
falla y 2 ante argumentos inválidos.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from config.config_manager import ConfigManager
from fano_k3 import __version__, catalogo
from fano_k3.adaptador_consola import AdaptadorConsola
from fano_k3.elliptic import birational_map
from fano_k3.errores import EtapaFallidaError, FanoK3Error
from fano_k3.mirror import (
    InformeEspejo,
    VerificadorEspejo,
    analizar_evidente,
    analizar_fibracion,
)
from fano_k3.reporte import (
    a_json,
    construir_tablas,
    dict_a_markdown,
    ecuacion_a_dict,
    emit_tables,
    error_a_dict,
    evidente_a_dict,
    exportar_xlsx,
    fibracion_a_dict,
    informe_a_dict,
    informe_a_markdown,
    politopo_a_dict,
    tabla_a_markdown,
    tabla_politopos,
)


logger = logging.getLogger(__name__)

SALIDA_OK, SALIDA_FALLA, SALIDA_ARGUMENTOS = 0, 1, 2
VARIABLE_SEMILLA = "FANO_K3_SEED"
MAXIMO_SEMILLA = 2 ** 64


class ErrorArgumentos(Exception):
    """Argumento válido para argparse pero fuera de dominio."""


@dataclass
class CliConfig:
    """Parámetros resueltos de una invocación (argumentos > entorno > config.json)."""
    subcomando: str
    ks: list[int]
    semilla: int
    especializaciones: int
    formato: str
    salida: Optional[Path] = None
    xlsx: Optional[Path] = None
    carpeta_log: Optional[str] = None
    intentos_maximos: int = 20
    cota_orden: int = 10000
    hilos: int = 4
    detallado: bool = False
    silencioso: bool = False


# ========================================
# PARSER
# ========================================

def _entero_no_negativo(texto: str) -> int:
    valor = int(texto)
    if valor < 0:
        raise argparse.ArgumentTypeError("debe ser no negativo")
    return valor


def construir_parser() -> argparse.ArgumentParser:
    comunes = argparse.ArgumentParser(add_help=False)
    comunes.add_argument("--seed", type=_entero_no_negativo, default=None,
                         help=f"Semilla de las especializaciones (también {VARIABLE_SEMILLA})")
    comunes.add_argument("--specializations", type=int, default=None,
                         help="Número de especializaciones genéricas de λ")
    comunes.add_argument("--format", choices=("json", "markdown"), default=None, dest="formato")
    comunes.add_argument("--out", type=Path, default=None, help="Archivo de salida (stdout por defecto)")
    comunes.add_argument("--xlsx", type=Path, default=None, help="Exportar las tablas a un libro Excel")
    comunes.add_argument("--log-dir", default=None, help="Carpeta para el log de la verificación")
    comunes.add_argument("--threads", type=int, default=None, help="Hilos para la verificación por k")
    comunes.add_argument("-v", "--verbose", action="store_true", help="Mostrar mensajes de depuración")
    comunes.add_argument("-q", "--quiet", action="store_true", help="No escribir progreso en stderr")

    parser = argparse.ArgumentParser(
        prog="fano_k3",
        description="Verificación exacta de datos espejo de superficies K3 de politopos de Fano",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcomando", required=True)

    p = sub.add_parser("polytopes", parents=[comunes], help="Fano, reflexividad y det L_k")
    p.add_argument("--k", type=int, action="append", dest="ks")

    for nombre, ayuda in (("equation", "Ecuación de la superficie"),
                          ("fibration", "Fibras singulares y secciones"),
                          ("evident", "Huellas del retículo evidente")):
        p = sub.add_parser(nombre, parents=[comunes], help=ayuda)
        p.add_argument("k", type=int)

    p = sub.add_parser("mirror", parents=[comunes], help="Veredictos de simetría espejo")
    grupo = p.add_mutually_exclusive_group()
    grupo.add_argument("--all", action="store_true", dest="todos")
    grupo.add_argument("--k", type=int, action="append", dest="ks")

    sub.add_parser("tables", parents=[comunes], help="Reproducción de las tablas")
    return parser


# ========================================
# RESOLUCIÓN DE PARÁMETROS
# ========================================

def resolver_semilla(argumento: Optional[int], entorno=None, config: Optional[ConfigManager] = None) -> int:
    """--seed, luego FANO_K3_SEED, luego calculo.semilla."""
    if argumento is not None:
        semilla = argumento
    else:
        entorno = os.environ if entorno is None else entorno
        texto = entorno.get(VARIABLE_SEMILLA)
        if texto is not None and texto.strip():
            try:
                semilla = int(texto)
            except ValueError:
                raise ErrorArgumentos(f"{VARIABLE_SEMILLA} no es un entero: {texto!r}")
        else:
            semilla = (config or ConfigManager()).get_semilla()
    if not 0 <= semilla < MAXIMO_SEMILLA:
        raise ErrorArgumentos(f"La semilla debe ser un entero de 64 bits sin signo: {semilla}")
    return semilla


def resolver_config(args: argparse.Namespace, config: ConfigManager, entorno=None) -> CliConfig:
    subcomando = args.subcomando
    if subcomando == "equation":
        ks = [args.k]
        rango = catalogo.RANGO_K
    elif subcomando in ("fibration", "evident"):
        ks = [args.k]
        rango = catalogo.RANGO_FIBRADO
    elif subcomando == "tables" or (subcomando == "mirror" and (args.todos or not args.ks)):
        ks = list(catalogo.RANGO_K)
        rango = catalogo.RANGO_K
    else:
        ks = sorted(set(args.ks or catalogo.RANGO_K))
        rango = catalogo.RANGO_K
    fuera = [k for k in ks if k not in rango]
    if fuera:
        raise ErrorArgumentos(f"k fuera de rango {rango.start}..{rango.stop - 1}: {fuera}")

    especializaciones = (args.specializations if args.specializations is not None
                         else config.get("calculo.especializaciones", 3))
    if especializaciones < 1:
        raise ErrorArgumentos("--specializations debe ser al menos 1")
    hilos = args.threads if args.threads is not None else config.get("calculo.hilos", 4)
    if hilos < 1:
        raise ErrorArgumentos("--threads debe ser al menos 1")

    return CliConfig(
        subcomando=subcomando,
        ks=ks,
        semilla=resolver_semilla(args.seed, entorno, config),
        especializaciones=especializaciones,
        formato=args.formato or config.get("salida.formato", "json"),
        salida=args.out,
        xlsx=args.xlsx,
        carpeta_log=args.log_dir or config.get("logging.carpeta"),
        intentos_maximos=max(config.get("calculo.intentos_maximos", 20), 4 * especializaciones),
        cota_orden=config.get("calculo.cota_orden_formas", 10000),
        hilos=hilos,
        detallado=args.verbose,
        silencioso=args.quiet,
    )


# ========================================
# SUBCOMANDOS
# ========================================

def _escribir(texto: str, cfg: CliConfig):
    if cfg.salida is None:
        sys.stdout.write(texto)
        sys.stdout.flush()
        return
    cfg.salida.parent.mkdir(parents=True, exist_ok=True)
    cfg.salida.write_text(texto, encoding="utf-8")


def _emitir(datos: dict, titulo: str, cfg: CliConfig):
    _escribir(a_json(datos) if cfg.formato == "json" else dict_a_markdown(titulo, datos), cfg)


def _cmd_polytopes(cfg: CliConfig) -> int:
    filas = [politopo_a_dict(k) for k in cfg.ks]
    if cfg.formato == "json":
        _escribir(a_json({"polytopes": filas}), cfg)
    else:
        tabla = tabla_politopos()
        tabla.filas = [f for f in tabla.filas if f[0] in cfg.ks]
        _escribir(tabla_a_markdown(tabla), cfg)
    if cfg.xlsx:
        exportar_xlsx([tabla_politopos()], cfg.xlsx)
    ok = all(f["fano"] and f["reflexive"] and f["polar_involution"] for f in filas)
    return SALIDA_OK if ok else SALIDA_FALLA


def _cmd_equation(cfg: CliConfig) -> int:
    datos = ecuacion_a_dict(cfg.ks[0])
    if cfg.formato == "json":
        _escribir(a_json(datos), cfg)
    else:
        _escribir(datos["equation"] + "\n", cfg)
    return SALIDA_FALLA if datos["matches"] is False else SALIDA_OK


def _cmd_fibration(cfg: CliConfig) -> int:
    k = cfg.ks[0]
    analisis = analizar_fibracion(k, cfg.semilla, cfg.especializaciones, cfg.intentos_maximos)
    datos = fibracion_a_dict(analisis, cfg.semilla, cfg.especializaciones, birational_map(k))
    _emitir(datos, f"Fibración de k={k}", cfg)
    ok = datos["fibers_match"] and all(datos["sections"].values())
    return SALIDA_OK if ok else SALIDA_FALLA


def _cmd_evident(cfg: CliConfig) -> int:
    k = cfg.ks[0]
    analisis = analizar_evidente(k, cfg.semilla, cfg.especializaciones, cfg.intentos_maximos, cfg.cota_orden)
    datos = evidente_a_dict(analisis, cfg.semilla, cfg.especializaciones)
    _emitir(datos, f"Retículo evidente de k={k}", cfg)
    ok = (datos["fingerprints_match"] and datos["rank"] == datos["published_rank"]
          and datos["det"] == datos["published_det"])
    return SALIDA_OK if ok else SALIDA_FALLA


def _verificar(cfg: CliConfig, ks: Sequence[int]) -> InformeEspejo:
    consola = AdaptadorConsola(detallado=cfg.detallado, silencioso=cfg.silencioso)
    verificador = VerificadorEspejo(hilos=cfg.hilos, **consola.callbacks())
    try:
        resultado = verificador.ejecutar(list(ks), cfg.semilla, cfg.especializaciones,
                                         cfg.intentos_maximos, cfg.cota_orden, cfg.carpeta_log)
    except KeyboardInterrupt:
        verificador.cancelar()
        resultado = verificador.reporte_parcial()
    return resultado["informe"]


def _cmd_mirror(cfg: CliConfig) -> int:
    informe = _verificar(cfg, cfg.ks)
    if cfg.formato == "json":
        _escribir(a_json(informe_a_dict(informe)), cfg)
    else:
        _escribir(informe_a_markdown(informe), cfg)
    if cfg.xlsx:
        exportar_xlsx(construir_tablas(informe), cfg.xlsx)
    return SALIDA_OK if informe.overall else SALIDA_FALLA


def _cmd_tables(cfg: CliConfig) -> int:
    informe = _verificar(cfg, catalogo.RANGO_FIBRADO)
    _escribir(emit_tables(informe, cfg.formato), cfg)
    tablas = construir_tablas(informe)
    if cfg.xlsx:
        exportar_xlsx(tablas, cfg.xlsx)
    ok = informe.overall and all(t.coincide for t in tablas)
    return SALIDA_OK if ok else SALIDA_FALLA


COMANDOS = {
    "polytopes": _cmd_polytopes,
    "equation": _cmd_equation,
    "fibration": _cmd_fibration,
    "evident": _cmd_evident,
    "mirror": _cmd_mirror,
    "tables": _cmd_tables,
}


# ========================================
# PUNTO DE ENTRADA
# ========================================

def _reportar_error(etapa: str, error: BaseException, formato: str) -> None:
    if formato == "json":
        sys.stdout.write(a_json(error_a_dict(etapa, type(error).__name__, str(error))))
    else:
        print(f"❌ [{etapa}] {type(error).__name__}: {error}", file=sys.stderr)


def run(argv: Optional[Sequence[str]] = None, config: Optional[ConfigManager] = None) -> int:
    """Ejecuta la CLI y devuelve el código de salida."""
    parser = construir_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return SALIDA_OK if e.code in (0, None) else SALIDA_ARGUMENTOS

    config = config or ConfigManager()
    formato = args.formato or config.get("salida.formato", "json")
    try:
        cfg = resolver_config(args, config)
    except ErrorArgumentos as e:
        _reportar_error("argumentos", e, formato)
        return SALIDA_ARGUMENTOS

    logging.basicConfig(level=logging.DEBUG if cfg.detallado else logging.WARNING,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        return COMANDOS[cfg.subcomando](cfg)
    except EtapaFallidaError as e:
        _reportar_error(e.etapa, e.causa, cfg.formato)
        return SALIDA_FALLA
    except FanoK3Error as e:
        _reportar_error(cfg.subcomando, e, cfg.formato)
        return SALIDA_FALLA
    except ValueError as e:
        _reportar_error("argumentos", e, cfg.formato)
        return SALIDA_ARGUMENTOS


def main() -> None:
    sys.exit(run())
