#!/usr/bin/env python3
"""
secantcert - Main Entry Point

Certifies secant defectivity, tangential weak defectivity and generic
identifiability of Segre, Veronese, Segre-Veronese, Grassmann and
Gaussian-moment varieties with exact arithmetic, and prints JSON documents.
"""

import sys
import logging
import argparse
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from src.commands.analyze import cmd_analyze
from src.commands.certify import cmd_certify, contradiction_document
from src.commands.run_config import RunConfig
from src.commands.selftest import cmd_selftest
from src.commands.table import TABLES, cmd_table, tsv_rows
from src.export.report_writer import ReportWriter
from src.utils.config import ConfigManager
from src.utils.errors import CertError, ContradictionError
from src.utils.logging import setup_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DISAGREEMENT = 4


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Probe, field, output and logging options shared by every command."""
    probe_group = parser.add_argument_group('Probes')
    probe_group.add_argument(
        '--trials',
        type=int,
        metavar='T',
        help='Independent random trials per probe (default: from config, 3)'
    )
    probe_group.add_argument(
        '--seed',
        type=int,
        metavar='SEED',
        help='Base seed; overrides SECANTCERT_SEED (default: 0)'
    )
    probe_group.add_argument(
        '--max-entries',
        type=int,
        metavar='COUNT',
        help='Matrix entry cap per probe (default: 2^26)'
    )

    field_group = parser.add_argument_group('Field')
    field_group.add_argument(
        '--field-mode',
        choices=['prime', 'rational'],
        help='Arithmetic for ranks and kernels (default: prime)'
    )
    field_group.add_argument(
        '--modulus',
        type=int,
        metavar='P',
        help='Prime modulus between 2^31 and 2^63 (default: 2^61 - 1)'
    )

    config_group = parser.add_argument_group('Configuration')
    config_group.add_argument(
        '--config',
        type=str,
        metavar='FILE',
        help='Configuration file path (YAML or JSON)'
    )
    config_group.add_argument(
        '--knowledge-base',
        type=str,
        metavar='FILE',
        help='Knowledge-base JSON file (default: the shipped catalog)'
    )
    config_group.add_argument(
        '--output',
        type=str,
        metavar='FILE',
        help='Also write the JSON document to this file'
    )

    log_group = parser.add_argument_group('Logging')
    log_group.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
        help='Set logging level (default: from config, INFO)'
    )
    log_group.add_argument(
        '--log-file',
        type=str,
        metavar='FILE',
        help='Also log to this file'
    )


def setup_argument_parser() -> argparse.ArgumentParser:
    """Set up command line argument parser."""
    parser = argparse.ArgumentParser(
        description='secantcert - exact certificates for secant varieties and identifiability',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py analyze --spec segre:1,1,1 --h-max 2
  python main.py analyze --spec veronese:d=2,n=2 --h-max 2
  python main.py certify --spec segre:1,1,1,1,1 --mode hybrid
  python main.py certify --spec grass:k=1,n=4 --mode probe-only --h 2
  python main.py table binary-segre --max-k 7
  python main.py table gaussian --d 14..20
  python main.py selftest --trials 1 --seed 7

Exit codes: 0 ok, 1 selftest or report failure, 2 usage/parse/config,
3 capacity exceeded, 4 disagreement with a published bound or contradiction.
        """
    )
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    analyze = subparsers.add_parser('analyze', help='Secant dimensions and twd probes for one variety')
    analyze_group = analyze.add_argument_group('Variety')
    analyze_group.add_argument('--spec', type=str, required=True, metavar='SPEC',
                               help='Variety, e.g. segre:1,1,1 or sv:d=1,2;n=1,3')
    h_choice = analyze_group.add_mutually_exclusive_group()
    h_choice.add_argument('--h', type=int, metavar='H', help='Probe a single h')
    h_choice.add_argument('--h-max', type=int, metavar='H', help='Probe h = 1..H (default: 1)')
    _add_common_arguments(analyze)

    certify = subparsers.add_parser('certify', help='Certified identifiable range for one variety')
    certify_group = certify.add_argument_group('Variety')
    certify_group.add_argument('--spec', type=str, required=True, metavar='SPEC',
                               help='Variety, e.g. segre:1,1,1,1,1')
    certify_group.add_argument('--mode', choices=['probe-only', 'catalog-only', 'hybrid'],
                               default='hybrid', help='Fact sources (default: hybrid)')
    certify_group.add_argument('--h', type=int, metavar='H', help='Probe only h <= H')
    _add_common_arguments(certify)

    table = subparsers.add_parser('table', help='Published bounds over a parameter grid')
    table_group = table.add_argument_group('Table')
    table_group.add_argument('table', choices=sorted(TABLES), help='Which table')
    table_group.add_argument('--max-k', type=int, metavar='K', help='Largest number of factors')
    table_group.add_argument('--max', type=int, metavar='M', help='Largest dimension or degree')
    table_group.add_argument('--d', type=str, metavar='RANGE', help='Degree range, e.g. 14..20')
    table_group.add_argument('--mode', choices=['probe-only', 'catalog-only', 'hybrid'],
                             default='hybrid', help='Mode for certified rows (default: hybrid)')
    _add_common_arguments(table)

    selftest = subparsers.add_parser('selftest', help='Run the built-in oracle and fixture checks')
    _add_common_arguments(selftest)

    return parser


def emit(writer: ReportWriter, document: dict, output: str = None) -> None:
    """Print the validated document on stdout."""
    sys.stdout.write(writer.write(document, output))
    sys.stdout.flush()


def handle_analyze_command(run: RunConfig, config, writer: ReportWriter) -> int:
    """Handle analyze command."""
    emit(writer, cmd_analyze(run, config), run.output)
    return EXIT_OK


def handle_certify_command(run: RunConfig, config, writer: ReportWriter) -> int:
    """Handle certify command."""
    try:
        document = cmd_certify(run, config)
    except ContradictionError as e:
        logging.getLogger(__name__).error(f"Contradiction: {e}")
        emit(writer, contradiction_document(run, e), run.output)
        return EXIT_DISAGREEMENT
    emit(writer, document, run.output)
    if document['range']['agreement'] is False:
        print(f"DISAGREEMENT: certified h_ident_max {document['range']['h_ident_max']} is below "
              f"the published bound {document['range']['published_claim']}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    return EXIT_OK


def handle_table_command(run: RunConfig, config, writer: ReportWriter) -> int:
    """Handle table command."""
    document = cmd_table(run, config)
    emit(writer, document, run.output)
    path = writer.write_tsv(tsv_rows(document), run.table)
    if path:
        print(f"TSV summary: {path}", file=sys.stderr)
    return EXIT_OK


def handle_selftest_command(run: RunConfig, config, writer: ReportWriter) -> int:
    """Handle selftest command."""
    document = cmd_selftest(run, config)
    for check in document['checks']:
        mark = 'ok' if check['passed'] else 'FAIL'
        print(f"{mark:4} {check['name']}: {check['detail']}", file=sys.stderr)
    emit(writer, document, run.output)
    if not document['passed']:
        failed = [c['name'] for c in document['checks'] if not c['passed']]
        print(f"selftest failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


HANDLERS = {
    'analyze': handle_analyze_command,
    'certify': handle_certify_command,
    'table': handle_table_command,
    'selftest': handle_selftest_command,
}


def main(argv=None) -> int:
    """Main application entry point."""
    parser = setup_argument_parser()
    args = parser.parse_args(argv)

    # Load configuration
    try:
        config_manager = ConfigManager(args.config)
        config = config_manager.load_config()
    except ValueError as e:
        print(f"ERROR: Failed to load configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    # Set up logging
    setup_logging(
        level=args.log_level or config.log_level,
        log_file=args.log_file
    )

    logger = logging.getLogger(__name__)
    logger.info(f"Configuration loaded from: {config_manager.config_file or 'defaults'}")

    try:
        run = RunConfig.from_args(args, config)
        config = run.apply_to(config)
        writer = ReportWriter(config.output)
        return HANDLERS[run.command](run, config, writer)
    except CertError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid settings: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
