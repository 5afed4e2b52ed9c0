#!/usr/bin/env python3
"""
Tests for the command-line interface: output contract, exit codes, config and recording
"""

import io
import json
import sys
from pathlib import Path

import pytest

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from algebra.poly_parser import parse_poly
from config.settings import CONFIG_ENV_VAR
import ui.cli as cli
from ui.cli import EXIT_INCONCLUSIVE, EXIT_INTERNAL, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, main


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
    monkeypatch.setenv('DB_PATH', str(tmp_path / "results.db"))


def run(*argv):
    stream = io.StringIO()
    code = main(list(argv), stdout=stream)
    return code, stream.getvalue()


def run_json(*argv):
    code, text = run('--json', *argv)
    return code, [json.loads(line) for line in text.splitlines()]


# Worked examples

def test_member():
    assert run('member', '--m', '3', '--alphas', '0,1', 'x^3*y + x') == (EXIT_OK, "true\n")


def test_member_false_shows_witness():
    code, text = run('member', '--m', '3', '--alphas', '0,1', 'x')
    assert code == EXIT_OK
    assert text == "false\nwitness: x^-1\n"


def test_dg_index():
    assert run('dg-index') == (EXIT_OK, "3\n")
    assert run('surface', 'dg-index') == (EXIT_OK, "3\n")


def test_jacobian():
    assert run('jacobian', 'y', 'x*y') == (EXIT_OK, "-y\nconstant_nonzero=false\n")
    assert run('jacobian', 'x + y^2', 'y') == (EXIT_OK, "1\nconstant_nonzero=true\n")


def test_express():
    assert run('express', '--bound', '2', 'y^2') == (EXIT_OK, "T0^2\n")
    assert run('express', '--m', '3', '--alphas', '0,1', '--bound', '2', 'x^4*y^2 + x^2*y') == (EXIT_OK, "T1*T3\n")


def test_express_not_found_is_inconclusive():
    assert run('express', 'x') == (EXIT_INCONCLUSIVE, "NotFound\n")


def test_decompose():
    assert run('decompose', '--wx', '-1', '--wy', '2', 'x + y') == (EXIT_OK, "-1: x\n2: y\n")


def test_factor_neg():
    code, text = run('factor-neg', '--alpha', '1', 'x^3*y + x')
    assert code == EXIT_OK
    assert text == "m = 1\ng = 1\n"


@pytest.mark.parametrize("poly, error", [("x", "NotInAlgebra"), ("x + y", "NotHomogeneousNegative")])
def test_factor_neg_preconditions(poly, error):
    code, text = run('factor-neg', '--alpha', '1', poly)
    assert code == EXIT_PRECONDITION
    assert text.startswith(f"{error}: ")


def test_regularize():
    code, text = run('regularize', 'x*y')
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "map: (-1, -1, -1, 1)"
    assert lines[-1] == "result: -w^2 + v^2"


def test_cert():
    code, text = run('cert', '--h', 'x', '--p', 'x^2', '--q', 'x^3', '--dmax', '3', '--cmax', '2')
    assert code == EXIT_OK
    assert text.splitlines() == ["d = 2", "a1 = 0", "a2 = -P", "relation: h^2 + (-P) = 0"]


def test_cert_none_found():
    code, text = run('cert', '--h', 'y', '--p', 'x', '--q', 'x^2', '--dmax', '3', '--cmax', '3')
    assert code == EXIT_INCONCLUSIVE
    assert text.startswith("NoneFound")


def test_surface_commands():
    assert run('surface', 'intersect', '--n', '2', '--a1', '1', '--b1', '0', '--a2', '1', '--b2', '0') == (EXIT_OK, "-2\n")
    assert run('surface', 'canonical', '--n', '1') == (EXIT_OK, "-2*C0 - 3*F\n")
    assert run('surface', 'section', '--n', '1', '--s2', '3') == (EXIT_OK, "C0 + 2*F\n")
    assert run('surface', 'restrict', '--n', '1', '--s2', '3', '--a', '-2', '--b', '-3') == (EXIT_OK, "1\n")
    assert run('surface', 'canonical-via-section', '--n', '1', '--s2', '3') == (EXIT_OK, "-2*C0 - 3*F\n")
    assert run('surface', 'generators', '--n', '1', '--s2', '3') == (EXIT_OK, "4\n")
    assert run('surface', 'ramify', '--n', '1', '--ra', '2', '--rb', '1') == (EXIT_OK, "2*C0 + F\n")


def test_invalid_section_is_a_precondition():
    code, text = run('surface', 'section', '--n', '1', '--s2', '2')
    assert code == EXIT_PRECONDITION
    assert text.startswith("InvalidSection: ")


def test_verify_lemma():
    code, text = run('verify-lemma', '--alpha', '1', '--max-degree', '3')
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "verdict: none found"


def test_lemma_check():
    code, text = run('lemma-check', '--alpha', '1', 'x^3*y + x')
    assert code == EXIT_OK
    assert "violation: false" in text.splitlines()


# Exit codes for bad input

@pytest.mark.parametrize("argv", [
    ('frobnicate',),
    ('member',),
    ('member', 'x +'),
    ('surface', 'intersect', '--n', '1'),
    ('search', '--workers', 'many'),
])
def test_usage_errors(argv):
    code, _ = run(*argv)
    assert code == EXIT_USAGE


def test_parse_error_names_the_error():
    code, text = run('jacobian', 'x', 'y^-1')
    assert code == EXIT_USAGE
    assert text.startswith("PolyParseError: ")


def test_invalid_algebra_is_a_precondition():
    code, text = run('member', '--m', '3', '--alphas', '0', 'x')
    assert code == EXIT_PRECONDITION
    assert text.startswith("InvalidAlgebra: ")


def test_help_exits_cleanly():
    assert main(['--help'], stdout=io.StringIO()) == EXIT_OK


def test_negative_values_are_not_options():
    code, text = run('verify-lemma', '--alpha', '-2/3', '--max-degree', '2')
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "verdict: none found"
    code, text = run('express', '--m', '2', '--alphas', '-1', '--bound', '1', 'x^2*y - x')
    assert (code, text) == (EXIT_OK, "T2\n")
    code, text = run('search', '--m', '2', '--alphas', '1', '--bound', '1', '--coeffs', '-1,0,1')
    assert code == EXIT_OK
    assert "expressions: 27" in text.splitlines()


def test_large_intersection_numbers_are_exact():
    code, text = run('surface', 'intersect', '--n', '0', '--a1', str(10 ** 20), '--b1', '0',
                     '--a2', '0', '--b2', str(10 ** 20))
    assert (code, text) == (EXIT_OK, f"{10 ** 40}\n")


def test_search_beyond_int64_is_a_precondition():
    code, text = run('search', '--m', '2', '--alphas', str(2 * 10 ** 6), '--bound', '2', '--coeffs', '0,1')
    assert code == EXIT_PRECONDITION
    assert text.startswith("InvalidSearchSpace: ")


def test_unexpected_errors_have_their_own_exit_code(monkeypatch):
    def broken(args, config, out):
        raise RuntimeError("table corrupted")

    monkeypatch.setitem(cli.COMMANDS, 'dg-index', broken)
    code, text = run('dg-index')
    assert code == EXIT_INTERNAL
    assert code not in (EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_PRECONDITION)
    assert text.startswith("InternalError: RuntimeError: table corrupted")


# JSON output

def test_json_output_re_parses():
    code, records = run_json('jacobian', 'y', 'x*y')
    assert code == EXIT_OK
    assert records == [{'jacobian': '-y', 'constant_nonzero': False}]
    assert parse_poly(records[0]['jacobian']) == parse_poly("-y")


def test_json_flag_after_subcommand():
    code, text = run('member', 'x^3*y + x', '--json')
    record = json.loads(text)
    assert code == EXIT_OK
    assert record['member'] is True
    assert parse_poly(record['chart']) == parse_poly("y")


def test_json_errors():
    code, records = run_json('factor-neg', 'x')
    assert code == EXIT_PRECONDITION
    assert records[0]['error'] == 'NotInAlgebra'


def test_json_components_re_parse():
    code, records = run_json('decompose', 'x^3*y + x + y^2')
    components = records[0]['components']
    assert code == EXIT_OK
    assert parse_poly(components['-1']) == parse_poly("x^3*y + x")
    assert parse_poly(components['4']) == parse_poly("y^2")


# Search

SMALL_SEARCH = ('search', '--m', '2', '--alphas', '1', '--bound', '1', '--coeffs', '0,1')


def test_search_summary():
    code, text = run(*SMALL_SEARCH)
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "candidates: 0"
    assert "expressions: 8" in lines
    assert "completed: true" in lines
    assert not any("COUNTEREXAMPLE" in line for line in lines)


def test_search_output_is_deterministic():
    first = run(*SMALL_SEARCH, '--workers', '1')
    second = run(*SMALL_SEARCH, '--workers', '3', '--chunk-size', '1')
    assert first == second


def test_search_json_summary():
    code, records = run_json('search', '--bound', '1', '--coeffs', '-1,0,1')
    summary = records[-1]['summary']
    assert code == EXIT_OK
    assert summary['expressions'] == 81
    assert summary['members_checked'] == 81
    assert summary['violation_count'] == 0
    assert summary['counterexample'] is False


def test_search_checkpoint_and_resume(tmp_path):
    checkpoint = str(tmp_path / "cli.json")
    partial = run(*SMALL_SEARCH, '--checkpoint', checkpoint, '--chunk-size', '2', '--stop-after', '3')
    assert partial[0] == EXIT_INCONCLUSIVE
    assert "completed: false" in partial[1].splitlines()
    resumed = run(*SMALL_SEARCH, '--resume', checkpoint)
    assert resumed == run(*SMALL_SEARCH)


def test_search_resume_with_other_space(tmp_path):
    checkpoint = str(tmp_path / "cli.json")
    run(*SMALL_SEARCH, '--checkpoint', checkpoint)
    code, text = run('search', '--m', '2', '--alphas', '1', '--bound', '1', '--coeffs', '-1,0,1', '--resume', checkpoint)
    assert code == EXIT_USAGE
    assert text.startswith("CheckpointError: ")


# Configuration and recording

def test_config_file_supplies_defaults(tmp_path):
    config = tmp_path / "toolkit.conf"
    config.write_text("# small space\nm = 2\nalphas = 1\nt_degree_bound = 1\ncoefficients = 0,1\n", encoding='utf-8')
    assert run('search', '--config', str(config)) == run(*SMALL_SEARCH)


def test_config_from_environment(tmp_path, monkeypatch):
    config = tmp_path / "toolkit.conf"
    config.write_text("output = json\n", encoding='utf-8')
    monkeypatch.setenv(CONFIG_ENV_VAR, str(config))
    code, text = run('dg-index')
    assert code == EXIT_OK
    assert json.loads(text)['index'] == 3


def test_bad_config_is_a_usage_error(tmp_path):
    config = tmp_path / "toolkit.conf"
    config.write_text("colour = blue\n", encoding='utf-8')
    code, text = run('dg-index', '--config', str(config))
    assert code == EXIT_USAGE
    assert text.startswith("ConfigError: ")


def test_record_and_history():
    run(*SMALL_SEARCH, '--record')
    run('cert', '--h', 'x', '--p', 'x^2', '--q', 'x^3', '--record')
    run('verify-lemma', '--max-degree', '2', '--record')
    code, text = run('history')
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "search runs: 1"
    assert "certificates: 1" in lines
    assert "lemma reports: 1" in lines
    code, records = run_json('history')
    assert records[0]['certificates'][0]['relation'] == "h^2 + (-P) = 0"
