#!/usr/bin/env python3
"""
Configuration validation module to ensure config values are valid and usable.
"""
import copy
import logging
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

NUMBER = (int, float)

# Valid configuration schemas
CONFIG_SCHEMA = {
    'space': {
        'd': {'type': int, 'min': 2, 'max': 100001, 'required': True},
        'D': {'type': int, 'min': 1, 'max': 4096, 'required': True},
        'p': {'type': int, 'min': 1, 'max': 64, 'required': True},
        'n': {'type': int, 'min': 0, 'max': 8, 'required': False},
        'pvec_d': {'type': int, 'min': 1, 'max': 100000, 'required': False},
        'borel_d': {'type': int, 'min': 2, 'max': 100000, 'required': False},
        'cert_d': {'type': int, 'min': 2, 'max': 100000, 'required': False}
    },
    'kmap': {
        'kind': {'type': str, 'allowed': ['pointwise', 'bump'], 'required': False},
        'a': {'type': NUMBER, 'exclusive_min': 0.0, 'required': True},
        'b': {'type': NUMBER, 'exclusive_min': 0.0, 'required': True},
        'rho_in': {'type': NUMBER, 'exclusive_min': 0.0, 'required': True},
        'rho_out': {'type': NUMBER, 'exclusive_min': 0.0, 'required': True},
        'max_deriv_order': {'type': int, 'min': 1, 'max': 12, 'required': False}
    },
    'extension': {
        'eps': {'type': NUMBER, 'exclusive_min': 0.0, 'required': False}
    },
    'borel': {
        'J': {'type': int, 'min': 0, 'max': 8, 'required': True},
        'budget': {'type': NUMBER, 'exclusive_min': 0.0, 'required': True},
        'terms': {'type': int, 'min': 1, 'max': 64, 'required': False},
        'directions': {'type': int, 'min': 1, 'max': 1000, 'required': False},
        'jet': {'type': str, 'required': False}
    },
    'verify': {
        'seed': {'type': int, 'min': 0, 'required': False},
        'trials': {'type': int, 'min': 1, 'max': 1000000, 'required': False},
        'identity_trials': {'type': int, 'min': 1, 'max': 1000000, 'required': False},
        'base_step': {'type': NUMBER, 'exclusive_min': 0.0, 'max': 1.0, 'required': False},
        'levels': {'type': int, 'min': 1, 'max': 8, 'required': False}
    },
    'tolerances': {
        'jet': {'type': NUMBER, 'min': 0.0, 'required': False},
        'fd': {'type': NUMBER, 'min': 0.0, 'required': False},
        'agreement': {'type': NUMBER, 'min': 0.0, 'required': False},
        'sup': {'type': NUMBER, 'min': 0.0, 'required': False}
    },
    'c1_probe': {
        'D': {'type': int, 'min': 8, 'max': 4096, 'required': False},
        'frequencies': {'type': list, 'item_type': NUMBER, 'item_min': 0.0, 'required': False},
        'amplitude': {'type': NUMBER, 'exclusive_min': 0.0, 'required': False}
    },
    'suites': {
        'enabled': {'type': list, 'item_type': str, 'required': False},
        'settings': {'type': dict, 'required': False}
    },
    'output': {
        'path': {'type': str, 'required': False}
    }
}

# Valid suite names
VALID_SUITES = {
    'scalar', 'spaces', 'polynomials', 'kmaps', 'extension', 'borel', 'c1_probe'
}

DEFAULT_CONFIG = {
    "space": {"d": 65, "D": 64, "p": 4, "n": 1, "pvec_d": 16, "borel_d": 8, "cert_d": 64},
    "kmap": {"kind": "pointwise", "a": 1.0 / 3.0, "b": 0.5, "rho_in": 0.5, "rho_out": 1.0,
             "max_deriv_order": 6},
    "extension": {},
    "borel": {"J": 4, "budget": 1.0, "terms": 2, "directions": 20},
    "verify": {"seed": 0, "trials": 10000, "identity_trials": 1000, "base_step": 0.01, "levels": 4},
    "tolerances": {"jet": 1e-6, "fd": 1e-6, "agreement": 1e-12, "sup": 1e-12},
    "c1_probe": {"D": 128, "frequencies": [4, 8, 16, 32], "amplitude": 0.25},
    "suites": {"enabled": ["scalar", "spaces", "polynomials", "kmaps", "extension", "borel", "c1_probe"],
               "settings": {}},
    "output": {}
}

# Top-level keys named like the command-line flags and where they live
FLAT_KEYS = {
    'd': [('space', 'd')],
    'D': [('space', 'D')],
    'p': [('space', 'p')],
    'a': [('kmap', 'a')],
    'b': [('kmap', 'b')],
    'rho_in': [('kmap', 'rho_in')],
    'rho_out': [('kmap', 'rho_out')],
    'kmap_kind': [('kmap', 'kind')],
    'eps': [('extension', 'eps')],
    'budget': [('borel', 'budget')],
    'J': [('borel', 'J')],
    'jet': [('borel', 'jet')],
    'seed': [('verify', 'seed')],
    'tol': [('tolerances', 'jet'), ('tolerances', 'fd')],
    'out': [('output', 'path')]
}


def nest_flat_keys(config: Dict[str, Any]) -> tuple[Dict[str, Any], List[str]]:
    """
    Move flag-named top-level keys into their sections.

    A flat value wins over the same field given inside its section.

    Args:
        config: Configuration as read from the file

    Returns:
        Tuple of (nested configuration, top-level keys that are neither sections nor flags)
    """
    nested = copy.deepcopy(config)
    unknown = []
    for key in list(nested):
        if key in CONFIG_SCHEMA:
            continue
        if key not in FLAT_KEYS:
            unknown.append(key)
            continue
        value = nested.pop(key)
        for section_name, field_name in FLAT_KEYS[key]:
            section = nested.setdefault(section_name, {})
            if isinstance(section, dict):
                section[field_name] = value
    return nested, unknown


def fill_defaults(config: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of config with absent sections and fields taken from DEFAULT_CONFIG."""
    filled = copy.deepcopy(config)
    for section_name, defaults in DEFAULT_CONFIG.items():
        section = filled.setdefault(section_name, {})
        if isinstance(section, dict):
            for field_name, value in defaults.items():
                section.setdefault(field_name, copy.deepcopy(value))
    return filled


def _type_name(expected):
    if isinstance(expected, tuple):
        return " or ".join(t.__name__ for t in expected)
    return expected.__name__


def validate_value(value: Any, schema: Dict[str, Any], field_name: str = '') -> tuple[bool, str]:
    """
    Validate a single value against its schema.

    Args:
        value: Value to validate
        schema: Schema definition for the value
        field_name: Name of the field for error messages

    Returns:
        Tuple of (is_valid, error_message)
    """
    if schema.get('required', False) and value is None:
        return False, f"{field_name} is required but not provided"

    if value is None:
        return True, ""

    expected_type = schema.get('type')
    if expected_type and (isinstance(value, bool) or not isinstance(value, expected_type)):
        return False, f"{field_name} must be of type {_type_name(expected_type)}, got {type(value).__name__}"

    if expected_type in (int, NUMBER):
        if 'min' in schema and value < schema['min']:
            return False, f"{field_name} must be >= {schema['min']}, got {value}"
        if 'exclusive_min' in schema and value <= schema['exclusive_min']:
            return False, f"{field_name} must be > {schema['exclusive_min']}, got {value}"
        if 'max' in schema and value > schema['max']:
            return False, f"{field_name} must be <= {schema['max']}, got {value}"

    elif expected_type == str:
        if 'allowed' in schema and value not in schema['allowed']:
            return False, f"{field_name} must be one of {schema['allowed']}, got '{value}'"

    elif expected_type == list:
        if 'item_type' in schema:
            item_type = schema['item_type']
            for i, item in enumerate(value):
                if isinstance(item, bool) or not isinstance(item, item_type):
                    return False, f"{field_name}[{i}] must be of type {_type_name(item_type)}, got {type(item).__name__}"
                if 'item_min' in schema and item_type is not str and item <= schema['item_min']:
                    return False, f"{field_name}[{i}] must be > {schema['item_min']}, got {item}"

    return True, ""


def validate_cross_fields(config: Dict[str, Any]) -> List[str]:
    """
    Checks that involve more than one field.

    Args:
        config: Configuration dictionary

    Returns:
        List of error messages
    """
    errors = []
    kmap = config.get('kmap', {})
    space = config.get('space', {})

    a, b = kmap.get('a'), kmap.get('b')
    if isinstance(a, NUMBER) and isinstance(b, NUMBER) and not a < b:
        errors.append(f"kmap.a must be below kmap.b, got a={a}, b={b}")

    rho_in, rho_out = kmap.get('rho_in'), kmap.get('rho_out')
    if isinstance(rho_in, NUMBER) and isinstance(rho_out, NUMBER) and not rho_in < rho_out:
        errors.append(f"kmap.rho_in must be below kmap.rho_out, got {rho_in}, {rho_out}")

    p = space.get('p')
    if isinstance(p, int) and p % 2:
        errors.append(f"space.p must be even for a smooth bump, got {p}")

    enabled = config.get('suites', {}).get('enabled', [])
    d = space.get('d')
    if isinstance(enabled, list) and 'extension' in enabled and isinstance(d, int) and (d < 3 or d % 2 == 0):
        errors.append(f"space.d must be odd and >= 3 for Simpson quadrature, got {d}")

    return errors


def validate_configuration(config: Dict[str, Any]) -> tuple[bool, List[str]]:
    """
    Validate entire configuration against schema.

    Args:
        config: Configuration dictionary to validate

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    for section_name, section_schema in CONFIG_SCHEMA.items():
        section_data = config.get(section_name, {})
        if not isinstance(section_data, dict):
            errors.append(f"{section_name} must be an object")
            continue

        for field_name, field_schema in section_schema.items():
            field_value = section_data.get(field_name)
            is_valid, error_msg = validate_value(field_value, field_schema, f"{section_name}.{field_name}")
            if not is_valid:
                errors.append(error_msg)

    if 'suites' in config and isinstance(config['suites'], dict):
        enabled = config['suites'].get('enabled')
        if isinstance(enabled, list):
            for suite in enabled:
                if suite not in VALID_SUITES:
                    errors.append(f"Unknown suite in enabled list: {suite}")

    errors.extend(validate_cross_fields(config))
    return len(errors) == 0, errors


def sanitize_configuration(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Sanitize configuration by replacing invalid values with defaults.

    Args:
        config: Configuration to sanitize

    Returns:
        Sanitized configuration
    """
    sanitized = copy.deepcopy(config)

    for section_name, section_schema in CONFIG_SCHEMA.items():
        if not isinstance(sanitized.get(section_name), dict):
            sanitized[section_name] = {}
        section = sanitized[section_name]
        defaults = DEFAULT_CONFIG.get(section_name, {})

        for field_name, field_schema in section_schema.items():
            is_valid, error_msg = validate_value(section.get(field_name), field_schema, field_name)
            if not is_valid:
                logger.warning(f"Replacing {section_name}.{field_name}: {error_msg}")
                section.pop(field_name, None)
            if field_name in defaults:
                section.setdefault(field_name, copy.deepcopy(defaults[field_name]))

    kmap = sanitized['kmap']
    if not kmap['a'] < kmap['b']:
        kmap['a'], kmap['b'] = DEFAULT_CONFIG['kmap']['a'], DEFAULT_CONFIG['kmap']['b']
    if not kmap['rho_in'] < kmap['rho_out']:
        kmap['rho_in'], kmap['rho_out'] = DEFAULT_CONFIG['kmap']['rho_in'], DEFAULT_CONFIG['kmap']['rho_out']

    space = sanitized['space']
    if space['p'] % 2:
        space['p'] = DEFAULT_CONFIG['space']['p']

    suites = sanitized['suites']
    suites['enabled'] = [s for s in suites['enabled'] if s in VALID_SUITES]
    if not suites['enabled']:
        suites['enabled'] = list(DEFAULT_CONFIG['suites']['enabled'])

    if 'extension' in suites['enabled'] and (space['d'] < 3 or space['d'] % 2 == 0):
        space['d'] = DEFAULT_CONFIG['space']['d']

    logger.info("Configuration sanitized successfully")
    return sanitized
