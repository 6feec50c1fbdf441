import os
import os.path as osp
import ast
import copy
import math
import importlib.util
import yaml
from dotmap import DotMap


"""
############################## Global Arguments ##############################
"""
CASE_NAMES = ('circle', 'ellipse', 'xcircles', 'square', 'multi')
LIMITER_CHOICES = ('auto', 'on', 'off')
MAX_ORDER = 7

DEFAULT_CONFIG = dict(case=dict(name='circle',
                                multi_circles=None),

                      discretization=dict(order=3,
                                          levels=1,
                                          mesh=None,
                                          half_width=2.0,
                                          h=0.4),

                      solver=dict(cfl=1.0,
                                  final_time='auto',
                                  band=math.inf,
                                  bands=None,
                                  progress=False),

                      limiter=dict(mode='auto',
                                   threshold=1.0,
                                   fv_order=2),

                      output=dict(results_dir='results/',
                                  write_fields=True,
                                  plot=False,
                                  dump_operators=False,
                                  log_level='INFO'))

# command line flag -> (section, key)
FLAG_MAP = {'case': ('case', 'name'),
            'order': ('discretization', 'order'),
            'levels': ('discretization', 'levels'),
            'mesh': ('discretization', 'mesh'),
            'h': ('discretization', 'h'),
            'cfl': ('solver', 'cfl'),
            'band': ('solver', 'band'),
            'final_time': ('solver', 'final_time'),
            'limiter': ('limiter', 'mode'),
            'threshold': ('limiter', 'threshold'),
            'fv_order': ('limiter', 'fv_order'),
            'out': ('output', 'results_dir')}


"""
############################## File helpers ##############################
"""
def check_file_exist(filename, msg_tmpl='file "{}" does not exist'):
    if not osp.isfile(filename):
        raise FileNotFoundError(msg_tmpl.format(filename))


def check_dir_exist(dirname, msg_tmpl='Directory "{}" does not exist'):
    if not osp.isdir(dirname):
        raise FileNotFoundError(msg_tmpl.format(dirname))


def mkdir_or_exist(dir_name, mode=0o777):
    if dir_name == '':
        return
    os.makedirs(osp.expanduser(dir_name), mode=mode, exist_ok=True)


def _validate_py_syntax(filename):
    with open(filename, 'r') as f:
        content = f.read()
    try:
        ast.parse(content)
    except SyntaxError as e:
        raise SyntaxError('There are syntax errors in config file {0}: {1}'.format(filename, e))


def _parse_scalar(text):
    """Literal for numbers, booleans, None and lists; the raw string otherwise."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ('inf', '+inf', 'infinity'):
        return math.inf
    if lowered in ('true', 'false'):
        return lowered == 'true'
    if lowered in ('none', 'null', ''):
        return None
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def load_flat_config(filename):
    """
    Flat `key = value` file whose keys mirror the command line flags
    (dashes or underscores). Blank lines and `#` comments are skipped.
    """
    values = {}
    with open(filename, 'r') as f:
        for lineno, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError("{0}:{1:d}: expected 'key = value', got '{2}'".format(filename, lineno, line))
            key, value = line.split('=', 1)
            key = key.strip().lstrip('-').replace('-', '_')
            if key not in FLAG_MAP:
                raise ValueError("{0}:{1:d}: unknown key '{2}'".format(filename, lineno, key))
            values[key] = _parse_scalar(value)
    return update_config(DotMap(copy.deepcopy(DEFAULT_CONFIG)), values)


def load_config_data(filepath):
    """
    Load a python (`config = dict(...)`), yaml or flat key=value config file
    on top of DEFAULT_CONFIG.
    """
    filename = osp.abspath(osp.expanduser(filepath))
    check_file_exist(filename)
    fileExtname = osp.splitext(filename)[1]
    if fileExtname not in ['.py', '.yaml', '.yml', '.cfg', '.txt']:
        raise IOError('Only py/yml/yaml/cfg type are supported now!')

    if fileExtname in ['.cfg', '.txt']:
        return load_flat_config(filename)
    if fileExtname in ['.yaml', '.yml']:
        with open(filename, 'r') as config_file:
            configdata = yaml.load(config_file, Loader=yaml.FullLoader)
    else:
        _validate_py_syntax(filename)
        spec = importlib.util.spec_from_file_location("config", filename)
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        configdata = copy.deepcopy(mod.config)
    return merge_config(DEFAULT_CONFIG, configdata or {})


def merge_config(base, overrides):
    """Section-wise merge of a nested dict onto a copy of `base`."""
    merged = copy.deepcopy(base)
    for section, values in overrides.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return DotMap(merged)


def update_config(cfg, overrides):
    """
    Apply command line values (flag name -> value, None meaning unset) to a
    loaded config.
    """
    for flag, value in overrides.items():
        if value is None or flag not in FLAG_MAP:
            continue
        section, key = FLAG_MAP[flag]
        if flag == 'band' and isinstance(value, str):
            value = _parse_scalar(value)
        if flag == 'final_time' and isinstance(value, str) and value != 'auto':
            value = float(value)
        cfg[section][key] = value
    return cfg


def validate_config(cfg):
    """Compulsory keys and value ranges of a run configuration."""
    for section, keys in (('case', ['name']),
                          ('discretization', ['order', 'levels']),
                          ('solver', ['cfl', 'final_time', 'band']),
                          ('limiter', ['mode', 'fv_order']),
                          ('output', ['results_dir'])):
        assert section in cfg, "'{0}' is a compulsory section of the config".format(section)
        for key in keys:
            assert key in cfg[section], \
                "'{0}' is a compulsory argument. Include it as a key in {1}".format(key, section)

    if cfg.case.name not in CASE_NAMES:
        raise ValueError("Unknown case '{0}', expected one of {1}".format(cfg.case.name, CASE_NAMES))
    order = cfg.discretization.order
    if not isinstance(order, int) or not 1 <= order <= MAX_ORDER:
        raise ValueError("order must be an integer in [1, {0}], got {1}".format(MAX_ORDER, order))
    if int(cfg.discretization.levels) < 1:
        raise ValueError("levels must be >= 1, got {0}".format(cfg.discretization.levels))
    if not float(cfg.solver.cfl) > 0:
        raise ValueError("cfl must be positive, got {0}".format(cfg.solver.cfl))
    if not float(cfg.solver.band) > 0:
        raise ValueError("band must be positive or inf, got {0}".format(cfg.solver.band))
    final_time = cfg.solver.final_time
    if final_time != 'auto' and not float(final_time) > 0:
        raise ValueError("final_time must be 'auto' or positive, got {0}".format(final_time))
    if cfg.limiter.mode not in LIMITER_CHOICES and cfg.limiter.mode != 'always_on':
        raise ValueError("limiter must be one of {0}, got '{1}'".format(LIMITER_CHOICES, cfg.limiter.mode))
    if cfg.limiter.fv_order not in (1, 2):
        raise ValueError("fv_order must be 1 or 2, got {0}".format(cfg.limiter.fv_order))
    mesh = cfg.discretization.mesh
    if mesh:
        check_file_exist(osp.abspath(osp.expanduser(mesh)))
    return cfg
