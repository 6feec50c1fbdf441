# Config loading, command line overrides and result collection
import math
import os.path as osp
import pandas as pd
import pytest
from dotmap import DotMap

from redist.utils import load_config_data, update_config, validate_config, collect_results
from redist.utils.config_utils import DEFAULT_CONFIG, merge_config


CONFIG_DIR = osp.join(osp.dirname(osp.abspath(__file__)), '..', 'configs')


def test_python_config():
    cfg = load_config_data(osp.join(CONFIG_DIR, 'config_circle.py'))
    assert cfg.case.name == 'circle'
    assert cfg.discretization.order == 3
    assert cfg.discretization.levels == 3
    assert cfg.solver.band == 0.3
    # keys missing from the file fall back to the defaults
    assert cfg.limiter.fv_order == 2
    validate_config(cfg)


def test_yaml_config():
    cfg = load_config_data(osp.join(CONFIG_DIR, 'yaml', 'config_square.yaml'))
    assert cfg.case.name == 'square'
    assert math.isinf(cfg.solver.band)
    validate_config(cfg)


def test_flat_config(tmp_path):
    cfg = load_config_data(osp.join(CONFIG_DIR, 'config_circle_sweep.cfg'))
    assert cfg.limiter.mode == 'on'
    assert cfg.solver.final_time == 'auto'
    assert cfg.output.results_dir == 'results/forced_limiter'
    validate_config(cfg)

    path = tmp_path / "bad.cfg"
    path.write_text("case = circle\nwidth = 3\n")
    with pytest.raises(ValueError):
        load_config_data(str(path))
    path.write_text("band inf\n")
    with pytest.raises(ValueError):
        load_config_data(str(path))


def test_unsupported_and_missing(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{}")
    with pytest.raises(IOError):
        load_config_data(str(path))
    with pytest.raises(FileNotFoundError):
        load_config_data(str(tmp_path / "missing.py"))


def test_update_config():
    cfg = merge_config(DEFAULT_CONFIG, {})
    update_config(cfg, {'order': 5, 'band': 'inf', 'final_time': '0.75', 'limiter': 'off',
                        'cfl': None, 'unrelated': 3})
    assert cfg.discretization.order == 5
    assert math.isinf(cfg.solver.band)
    assert cfg.solver.final_time == 0.75
    assert cfg.limiter.mode == 'off'
    assert cfg.solver.cfl == 1.0


@pytest.mark.parametrize("section,key,value", [
    ('case', 'name', 'torus'),
    ('discretization', 'order', 0),
    ('discretization', 'order', 8),
    ('discretization', 'levels', 0),
    ('solver', 'cfl', 0.0),
    ('solver', 'band', -1.0),
    ('solver', 'final_time', 0.0),
    ('limiter', 'mode', 'sometimes'),
    ('limiter', 'fv_order', 3),
])
def test_validate_ranges(section, key, value):
    cfg = merge_config(DEFAULT_CONFIG, {})
    cfg[section][key] = value
    with pytest.raises(ValueError):
        validate_config(cfg)


def test_validate_compulsory_key():
    cfg = merge_config(DEFAULT_CONFIG, {})
    del cfg.discretization['order']
    with pytest.raises(AssertionError, match="'order' is a compulsory argument"):
        validate_config(cfg)
    cfg = merge_config(DEFAULT_CONFIG, {'discretization': {'mesh': '/nonexistent/mesh.msh'}})
    with pytest.raises(FileNotFoundError):
        validate_config(cfg)


def test_merge_keeps_defaults():
    cfg = merge_config(DEFAULT_CONFIG, {'solver': {'cfl': 0.5}})
    assert isinstance(cfg, DotMap)
    assert cfg.solver.cfl == 0.5
    assert cfg.solver.final_time == 'auto'
    assert DEFAULT_CONFIG['solver']['cfl'] == 1.0


def test_collect_results(tmp_path):
    first = tmp_path / "circle" / "N3"
    second = tmp_path / "square" / "N2"
    first.mkdir(parents=True)
    second.mkdir(parents=True)
    pd.DataFrame({'case': ['circle'] * 2, 'N': [3, 3], 'level': [0, 1],
                  'l2': [1e-2, 1e-3], 'runtime_s': [1.0, 4.0]}).to_csv(first / "results_circle_N3.csv", index=False)
    pd.DataFrame({'case': ['square'], 'N': [2], 'level': [0],
                  'l2': [5e-2], 'runtime_s': [2.0]}).to_csv(second / "results_square_N2.csv", index=False)
    (tmp_path / "notes.csv").write_text("a,b\n1,2\n")

    dfs = collect_results(str(tmp_path))
    assert set(dfs) == {('circle', 3), ('square', 2)}
    assert dfs[('circle', 3)]['cumulative_runtime_s'].tolist() == [1.0, 5.0]
    renamed = collect_results(str(tmp_path), rename=True)
    assert 'L2 Error' in renamed[('square', 2)].columns
    with pytest.raises(FileNotFoundError):
        collect_results(str(tmp_path / "missing"))
