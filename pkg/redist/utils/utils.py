import os.path as osp
import glob
import numpy as np
import pandas as pd
from .config_utils import check_dir_exist


"""
############################## Global Arguments ##############################
"""
COLUMN_NAMES_DICT = {
                'case': 'Case',
                'level': 'Level',
                'h': 'Mesh Size',
                'K': 'Elements',
                'band_eps': 'Band',
                'l2': 'L2 Error',
                'linf': 'Linf Error',
                'l1': 'L1 Interface Error',
                'runtime_s': 'Runtime'}

RESULTS_PATTERN = 'results_*.csv'


"""
############################## Functions ##############################
"""

def generate_cumulative_timing(mod_timing):
    """Running total of per-run wall clock times, in seconds."""
    return np.cumsum(np.asarray(mod_timing, dtype=float)).tolist()


def results_to_df(csv_file):
    df = pd.read_csv(csv_file)
    if df.empty:
        return None
    if 'runtime_s' in df.columns:
        df['cumulative_runtime_s'] = generate_cumulative_timing(df['runtime_s'].values)
    return df


def collect_results(results_dir, pattern=RESULTS_PATTERN, rename=False):
    """
    Gather every results table below `results_dir` into DataFrames keyed by
    (case, N). Tables of the same key are concatenated in file order.
    """
    dirname = osp.abspath(osp.expanduser(results_dir))
    check_dir_exist(dirname)

    frames = {}
    for csv_file in sorted(glob.glob(osp.join(dirname, '**', pattern), recursive=True)):
        df = results_to_df(csv_file)
        if df is None:
            continue
        df['source'] = osp.relpath(csv_file, dirname)
        for key, group in df.groupby(['case', 'N'], sort=False):
            frames.setdefault(key, []).append(group)

    dfs = {}
    for key, groups in frames.items():
        df = pd.concat(groups, ignore_index=True)
        dfs[key] = df.rename(columns=COLUMN_NAMES_DICT) if rename else df
    return dfs
