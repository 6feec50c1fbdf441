from .config_utils import load_config_data, update_config, validate_config
from .metrics import ErrorReport, banded_norms, interface_l1, observed_order, compute_errors
from .utils import collect_results
