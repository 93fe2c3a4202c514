import os
import subprocess
import sys

import pytest

from molheat import kernels


def _backend_with(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("MOLHEAT_PURE_PYTHON", None)
    else:
        env["MOLHEAT_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", "from molheat import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_var_forces_python_backend():
    assert _backend_with("1") == "python"


def test_default_prefers_compiled_when_built():
    try:
        kernels.get_backend("compiled")
    except ImportError:
        pytest.skip("compiled extension not built")
    assert _backend_with(None) == "compiled"
    assert _backend_with("0") == "compiled"


def test_unknown_backend_name():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
