# Copyright 2026 The pedtoolkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Caltech pedestrian dataset conversion and evaluation toolkit.

The heavy lifting lives in the `_pedtoolkit` extension module; this package
re-exports it and adds a couple of conveniences.
"""

import json as _json

try:
    from pedtoolkit._pedtoolkit import *  # noqa: F401,F403  (installed layout)
    from pedtoolkit import _pedtoolkit as _ext
except ImportError:  # build-tree layout: extension module on PYTHONPATH
    from _pedtoolkit import *  # noqa: F401,F403
    import _pedtoolkit as _ext

__version__ = _ext.__version__


def convert_dataset(root, out, **kwargs):
    """Convert a Caltech-layout tree to YOLO training data.

    Thin wrapper over the extension function; returns the manifest as a dict.
    """
    return _json.loads(_ext.convert_dataset(str(root), str(out), **kwargs))
