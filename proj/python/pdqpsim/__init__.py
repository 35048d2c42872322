"""Quantum query circuits with non-collapsing samples: python surface."""

try:
    from ._pdqpsim import *  # noqa: F401,F403  (wheel layout: extension inside the package)
    from ._pdqpsim import __doc__ as _core_doc
except ImportError:  # in-tree build: the extension sits next to the package on sys.path
    from _pdqpsim import *  # noqa: F401,F403
    from _pdqpsim import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
