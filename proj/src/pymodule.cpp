#include <pybind11/pybind11.h>
PYBIND11_MODULE(_rtdiff, m) { m.doc() = "stub"; }
