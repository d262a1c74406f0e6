#include <pybind11/pybind11.h>
PYBIND11_MODULE(_qjf, m) { m.doc() = "placeholder"; }
