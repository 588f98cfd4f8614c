#pragma once

#include "qbinom/qlin/atom_operator.hpp"
#include "qbinom/qlin/complex_matrix.hpp"
#include "qbinom/qlin/spectral.hpp"
