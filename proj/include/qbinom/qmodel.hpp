#pragma once

#include "qbinom/qmodel/density.hpp"
#include "qbinom/qmodel/detection.hpp"
#include "qbinom/qmodel/model.hpp"
#include "qbinom/qmodel/noise.hpp"
#include "qbinom/qmodel/time_grid.hpp"
