#pragma once

#include "qbinom/qfilter/filter.hpp"
#include "qbinom/qfilter/parallel.hpp"
#include "qbinom/qfilter/rng.hpp"
#include "qbinom/qfilter/trajectory.hpp"
