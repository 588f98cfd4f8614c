#pragma once

#include "qbinom/qcontrol/bellman.hpp"
#include "qbinom/qcontrol/circle.hpp"
#include "qbinom/qcontrol/controlled_model.hpp"
#include "qbinom/qcontrol/cost.hpp"
#include "qbinom/qcontrol/exhaustive.hpp"
#include "qbinom/qcontrol/lyapunov.hpp"
#include "qbinom/qcontrol/strategy.hpp"
