#pragma once

#include "qbinom/qoracle/gate.hpp"
#include "qbinom/qoracle/oracle.hpp"
