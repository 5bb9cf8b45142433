#pragma once

#include "qcalc/expression.hpp"
#include "qcalc/limit_engine.hpp"
#include "qcalc/newton_interpolation.hpp"
#include "qcalc/power_identities.hpp"
#include "qcalc/q_operators.hpp"
#include "qcalc/rational.hpp"
#include "qcalc/taylor_engine.hpp"
