#pragma once

#include "lhmf/arith.hpp"
#include "lhmf/eichler.hpp"
#include "lhmf/errors.hpp"
#include "lhmf/jet.hpp"
#include "lhmf/operators.hpp"
#include "lhmf/point.hpp"
#include "lhmf/qforms.hpp"
#include "lhmf/series.hpp"
#include "lhmf/specfun.hpp"
#include "lhmf/summation.hpp"
#include "lhmf/verify.hpp"
