#pragma once

#include "ternary_qec/stats/appendix.hpp"
#include "ternary_qec/stats/descriptive.hpp"
#include "ternary_qec/stats/dfa.hpp"
#include "ternary_qec/stats/fit.hpp"
#include "ternary_qec/stats/kww.hpp"
#include "ternary_qec/stats/syndrome.hpp"
#include "ternary_qec/stats/tests.hpp"
