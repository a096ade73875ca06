#pragma once

#include "ternary_qec/dataset.hpp"
#include "ternary_qec/decode.hpp"
#include "ternary_qec/error_model.hpp"
#include "ternary_qec/errors.hpp"
#include "ternary_qec/ingest.hpp"
#include "ternary_qec/lattice.hpp"
#include "ternary_qec/montecarlo.hpp"
#include "ternary_qec/rng.hpp"
#include "ternary_qec/stats.hpp"
#include "ternary_qec/tables.hpp"
