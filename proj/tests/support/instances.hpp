#pragma once

// Shared random-instance generators for tests and the acceptance suite.

#include <cstdint>

#include "fdswipt/rng.hpp"
#include "fdswipt/sdp.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt::testsupport {

Matrix random_matrix(int rows, int cols, GaussianSource& rng);
Matrix random_hermitian(int dim, GaussianSource& rng);
Matrix random_psd(int dim, GaussianSource& rng);

// Defaults used by the sweep experiments, with a configurable budget.
SystemParams desk_params(int mt = 3, int mr = 2, double p_max = 10.0);

// Loose-constraint variant: tiny SINR floors, generous eavesdropper cap,
// no harvesting requirement. Feasible for almost every channel draw.
SystemParams loose_params(int mt = 3, int mr = 2);

}  // namespace fdswipt::testsupport
