// photonsim.hpp - umbrella header

#pragma once

#include "photonsim/amplitudes.hpp"
#include "photonsim/convolution.hpp"
#include "photonsim/errors.hpp"
#include "photonsim/io.hpp"
#include "photonsim/kernels.hpp"
#include "photonsim/model.hpp"
#include "photonsim/observables.hpp"
#include "photonsim/oracle.hpp"
#include "photonsim/parallel.hpp"
#include "photonsim/quadrature.hpp"
#include "photonsim/run_config.hpp"
#include "photonsim/verify.hpp"

namespace photonsim {

inline constexpr const char* version = "0.1.0";

}  // namespace photonsim
