// Whole library. lrb/io/scenario.hpp is left out: it needs vendor/json.hpp.
#pragma once

#include "lrb/errors.hpp"
#include "lrb/numerics/inversion.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/roots.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/random.hpp"
#include "lrb/parallel.hpp"
#include "lrb/kernels.hpp"
#include "lrb/terminal_law.hpp"
#include "lrb/bridge.hpp"
#include "lrb/random_bridge.hpp"
#include "lrb/sampler.hpp"
#include "lrb/pricing.hpp"
#include "lrb/stats.hpp"
#include "lrb/io/output.hpp"
#include "lrb/verification.hpp"
