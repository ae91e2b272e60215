#pragma once

/// Umbrella header: invariant almost-Hermitian geometry on Lie algebras.

#include "hermlie/tensor.hpp"
#include "hermlie/lie_algebra.hpp"
#include "hermlie/hermitian.hpp"
#include "hermlie/connection.hpp"
#include "hermlie/curvature.hpp"
#include "hermlie/verifier.hpp"
#include "hermlie/almost_abelian.hpp"
#include "hermlie/presets.hpp"
#include "hermlie/json_io.hpp"
#include "hermlie/cli.hpp"
