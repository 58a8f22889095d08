#pragma once

#include "exactmath.hpp"
#include "coefficients.hpp"
#include "psi_series.hpp"
#include "sweep.hpp"
#include "verifier.hpp"
